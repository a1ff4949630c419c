#include "explorank/search.hpp"

#include <algorithm>
#include <cctype>
#include <string>
#include <tuple>

namespace explorank {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::vector<NodeId> search_nodes(const AttributedGraph& g, std::string_view query, std::size_t limit) {
  const auto needle = lower(query);
  struct Hit {
    std::size_t position;
    std::size_t degree;
    NodeId node;
  };
  std::vector<Hit> hits;
  for (NodeId i = 0; i < g.node_count(); ++i) {
    const auto pos = lower(g.label(i)).find(needle);
    if (pos != std::string::npos) hits.push_back({pos, g.degree(i), i});
  }
  const auto keep = std::min(limit, hits.size());
  std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(keep), hits.end(),
                    [](const Hit& a, const Hit& b) {
                      return std::tuple(a.position, b.degree, a.node) < std::tuple(b.position, a.degree, b.node);
                    });
  std::vector<NodeId> out;
  out.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) out.push_back(hits[i].node);
  return out;
}

}  // namespace explorank
