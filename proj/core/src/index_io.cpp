#include "explorank/index_io.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "binary_io.hpp"
#include "explorank/error.hpp"
#include "explorank/fingerprint.hpp"

namespace explorank {

namespace {
constexpr char kMagic[8] = {'E', 'X', 'R', 'K', 'I', 'D', 'X', '1'};
constexpr int kVersion = 1;
}  // namespace

struct IndexCodec {
  static nlohmann::ordered_json header(const AttributedGraph& g, const SurpriseIndex& idx) {
    nlohmann::ordered_json h;
    h["version"] = kVersion;
    h["graph_fingerprint"] = to_hex(idx.graph_fingerprint());
    h["node_count"] = idx.node_count();
    h["schema"] = schema_to_json(g.schema());
    h["lambda"] = idx.lambda();
    auto bins = nlohmann::ordered_json::array();
    for (const auto& b : idx.binnings()) {
      nlohmann::ordered_json e;
      e["feature"] = b->feature();
      e["kind"] = to_string(b->kind());
      if (b->kind() == FeatureKind::numerical) {
        e["edges"] = b->edges();
      } else {
        e["categories"] = b->categories();
      }
      e["fingerprint"] = to_hex(b->fingerprint());
      bins.push_back(std::move(e));
    }
    h["binnings"] = std::move(bins);
    h["store_local"] = idx.has_local();
    return h;
  }

  static void write(std::ostream& out, const AttributedGraph& g, const SurpriseIndex& idx) {
    idx.validate_against(g);
    out.write(kMagic, sizeof kMagic);
    detail::put_string(out, header(g, idx).dump());
    g.write_canonical(out);
    for (std::size_t j = 0; j < idx.feature_count(); ++j) {
      detail::put_array(out, idx.global(j).mass());
    }
    detail::put_array(out, std::span<const double>(idx.per_feature_));
    for (const auto& local : idx.local_) detail::put_array(out, std::span<const double>(local));
  }

  static IndexBundle read(std::istream& in) {
    char magic[sizeof kMagic];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) throw IndexMismatch("not an explorank index file");
    nlohmann::ordered_json h;
    try {
      h = nlohmann::ordered_json::parse(detail::get_string(in));
    } catch (const nlohmann::json::exception& e) {
      throw IndexMismatch(std::string("corrupt index header: ") + e.what());
    }
    try {
      if (h.at("version").get<int>() != kVersion) throw IndexMismatch("unsupported index version");
      IndexBundle bundle{AttributedGraph::read_canonical(in), SurpriseIndex{}};
      auto& g = bundle.graph;
      auto& idx = bundle.index;
      idx.node_count_ = h.at("node_count").get<std::size_t>();
      idx.graph_fingerprint_ = parse_hex(h.at("graph_fingerprint").get<std::string>());
      if (g.node_count() != idx.node_count_ || g.fingerprint() != idx.graph_fingerprint_) {
        throw IndexMismatch("index graph section does not match its recorded fingerprint");
      }
      if (schema_from_json(h.at("schema")) != g.schema()) throw IndexMismatch("index schema disagrees with its graph");
      idx.lambda_ = h.at("lambda").get<std::vector<double>>();
      const auto& bins = h.at("binnings");
      if (bins.size() != g.feature_count() || idx.lambda_.size() != g.feature_count()) {
        throw IndexMismatch("index header feature count disagrees with its graph");
      }
      std::vector<Binning> binnings;
      for (std::size_t j = 0; j < bins.size(); ++j) {
        const auto& e = bins[j];
        const auto kind = parse_feature_kind(e.at("kind").get<std::string>());
        auto b = kind == FeatureKind::numerical
                     ? Binning::numerical(j, e.at("edges").get<std::vector<double>>())
                     : Binning::categorical(j, e.at("categories").get<std::vector<std::string>>());
        if (e.at("feature").get<std::size_t>() != j || to_hex(b.fingerprint()) != e.at("fingerprint").get<std::string>()) {
          throw IndexMismatch("binning fingerprint mismatch for feature " + std::to_string(j));
        }
        binnings.push_back(std::move(b));
      }
      check_binnings(g, binnings);
      for (auto& b : binnings) idx.binnings_.push_back(std::make_shared<const Binning>(std::move(b)));
      for (std::size_t j = 0; j < idx.binnings_.size(); ++j) {
        idx.globals_.emplace_back(idx.binnings_[j], detail::get_array<double>(in));
      }
      idx.per_feature_ = detail::get_array<double>(in);
      if (idx.per_feature_.size() != idx.node_count_ * g.feature_count()) throw IndexMismatch("surprise table has the wrong size");
      if (h.at("store_local").get<bool>()) {
        for (std::size_t j = 0; j < idx.binnings_.size(); ++j) {
          idx.local_.push_back(detail::get_array<double>(in));
          if (idx.local_.back().size() != idx.node_count_ * idx.binnings_[j]->bin_count()) {
            throw IndexMismatch("local distribution table has the wrong size");
          }
        }
      }
      idx.rebuild_aggregate();
      return bundle;
    } catch (const nlohmann::json::exception& e) {
      throw IndexMismatch(std::string("corrupt index header: ") + e.what());
    } catch (const InvalidArgument& e) {
      throw IndexMismatch(std::string("corrupt index: ") + e.what());
    }
  }
};

void write_index(std::ostream& out, const AttributedGraph& g, const SurpriseIndex& index) {
  IndexCodec::write(out, g, index);
}

void write_index_file(const std::string& path, const AttributedGraph& g, const SurpriseIndex& index) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path + " for writing");
  write_index(out, g, index);
  if (!out.flush()) throw Error("failed writing " + path);
}

IndexBundle read_index(std::istream& in) { return IndexCodec::read(in); }

IndexBundle read_index_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open index file " + path);
  return read_index(in);
}

nlohmann::ordered_json binnings_document(const AttributedGraph& g, const SurpriseIndex& index) {
  nlohmann::ordered_json doc;
  doc["version"] = 1;
  doc["graph_fingerprint"] = to_hex(index.graph_fingerprint());
  auto features = nlohmann::ordered_json::array();
  for (std::size_t j = 0; j < index.feature_count(); ++j) {
    features.push_back(histogram_document(g.schema()[j].name, index.global(j)));
  }
  doc["features"] = std::move(features);
  return doc;
}

void write_binnings_file(const std::string& path, const AttributedGraph& g, const SurpriseIndex& index) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << binnings_document(g, index).dump(2) << '\n';
  if (!out.flush()) throw Error("failed writing " + path);
}

}  // namespace explorank
