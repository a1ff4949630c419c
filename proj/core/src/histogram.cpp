#include "explorank/histogram.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "explorank/error.hpp"

namespace explorank {

Histogram::Histogram(std::shared_ptr<const Binning> binning, std::vector<double> mass)
    : binning_(std::move(binning)), mass_(std::move(mass)) {
  if (!binning_) throw InvalidArgument("histogram without a binning");
  if (mass_.size() != binning_->bin_count()) throw InvalidArgument("histogram mass does not match bin count");
  double total = 0.0;
  for (double m : mass_) {
    if (!(m >= 0.0)) throw InvalidArgument("histogram masses must be non-negative");
    total += m;
  }
  if (std::abs(total - 1.0) > 1e-9) throw InvalidArgument("histogram masses must sum to one");
}

bool Histogram::same_binning(const Histogram& other) const noexcept {
  return binning_ == other.binning_ || binning_->fingerprint() == other.binning_->fingerprint();
}

std::vector<std::uint64_t> bin_counts(std::span<const double> values, const Binning& binning) {
  std::vector<std::uint64_t> counts(binning.bin_count(), 0);
  for (double v : values) ++counts[binning.bin_of(v)];
  return counts;
}

Histogram histogram_over(std::span<const double> values, std::shared_ptr<const Binning> binning) {
  if (values.empty()) throw InvalidArgument("histogram over an empty sample");
  if (!binning) throw InvalidArgument("histogram without a binning");
  const auto counts = bin_counts(values, *binning);
  std::vector<double> mass(counts.size());
  const double n = static_cast<double>(values.size());
  for (std::size_t b = 0; b < counts.size(); ++b) mass[b] = static_cast<double>(counts[b]) / n;
  return Histogram(std::move(binning), std::move(mass));
}

void local_mass_into(const AttributedGraph& g, NodeId node, const Binning& binning, std::span<double> out) {
  const auto& values = g.feature(binning.feature()).values;
  std::fill(out.begin(), out.end(), 0.0);
  const auto nbrs = g.neighbors(node);
  for (NodeId nb : nbrs) out[binning.bin_of(values[nb])] += 1.0;
  const double n = static_cast<double>(nbrs.size());
  for (double& m : out) m /= n;
}

Histogram local_distribution(const AttributedGraph& g, NodeId node, std::size_t j,
                             std::shared_ptr<const Binning> binning) {
  if (!g.contains(node)) throw NotFoundError("unknown node index " + std::to_string(node));
  if (!binning || binning->feature() != j) throw InvalidArgument("binning does not belong to feature");
  std::vector<double> mass(binning->bin_count());
  local_mass_into(g, node, *binning, mass);
  return Histogram(std::move(binning), std::move(mass));
}

Histogram global_distribution(const AttributedGraph& g, std::size_t j, std::shared_ptr<const Binning> binning) {
  if (!binning || binning->feature() != j) throw InvalidArgument("binning does not belong to feature");
  return histogram_over(g.feature(j).values, std::move(binning));
}

nlohmann::ordered_json histogram_document(const std::string& feature_name, const Histogram& global) {
  const auto& b = global.binning();
  nlohmann::ordered_json doc;
  doc["version"] = 1;
  doc["feature"] = feature_name;
  doc["kind"] = to_string(b.kind());
  if (b.kind() == FeatureKind::numerical) {
    doc["edges"] = b.edges();
  } else {
    doc["categories"] = b.categories();
  }
  doc["mass"] = std::vector<double>(global.mass().begin(), global.mass().end());
  return doc;
}

Histogram histogram_from_document(const nlohmann::ordered_json& doc, std::size_t feature) {
  try {
    if (doc.at("version").get<int>() != 1) throw InvalidArgument("unsupported histogram document version");
    const auto kind = parse_feature_kind(doc.at("kind").get<std::string>());
    auto binning = std::make_shared<const Binning>(
        kind == FeatureKind::numerical
            ? Binning::numerical(feature, doc.at("edges").get<std::vector<double>>())
            : Binning::categorical(feature, doc.at("categories").get<std::vector<std::string>>()));
    return Histogram(std::move(binning), doc.at("mass").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed histogram document: ") + e.what());
  }
}

}  // namespace explorank
