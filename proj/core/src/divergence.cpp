#include "explorank/divergence.hpp"

#include <algorithm>
#include <cmath>

#include "explorank/error.hpp"

namespace explorank {
namespace {

thread_local std::uint64_t js_evaluations = 0;

void require_same_size(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("distributions have different bin counts");
}

}  // namespace

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  require_same_size(p, q);
  double d = 0.0;
  for (std::size_t b = 0; b < p.size(); ++b) {
    if (p[b] == 0.0) continue;
    if (q[b] == 0.0) throw InvalidArgument("KL divergence is infinite: Q(b) = 0 where P(b) > 0");
    d += p[b] * std::log2(p[b] / q[b]);
  }
  return std::max(d, 0.0);
}

double js_divergence(std::span<const double> p, std::span<const double> g) {
  require_same_size(p, g);
  ++js_evaluations;
  double d = 0.0;
  for (std::size_t b = 0; b < p.size(); ++b) {
    const double m = 0.5 * (p[b] + g[b]);
    double term = 0.0;
    if (p[b] > 0.0) term += p[b] * std::log2(p[b] / m);
    if (g[b] > 0.0) term += g[b] * std::log2(g[b] / m);
    d += term;
  }
  return std::clamp(0.5 * d, 0.0, 1.0);
}

double kl_divergence(const Histogram& p, const Histogram& q) {
  if (!p.same_binning(q)) throw InvalidArgument("KL divergence between histograms with different binnings");
  return kl_divergence(p.mass(), q.mass());
}

double js_divergence(const Histogram& p, const Histogram& g) {
  if (!p.same_binning(g)) throw InvalidArgument("JS divergence between histograms with different binnings");
  return js_divergence(p.mass(), g.mass());
}

std::uint64_t js_evaluation_count() noexcept { return js_evaluations; }
void reset_js_evaluation_count() noexcept { js_evaluations = 0; }

}  // namespace explorank
