#pragma once

#include <cstdint>
#include <span>

#include "explorank/histogram.hpp"

namespace explorank {

/// D(P||Q) = sum_b P(b) log2(P(b)/Q(b)) in bits, with 0 log(0/q) = 0.
/// Throws InvalidArgument on a size mismatch or where P(b) > 0 and Q(b) = 0.
double kl_divergence(std::span<const double> p, std::span<const double> q);

/// Jensen-Shannon divergence in bits: D(P||M)/2 + D(G||M)/2 with M = (P+G)/2.
/// Symmetric, zero exactly when P == G, and bounded by 1.
double js_divergence(std::span<const double> p, std::span<const double> g);

/// Histogram forms; throw InvalidArgument when the binnings differ.
double kl_divergence(const Histogram& p, const Histogram& q);
double js_divergence(const Histogram& p, const Histogram& g);

/// Number of js_divergence evaluations made on the calling thread since the last reset.
std::uint64_t js_evaluation_count() noexcept;
void reset_js_evaluation_count() noexcept;

}  // namespace explorank
