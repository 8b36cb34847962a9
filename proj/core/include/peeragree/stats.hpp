#pragma once

#include <span>
#include <vector>

namespace peeragree {

/// Median; even counts average the two central order statistics. Throws on empty input.
double median(std::vector<double> values);

/// Quantile under the mid-rank convention: the i-th order statistic (1-based) of n
/// sits at probability (i - 0.5)/n, with linear interpolation between neighbours
/// and clamping outside [0.5/n, 1 - 0.5/n]. `q` is in [0, 1]. Throws on empty input.
double midrank_quantile(std::vector<double> values, double q);

double mean(std::span<const double> values);

/// Pearson correlation; returns 0 when either side is constant.
double pearson(std::span<const double> x, std::span<const double> y);

}  // namespace peeragree
