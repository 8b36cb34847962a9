#include "peeragree/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "peeragree/error.hpp"

namespace peeragree {

double median(std::vector<double> values) {
    if (values.empty()) throw Error("median of an empty set");
    const std::size_t n = values.size();
    const auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(values.begin(), mid, values.end());
    const double upper = *mid;
    if (n % 2 == 1) return upper;
    const double lower = *std::max_element(values.begin(), mid);
    return (lower + upper) / 2.0;
}

double midrank_quantile(std::vector<double> values, double q) {
    if (values.empty()) throw Error("quantile of an empty set");
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    // 1-based position h with (h - 0.5) / n == q
    const double h = n * q + 0.5;
    if (h <= 1.0) return values.front();
    if (h >= n) return values.back();
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const double frac = h - static_cast<double>(lo);
    const double a = values[lo - 1];
    const double b = values[lo];
    return frac == 0.0 ? a : a + frac * (b - a);
}

double mean(std::span<const double> values) {
    if (values.empty()) throw Error("mean of an empty set");
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.empty()) throw Error("pearson: size mismatch or empty input");
    const double mx = mean(x);
    const double my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace peeragree
