#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace ptfprg {

inline constexpr double kZ95 = 1.96;

/// Pairwise (cascade) summation.
inline double pairwise_sum(std::span<const double> v)
{
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) {
            s += x;
        }
        return s;
    }
    const std::size_t h = v.size() / 2;
    return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

/// 95% normal-approximation half-width for a frequency.
inline double frequency_ci(double p_hat, std::uint64_t trials)
{
    if (trials == 0) {
        return 0.0;
    }
    return kZ95 * std::sqrt(std::max(0.0, p_hat * (1.0 - p_hat)) / static_cast<double>(trials));
}

/// Standard error of a frequency (no 1.96 factor).
inline double frequency_se(double p_hat, std::uint64_t trials)
{
    return frequency_ci(p_hat, trials) / kZ95;
}

/// Type-7 quantile of already-sorted data.
inline double quantile_sorted(std::span<const double> sorted, double prob)
{
    if (sorted.empty()) {
        throw std::invalid_argument("quantile of empty sample");
    }
    if (!(prob >= 0.0 && prob <= 1.0)) {
        throw std::invalid_argument("quantile level outside [0, 1]");
    }
    const double h = (static_cast<double>(sorted.size()) - 1.0) * prob;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double a = sorted[lo];
    const double b = sorted[hi];
    const double frac = h - static_cast<double>(lo);
    if (a == b || frac == 0.0) {
        return a;
    }
    return a + frac * (b - a);
}

/// 95% half-width for a quantile from the binomial order-statistic interval.
inline double quantile_ci(std::span<const double> sorted, double prob)
{
    const double n = static_cast<double>(sorted.size());
    const double spread = kZ95 * std::sqrt(n * prob * (1.0 - prob));
    const double lo_p = std::clamp((n * prob - spread) / n, 0.0, 1.0);
    const double hi_p = std::clamp((n * prob + spread) / n, 0.0, 1.0);
    const double lo = quantile_sorted(sorted, lo_p);
    const double hi = quantile_sorted(sorted, hi_p);
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
        return std::numeric_limits<double>::infinity();
    }
    return 0.5 * (hi - lo);
}

/// Standard normal CDF.
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

} // namespace ptfprg
