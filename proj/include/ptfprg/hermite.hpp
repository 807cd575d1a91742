#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>

#include "ptfprg/multi_index.hpp"

namespace ptfprg {

/// Normalized probabilists' Hermite polynomial h_m(t) = He_m(t) / sqrt(m!).
///
/// Evaluated with the three-term recurrence He_{m+1} = t He_m - m He_{m-1},
/// carried directly in normalized form so large m does not overflow.
inline double hermite(int m, double t)
{
    if (m < 0) {
        throw std::invalid_argument("hermite: negative degree");
    }
    if (m == 0) {
        return 1.0;
    }
    // h_{j+1} = (t h_j - sqrt(j) h_{j-1}) / sqrt(j+1)
    double prev = 1.0;
    double cur = t;
    for (int j = 1; j < m; ++j) {
        const double next = (t * cur - std::sqrt(static_cast<double>(j)) * prev)
                            / std::sqrt(static_cast<double>(j + 1));
        prev = cur;
        cur = next;
    }
    return cur;
}

/// Fills out[m] = h_m(t) for m = 0 .. out.size()-1.
inline void hermite_table(double t, std::span<double> out)
{
    if (out.empty()) {
        return;
    }
    out[0] = 1.0;
    if (out.size() == 1) {
        return;
    }
    out[1] = t;
    for (std::size_t j = 1; j + 1 < out.size(); ++j) {
        const double jd = static_cast<double>(j);
        out[j + 1] = (t * out[j] - std::sqrt(jd) * out[j - 1]) / std::sqrt(jd + 1.0);
    }
}

/// Univariate change-of-basis tables between {h_m} and {t^m}, m <= kDegreeCap.
///
/// Built from the exact integer expansions
///   He_m(t) = sum_k (-1)^k m! / (k! (m-2k)! 2^k) t^{m-2k}
///   t^m     = sum_k        m! / (k! (m-2k)! 2^k) He_{m-2k}(t)
/// and rounded once to extended precision, so that sums with heavy
/// cancellation (high degrees) still land within a few ulps of double.
struct BasisTables {
    static constexpr int kSize = kDegreeCap + 1;

    /// hermite_to_power[m][j]: coefficient of t^j in h_m(t).
    std::array<std::array<long double, kSize>, kSize> hermite_to_power{};
    /// power_to_hermite[m][j]: coefficient of h_j(t) in t^m.
    std::array<std::array<long double, kSize>, kSize> power_to_hermite{};
};

namespace detail {

inline BasisTables make_basis_tables()
{
    constexpr int N = BasisTables::kSize;
    // Unsigned magnitudes m!/(k!(m-2k)!2^k); exact in 64-bit for m <= 16.
    std::array<std::array<std::int64_t, N>, N> magnitude{};
    // Magnitudes come from the integer recurrence on He_m coefficients.
    std::array<std::array<std::int64_t, N>, N> he{};
    he[0][0] = 1;
    if (N > 1) {
        he[1][1] = 1;
    }
    for (int m = 1; m + 1 < N; ++m) {
        for (int j = 0; j < N; ++j) {
            std::int64_t v = -static_cast<std::int64_t>(m) * he[m - 1][j];
            if (j > 0) {
                v += he[m][j - 1];
            }
            he[m + 1][j] = v;
        }
    }
    for (int m = 0; m < N; ++m) {
        for (int j = 0; j < N; ++j) {
            magnitude[m][j] = he[m][j] < 0 ? -he[m][j] : he[m][j];
        }
    }

    std::array<long double, N> sqrt_fact{};
    long double f = 1.0L;
    for (int m = 0; m < N; ++m) {
        if (m > 0) {
            f *= m;
        }
        sqrt_fact[m] = std::sqrt(f);
    }

    BasisTables t;
    for (int m = 0; m < N; ++m) {
        for (int j = 0; j <= m; ++j) {
            t.hermite_to_power[m][j] = static_cast<long double>(he[m][j]) / sqrt_fact[m];
            // t^m has He_j coefficient equal to |coefficient of t^j in He_m|,
            // and He_j = sqrt(j!) h_j.
            t.power_to_hermite[m][j] = static_cast<long double>(magnitude[m][j]) * sqrt_fact[j];
        }
    }
    return t;
}

} // namespace detail

inline const BasisTables &basis_tables()
{
    static const BasisTables tables = detail::make_basis_tables();
    return tables;
}

} // namespace ptfprg
