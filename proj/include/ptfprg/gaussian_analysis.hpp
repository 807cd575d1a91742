#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "ptfprg/derivatives.hpp"
#include "ptfprg/poly.hpp"

namespace ptfprg {

/// Gaussian restriction: lambda is the fraction of variance left free, x the center.
struct RestrictionParams {
    double lambda;
    std::vector<double> x;
};

namespace detail {

inline void require_lambda(double lambda)
{
    if (!(lambda > 0.0 && lambda < 1.0)) {
        throw std::invalid_argument("lambda must lie in (0, 1)");
    }
}

inline void require_even_q(int q)
{
    if (q < 2 || q % 2 != 0) {
        throw std::invalid_argument("q must be an even integer >= 2");
    }
}

} // namespace detail

/// The restricted polynomial y -> p(sqrt(1-lambda) x + sqrt(lambda) y), in the Hermite basis.
///
/// With g = U_{sqrt(1-lambda)} p, the coefficient of h_alpha(y) is
/// d^alpha g(x) / sqrt(alpha!) * (lambda / (1-lambda))^{|alpha|/2}.
inline Poly gaussian_restrict(const Poly &p, const RestrictionParams &params)
{
    detail::require_hermite(p, "gaussian_restrict");
    detail::require_lambda(params.lambda);
    detail::require_dimension(p, params.x);
    const double lambda = params.lambda;
    const Poly g = noise_operator(p, std::sqrt(1.0 - lambda));
    const double r = std::sqrt(lambda / (1.0 - lambda));
    Poly::Terms out;
    for (const auto &[alpha, v] : all_partials(g, params.x)) {
        out.emplace(alpha, v / std::sqrt(alpha.factorial()) * std::pow(r, alpha.total()));
    }
    return Poly(p.n(), p.degree(), Basis::hermite, std::move(out));
}

/// phi(z) = (U_{sqrt(1-lambda)} p)(z / sqrt(1-lambda)).
///
/// The noise operator acts on Hermite coefficients; the coordinate rescaling
/// acts on monomial coefficients (x^beta picks up (1-lambda)^{-|beta|/2}).
/// Multilinear p is a fixed point.
inline Poly phi(const Poly &p, double lambda)
{
    detail::require_hermite(p, "phi");
    detail::require_lambda(lambda);
    const double s = std::sqrt(1.0 - lambda);
    const Poly smoothed = to_standard(noise_operator(p, s));
    Poly::Terms rescaled;
    for (const auto &[beta, c] : smoothed.terms()) {
        rescaled.emplace(beta, c * std::pow(s, -beta.total()));
    }
    return to_hermite(Poly(p.n(), p.degree(), Basis::standard, std::move(rescaled)));
}

/// The polynomial in y equal to d^alpha p(x + sqrt(lambda) y), built from phi.
///
/// Coefficient of h_gamma(y) is d^{alpha+gamma} phi(x) lambda^{|gamma|/2} / sqrt(gamma!).
/// alpha = 0 gives the local expansion of p around x.
inline Poly local_derivative_expansion(const Poly &phi_poly, std::span<const double> x,
                                       double lambda, const MultiIndex &alpha)
{
    detail::require_lambda(lambda);
    detail::require_dimension(phi_poly, x);
    if (alpha.size() != phi_poly.n()) {
        throw std::invalid_argument("local_derivative_expansion: alpha has wrong length");
    }
    Poly::Terms out;
    for (const auto &[beta, v] : all_partials(phi_poly, x)) {
        if (!beta.dominates(alpha)) {
            continue;
        }
        const MultiIndex gamma = beta - alpha;
        out.emplace(gamma,
                    v * std::pow(lambda, 0.5 * gamma.total()) / std::sqrt(gamma.factorial()));
    }
    return Poly(phi_poly.n(), std::max(0, phi_poly.degree() - alpha.total()), Basis::hermite,
                std::move(out));
}

struct HypervarianceReport {
    double hypervariance;
    /// hypervariance / p^(0)^2; +infinity when p^(0) == 0.
    double normalized;
    double R;
};

/// HyperVar_R(p) = sum_{alpha != 0} p^(alpha)^2 R^{2|alpha|}, and its normalized form.
inline HypervarianceReport hypervariance(const Poly &p, double R)
{
    detail::require_hermite(p, "hypervariance");
    if (!(R >= 1.0)) {
        throw std::invalid_argument("hypervariance: R must be >= 1");
    }
    double hv = 0.0;
    double c0 = 0.0;
    for (const auto &[alpha, c] : p.terms()) {
        const int k = alpha.total();
        if (k == 0) {
            c0 = c;
        } else {
            hv += c * c * std::pow(R, 2 * k);
        }
    }
    const double normalized = c0 == 0.0 ? std::numeric_limits<double>::infinity() : hv / (c0 * c0);
    return {hv, normalized, R};
}

struct SignFixedBound {
    bool applies;
    double bound;
};

/// When H_{sqrt(q)}(p) <= 1/4, sign(p(y)) disagrees with sign(p^(0)) with
/// probability at most 2^-q (for Gaussian y, or any dq-moment-matching y).
inline SignFixedBound sign_fixed_probability_bound(const Poly &p, int q)
{
    detail::require_even_q(q);
    const auto h = hypervariance(p, std::sqrt(static_cast<double>(q)));
    if (h.normalized <= 0.25) {
        return {true, std::ldexp(1.0, -q)};
    }
    return {false, 1.0};
}

/// Upper bound on || ||nabla^k p(x + sqrt(lambda) y) - nabla^k phi(x)||^2 ||_{q/2}:
///   sum_{t=k+1}^{d} (lambda d q)^{t-k} ||nabla^t phi(x)||^2
/// with d the declared degree of p.
inline double deviation_moment_bound(const Poly &p, std::span<const double> x, double lambda,
                                     int k, int q)
{
    detail::require_lambda(lambda);
    detail::require_even_q(q);
    detail::require_dimension(p, x);
    const int d = p.degree();
    if (k < 0 || k > d) {
        throw std::invalid_argument("deviation_moment_bound: k must lie in [0, d]");
    }
    const auto spec = gradient_spectrum(phi(p, lambda), x);
    const double base = lambda * d * q;
    double sum = 0.0;
    for (int t = k + 1; t <= d; ++t) {
        const double g = spec.values[static_cast<std::size_t>(t)];
        sum += std::pow(base, t - k) * g * g;
    }
    return sum;
}

/// Standard bump: 0 for t <= 0, 1 for t >= 1, e * exp(1 / ((t-1)^2 - 1)) between.
inline double mollifier_bump(double t) noexcept
{
    if (t <= 0.0) {
        return 0.0;
    }
    if (t >= 1.0) {
        return 1.0;
    }
    const double u = t - 1.0;
    return std::numbers::e * std::exp(1.0 / (u * u - 1.0));
}

/// g = prod_{k<d} rho(log(||nabla^k||^2 / (16 eps^2 ||nabla^{k+1}||^2))).
/// A vanishing ||nabla^{k+1}|| contributes a factor of 1.
inline double mollifier_from_spectrum(const GradientSpectrum &s, double eps)
{
    if (!(eps > 0.0)) {
        throw std::invalid_argument("mollifier: eps must be > 0");
    }
    double g = 1.0;
    for (std::size_t k = 0; k + 1 < s.values.size(); ++k) {
        const double lo = s.values[k];
        const double hi = s.values[k + 1];
        if (hi == 0.0) {
            continue;
        }
        if (lo == 0.0) {
            return 0.0;
        }
        const double ratio = lo / (4.0 * eps * hi);
        g *= mollifier_bump(2.0 * std::log(ratio));
        if (g == 0.0) {
            return 0.0;
        }
    }
    return g;
}

inline double mollifier(const Poly &p, std::span<const double> x, double eps)
{
    return mollifier_from_spectrum(gradient_spectrum(p, x), eps);
}

struct WellBehavedness {
    bool ok;
    /// Largest k with ||nabla^{k+1}|| > ||nabla^k|| / eps.
    std::optional<int> worst_k;
};

inline WellBehavedness well_behaved_from_spectrum(const GradientSpectrum &s, double eps)
{
    if (!(eps > 0.0)) {
        throw std::invalid_argument("is_well_behaved: eps must be > 0");
    }
    std::optional<int> worst;
    for (std::size_t k = 0; k + 1 < s.values.size(); ++k) {
        if (eps * s.values[k + 1] > s.values[k]) {
            worst = static_cast<int>(k);
        }
    }
    return {!worst.has_value(), worst};
}

inline WellBehavedness is_well_behaved(const Poly &p, std::span<const double> x, double eps)
{
    return well_behaved_from_spectrum(gradient_spectrum(p, x), eps);
}

} // namespace ptfprg
