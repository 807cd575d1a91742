#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ptfprg/gaussian_analysis.hpp"

using namespace ptfprg;

namespace {

Poly x1_power(std::size_t n, int m, Basis b = Basis::standard)
{
    MultiIndex a(n);
    a.set(0, m);
    return Poly::term(a, 1.0, b);
}

std::vector<double> shifted(std::span<const double> x, double a, std::span<const double> y,
                            double b)
{
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = a * x[i] + b * y[i];
    }
    return out;
}

} // namespace

TEST(Restrict, LinearExample)
{
    const Poly p = to_hermite(x1_power(2, 1));
    const double lambda = 0.36;
    const Poly r = gaussian_restrict(p, {lambda, {1.5, -2.0}});
    EXPECT_NEAR(r.coefficient(MultiIndex{0, 0}), std::sqrt(1 - lambda) * 1.5, 1e-14);
    EXPECT_NEAR(r.coefficient(MultiIndex{1, 0}), std::sqrt(lambda), 1e-14);
    EXPECT_EQ(r.size(), 2u);
}

TEST(Restrict, ConstantIsUnchanged)
{
    const Poly c = Poly::constant(3, 2.5);
    const Poly r = gaussian_restrict(c, {0.2, {1.0, 2.0, 3.0}});
    EXPECT_EQ(r.terms(), c.terms());
}

TEST(Restrict, Errors)
{
    const Poly p = to_hermite(x1_power(2, 2));
    EXPECT_THROW(gaussian_restrict(p, {0.0, {0.0, 0.0}}), std::invalid_argument);
    EXPECT_THROW(gaussian_restrict(p, {1.0, {0.0, 0.0}}), std::invalid_argument);
    EXPECT_THROW(gaussian_restrict(p, {0.5, {0.0}}), std::invalid_argument);
    EXPECT_THROW(gaussian_restrict(x1_power(2, 2), {0.5, {0.0, 0.0}}), std::invalid_argument);
}

// The restricted polynomial evaluated at y equals p at sqrt(1-lambda)x + sqrt(lambda)y.
TEST(Restrict, PointwiseIdentity)
{
    CounterRng rng(21, 0);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 1 + rng.below(4);
        const int d = 1 + static_cast<int>(rng.below(5));
        const Poly p = oracle::random_poly(n, d, 8, Basis::hermite, rng);
        const double lambda = 0.05 + 0.9 * rng.uniform();
        const auto x = oracle::random_point(n, rng);
        const Poly r = gaussian_restrict(p, {lambda, x});
        for (int j = 0; j < 20; ++j) {
            const auto y = oracle::random_point(n, rng);
            const auto z = shifted(x, std::sqrt(1 - lambda), y, std::sqrt(lambda));
            const double want = eval(p, z);
            const double scale = std::max(oracle::eval_magnitude(p, z), oracle::eval_magnitude(r, y));
            EXPECT_LE(std::abs(eval(r, y) - want), 1e-9 * scale + 1e-13) << trial;
        }
    }
}

TEST(Phi, MultilinearIsFixedPoint)
{
    const Poly p(3, 3, Basis::hermite,
                 {{MultiIndex{1, 1, 0}, 2.0}, {MultiIndex{1, 1, 1}, -0.5}, {MultiIndex{0, 0, 1}, 1.0}});
    const Poly f = phi(p, 0.3);
    ASSERT_EQ(f.size(), p.size());
    for (const auto &[a, c] : p.terms()) {
        EXPECT_NEAR(f.coefficient(a), c, 1e-13);
    }
    EXPECT_EQ(phi(Poly::constant(2, 4.0), 0.5).terms(), Poly::constant(2, 4.0).terms());
}

TEST(Phi, QuadraticExample)
{
    // x^2 smoothed: (1-lambda) x^2 + lambda, rescaled: x^2 + lambda.
    const Poly f = to_standard(phi(to_hermite(x1_power(1, 2)), 0.25));
    EXPECT_NEAR(f.coefficient(MultiIndex{2}), 1.0, 1e-14);
    EXPECT_NEAR(f.coefficient(MultiIndex{0}), 0.25, 1e-14);
}

// d^alpha phi(x) = E_y d^alpha p(x + sqrt(lambda) y), computed by exact quadrature.
TEST(Phi, DerivativesAreSmoothedDerivatives)
{
    CounterRng rng(22, 0);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 1 + rng.below(3);
        const int d = 1 + static_cast<int>(rng.below(5));
        const Poly p = oracle::random_poly(n, d, 6, Basis::hermite, rng);
        const double lambda = trial % 2 ? 0.01 : 0.4;
        const auto x = oracle::random_point(n, rng);
        const Poly f = phi(p, lambda);
        for (const auto &[alpha, v] : all_partials(f, x)) {
            const Poly dp = derivative(p, alpha);
            const double want = oracle::gaussian_expectation(n, 4, [&](std::span<const double> y) {
                return eval(dp, shifted(x, 1.0, y, std::sqrt(lambda)));
            });
            EXPECT_NEAR(v, want, 1e-9 * std::max(1.0, std::abs(want))) << alpha.to_string();
        }
    }
}

// The local expansion evaluated at y equals d^alpha p(x + sqrt(lambda) y).
TEST(Phi, LocalDerivativeExpansion)
{
    CounterRng rng(23, 0);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 1 + rng.below(4);
        const int d = 1 + static_cast<int>(rng.below(5));
        const Poly p = oracle::random_poly(n, d, 6, Basis::hermite, rng);
        const double lambda = trial % 3 == 0 ? 0.001 : 0.2;
        const auto x = oracle::random_point(n, rng);
        const Poly f = phi(p, lambda);
        MultiIndex alpha(n);
        for (int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(d) + 1)); j > 0; --j) {
            const auto i = static_cast<std::size_t>(rng.below(n));
            alpha.set(i, alpha[i] + 1);
        }
        const Poly e = local_derivative_expansion(f, x, lambda, alpha);
        const Poly dp = derivative(p, alpha);
        for (int j = 0; j < 10; ++j) {
            const auto y = oracle::random_point(n, rng);
            const auto z = shifted(x, 1.0, y, std::sqrt(lambda));
            const double scale = std::max(oracle::eval_magnitude(dp, z), oracle::eval_magnitude(e, y));
            EXPECT_LE(std::abs(eval(e, y) - eval(dp, z)), 1e-9 * scale + 1e-13) << trial;
        }
    }
}

TEST(Hypervariance, Examples)
{
    const double a = 0.3;
    const Poly p(2, 2, Basis::hermite, {{MultiIndex{0, 0}, 1.0}, {MultiIndex{1, 1}, a}});
    const auto h = hypervariance(p, 3.0);
    EXPECT_NEAR(h.hypervariance, 81 * a * a, 1e-12);
    EXPECT_NEAR(h.normalized, 81 * a * a, 1e-12);
    EXPECT_EQ(hypervariance(Poly::constant(2, 3.0), 2.0).hypervariance, 0.0);
    EXPECT_TRUE(std::isinf(hypervariance(to_hermite(x1_power(2, 1)), 1.0).normalized));
    EXPECT_THROW(hypervariance(p, 0.5), std::invalid_argument);
}

TEST(Hypervariance, AtOneIsVariance)
{
    CounterRng rng(24, 0);
    for (int trial = 0; trial < 20; ++trial) {
        const Poly p = oracle::random_poly(3, 4, 7, Basis::hermite, rng);
        const double c0 = p.coefficient(MultiIndex(3));
        const double norm = exact_l2_norm(p);
        EXPECT_NEAR(hypervariance(p, 1.0).hypervariance, norm * norm - c0 * c0, 1e-12 * norm * norm);
    }
}

TEST(SignFixedBound, Examples)
{
    const Poly small(1, 1, Basis::hermite, {{MultiIndex{0}, 1.0}, {MultiIndex{1}, 0.1}});
    const auto b = sign_fixed_probability_bound(small, 4);
    EXPECT_TRUE(b.applies);
    EXPECT_DOUBLE_EQ(b.bound, 1.0 / 16);
    const Poly big(1, 1, Basis::hermite, {{MultiIndex{0}, 1.0}, {MultiIndex{1}, 0.5}});
    EXPECT_FALSE(sign_fixed_probability_bound(big, 4).applies);
    EXPECT_THROW(sign_fixed_probability_bound(small, 3), std::invalid_argument);
}

TEST(DeviationBound, Examples)
{
    const Poly p = to_hermite(x1_power(2, 3));
    const std::vector<double> x{0.7, -1.1};
    EXPECT_EQ(deviation_moment_bound(p, x, 0.01, 3, 4), 0.0);
    EXPECT_LT(deviation_moment_bound(p, x, 1e-9, 0, 4), 1e-6);
    EXPECT_THROW(deviation_moment_bound(p, x, 0.01, 4, 4), std::invalid_argument);
    EXPECT_THROW(deviation_moment_bound(p, x, 0.01, 0, 3), std::invalid_argument);

    // x^2 at x, k = 0: phi = x^2 + lambda, spectrum (x^2 + lambda, 2x, 2).
    const Poly sq = to_hermite(x1_power(1, 2));
    const double lambda = 0.01, xv = 0.5;
    const double base = lambda * 2 * 4;
    const double want = base * (2 * xv) * (2 * xv) + base * base * 4;
    EXPECT_NEAR(deviation_moment_bound(sq, std::vector{xv}, lambda, 0, 4), want, 1e-14);
}

// Left-hand side for x^2, k = 0: D(y) = (2 sqrt(lambda) x y + lambda (y^2 - 1))^2.
TEST(DeviationBound, DominatesMonteCarlo)
{
    const Poly sq = to_hermite(x1_power(1, 2));
    for (double xv : {0.0, 0.5, 2.0}) {
        for (int q : {2, 4}) {
            const double lambda = 0.01;
            const auto est = oracle::mc_mean(1, 200000, 7, [&](std::span<const double> y) {
                const double dv = 2 * std::sqrt(lambda) * xv * y[0] + lambda * (y[0] * y[0] - 1);
                return std::pow(dv * dv, q / 2.0);
            });
            const double lhs = std::pow(est.mean, 2.0 / q);
            EXPECT_LE(lhs, deviation_moment_bound(sq, std::vector{xv}, lambda, 0, q)) << xv << " " << q;
        }
    }
}

TEST(Mollifier, BumpExamples)
{
    EXPECT_EQ(mollifier_bump(-1.0), 0.0);
    EXPECT_EQ(mollifier_bump(0.0), 0.0);
    EXPECT_EQ(mollifier_bump(1.0), 1.0);
    EXPECT_EQ(mollifier_bump(3.0), 1.0);
    EXPECT_NEAR(mollifier_bump(0.5), std::numbers::e * std::exp(-4.0 / 3.0), 1e-15);
    EXPECT_NEAR(mollifier_bump(0.5), 0.71653131057378925, 1e-14);
    double prev = 0.0;
    for (double t = 0.01; t < 1.0; t += 0.01) {
        const double v = mollifier_bump(t);
        EXPECT_GE(v, prev);
        EXPECT_LE(v, 1.0);
        prev = v;
    }
}

TEST(Mollifier, Examples)
{
    EXPECT_EQ(mollifier(Poly::constant(2, 3.0), std::vector{0.1, 0.2}, 0.1), 1.0);
    EXPECT_EQ(mollifier(Poly::constant(2, 0.0), std::vector{0.1, 0.2}, 0.1), 1.0);
    const Poly p = x1_power(1, 1);
    // Far from the zero set: ratio x/(4 eps) large, factor 1.
    EXPECT_EQ(mollifier(p, std::vector{100.0}, 0.1), 1.0);
    // At the zero set the factor vanishes.
    EXPECT_EQ(mollifier(p, std::vector{0.0}, 0.1), 0.0);
    // Scale invariance: g depends only on ratios of gradient norms.
    const Poly cube = x1_power(2, 3);
    const std::vector<double> x{0.9, 0.3};
    EXPECT_NEAR(mollifier(scaled(cube, 7.5), x, 0.3), mollifier(cube, x, 0.3), 1e-15);
    for (double xv = -3.0; xv <= 3.0; xv += 0.25) {
        const double g = mollifier(cube, std::vector{xv, 0.0}, 0.3);
        EXPECT_GE(g, 0.0);
        EXPECT_LE(g, 1.0);
    }
    EXPECT_THROW(mollifier(p, std::vector{1.0}, 0.0), std::invalid_argument);
}

TEST(WellBehaved, Examples)
{
    const Poly cube = x1_power(1, 3);
    // Spectrum at 10: 1000, 300, 60, 6; every ratio is below 1/eps = 2.
    const auto w = is_well_behaved(cube, std::vector{10.0}, 0.5);
    EXPECT_TRUE(w.ok);
    EXPECT_FALSE(w.worst_k.has_value());

    const auto near_zero = is_well_behaved(x1_power(1, 1), std::vector{0.01}, 0.1);
    EXPECT_FALSE(near_zero.ok);
    EXPECT_EQ(near_zero.worst_k, 0);

    // At 0.1 with eps 0.5: (0.001, 0.03, 0.6, 6) violates every k.
    const auto bad = is_well_behaved(cube, std::vector{0.1}, 0.5);
    EXPECT_EQ(bad.worst_k, 2);
    EXPECT_TRUE(is_well_behaved(Poly::constant(1, 0.0), std::vector{0.0}, 0.1).ok);
}

// A well-behaved point has mollifier 1 whenever the ratios clear 4 eps e^{1/2}.
TEST(WellBehaved, MollifierAgreesFarInside)
{
    const Poly cube = x1_power(1, 3);
    for (double xv : {20.0, 50.0}) {
        EXPECT_EQ(mollifier(cube, std::vector{xv}, 0.05), 1.0);
        EXPECT_TRUE(is_well_behaved(cube, std::vector{xv}, 0.05).ok);
    }
}
