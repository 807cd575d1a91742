#include <cmath>
#include <sstream>
#include <vector>

#include <boost/math/distributions/normal.hpp>
#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ptfprg/corpus.hpp"
#include "ptfprg/experiments.hpp"

using namespace ptfprg;

namespace {

double z_quantile(double p)
{
    return boost::math::quantile(boost::math::normal(), p);
}

double phi_cdf(double z)
{
    return boost::math::cdf(boost::math::normal(), z);
}

Poly x1_power(std::size_t n, int m)
{
    MultiIndex a(n);
    a.set(0, m);
    return Poly::term(a, 1.0, Basis::standard);
}

double aux(const ExperimentReport &r, const char *name)
{
    const auto v = r.aux_value(name);
    EXPECT_TRUE(v.has_value()) << name;
    return v.value_or(std::nan(""));
}

} // namespace

// For p = x, the only ratio is 1/|x|; its median is 1/median|x| = 1/z_{3/4}.
TEST(SlowGrowth, Linear)
{
    const auto r = exp_slow_growth(x1_power(1, 1), 0.5, 20000, 2.0, {.seed = 1});
    const double want = 1.0 / z_quantile(0.75);
    EXPECT_NEAR(r.estimate, want, 2 * r.ci_radius + 1e-3);
    // Pr[1/|x| > 2] = Pr[|x| < 1/2].
    EXPECT_NEAR(aux(r, "exceed_fraction"), 2 * phi_cdf(0.5) - 1, 2 * aux(r, "exceed_ci"));
}

// For x^3 the ratios are 3/|x|, 2/|x|, 1/|x|; the 0.9 quantile is 3 / q_{0.1}(|x|).
TEST(SlowGrowth, Cubic)
{
    const auto r = exp_slow_growth(x1_power(2, 3), 0.1, 20000, 10.0, {.seed = 2});
    const double want = 3.0 / z_quantile(0.55);
    EXPECT_NEAR(r.estimate, want, 2 * r.ci_radius + 1e-3 * want);
    EXPECT_EQ(r.d, 3);
    EXPECT_EQ(r.delta, 0.1);
}

TEST(SlowGrowth, ConstantAndErrors)
{
    EXPECT_EQ(exp_slow_growth(Poly::constant(2, 1.5), 0.1, 500, 1.0, {}).estimate, 0.0);
    EXPECT_THROW(exp_slow_growth(x1_power(1, 1), 0.1, 10, 1.0, {}), std::invalid_argument);
    EXPECT_THROW(exp_slow_growth(x1_power(1, 1), 1.0, 500, 1.0, {}), std::invalid_argument);
}

// p = x: fixed iff |x| sqrt((1-lambda)/lambda) > z_{1-eps}.
TEST(RestrictionFixing, LinearAnalytic)
{
    const double lambda = 0.05, eps = 0.05;
    const auto r = exp_restriction_fixing(x1_power(1, 1), lambda, eps, 3000, 2000, {.seed = 3});
    const double cut = z_quantile(1 - eps) * std::sqrt(lambda / (1 - lambda));
    const double want = 2 * (1 - phi_cdf(cut));
    // Finite inner sampling blurs the boundary slightly.
    EXPECT_NEAR(r.estimate, want, 1.5 * r.ci_radius + 0.01);
    EXPECT_EQ(aux(r, "inner_trials"), 2000.0);
}

TEST(RestrictionFixing, ConstantAlwaysFixed)
{
    const auto r = exp_restriction_fixing(Poly::constant(3, -1.0), 0.3, 0.05, 50, 100, {});
    EXPECT_EQ(r.estimate, 1.0);
    EXPECT_EQ(aux(r, "mean_max_prob"), 1.0);
}

// Near lambda = 1 the restriction is almost the whole PTF, which is balanced for x^3.
TEST(RestrictionFixing, WeakRestrictionRarelyFixes)
{
    const auto r = exp_restriction_fixing(x1_power(2, 3), 0.99, 0.05, 300, 2000, {.seed = 4});
    EXPECT_LT(r.estimate, 0.02);
    EXPECT_NEAR(aux(r, "mean_max_prob"), 0.5, 0.1);
}

// p = x: H_R = lambda R^2 / ((1 - lambda) x^2), median over x uses median(x^2) = z_{3/4}^2.
TEST(Hypervariance, LinearMedian)
{
    const double lambda = 0.02, R = 3.0;
    const auto r = exp_hypervariance(x1_power(1, 1), lambda, R, 4001, {.seed = 5});
    const double z = z_quantile(0.75);
    const double want = lambda * R * R / ((1 - lambda) * z * z);
    EXPECT_NEAR(r.estimate, want, 2 * r.ci_radius);
    EXPECT_LE(r.estimate, aux(r, "q90"));
    EXPECT_LE(aux(r, "q90"), aux(r, "q99"));
}

TEST(Hypervariance, ConstantAndScaleInvariance)
{
    EXPECT_EQ(exp_hypervariance(Poly::constant(2, 2.0), 0.1, 2.0, 50, {}).estimate, 0.0);
    const Poly p = x1_power(2, 2);
    const auto a = exp_hypervariance(p, 0.1, 2.0, 200, {.seed = 6});
    const auto b = exp_hypervariance(scaled(p, -3.0), 0.1, 2.0, 200, {.seed = 6});
    EXPECT_NEAR(a.estimate, b.estimate, 1e-12 * a.estimate);
}

TEST(Anticoncentration, LinearAnalytic)
{
    for (double eps : {0.05, 0.2}) {
        const auto r = exp_anticoncentration(x1_power(2, 1), eps, 200000, {.seed = 7});
        const double want = 2 * phi_cdf(eps) - 1;
        EXPECT_NEAR(r.estimate, want, 3 * frequency_se(want, 200000)) << eps;
    }
    EXPECT_EQ(exp_anticoncentration(Poly::constant(1, 1.0), 0.1, 1000, {}).estimate, 0.0);
}

// Symmetric nodes cancel exactly with positive probability, so Z_1 = 0 is an
// atom and sign(x_1) sees Pr[Z_1 >= 0] = 1/2 + atom/2.
TEST(FoolingError, LinearSeesTheAtomAtZero)
{
    PrgConfig cfg;
    cfg.n = 2;
    cfg.d = 1;
    cfg.L = 16;
    cfg.R = 6;
    cfg.master_seed = 8;
    const auto r = exp_fooling_error(x1_power(2, 1), cfg, 50000, 50000, {.seed = 8});
    const double atom = oracle::symmetric_sum_atom(gauss_hermite_nodes(4), 16);
    EXPECT_NEAR(atom, 0.0731919193640354, 1e-12);
    EXPECT_NEAR(aux(r, "prg_mean"), 0.5 + atom / 2, 4 * std::sqrt(0.25 / 50000));
    EXPECT_EQ(aux(r, "moment_order"), 6.0);
    EXPECT_EQ(r.L, 16);
}

// With an odd node count one node sits at 0. For L = 2 and three nodes,
// Pr[Z = 0] = (2/3)^2 + 2 (1/6)^2 = 1/2, so Pr[Z >= 0] = 3/4.
TEST(FoolingError, OddNodeCountPutsAnAtomAtZero)
{
    PrgConfig cfg;
    cfg.n = 1;
    cfg.d = 1;
    cfg.L = 2;
    cfg.R = 4;
    const auto r = exp_fooling_error(x1_power(1, 1), cfg, 40000, 40000, {.seed = 9});
    EXPECT_NEAR(aux(r, "prg_mean"), 0.75, 4 * std::sqrt(0.1875 / 40000));
    EXPECT_NEAR(r.estimate, 0.25, 0.02);
}

TEST(FoolingError, ConstantAndCubic)
{
    PrgConfig cfg;
    cfg.n = 4;
    cfg.d = 3;
    cfg.L = 64;
    cfg.R = 6;
    const auto c = exp_fooling_error(Poly::constant(4, 1.0), cfg, 10000, 10000, {});
    EXPECT_EQ(c.estimate, 0.0);
    const auto r = exp_fooling_error(x1_power(4, 3), cfg, 20000, 50000, {.seed = 10});
    EXPECT_LE(r.estimate, std::max(0.02, 1.5 * r.ci_radius));
    EXPECT_THROW(exp_fooling_error(x1_power(3, 3), cfg, 20000, 20000, {}), std::invalid_argument);
    EXPECT_THROW(exp_fooling_error(x1_power(4, 3), cfg, 100, 20000, {}), std::invalid_argument);
}

TEST(HybridStep, ConstantIsTrivial)
{
    const auto r = exp_hybrid_step(Poly::constant(2, 1.0), std::vector{0.3, 0.1}, 0.05, 0.1, 4,
                                   5000, {});
    EXPECT_EQ(r.estimate, 0.0);
    EXPECT_EQ(aux(r, "well_behaved"), 1.0);
    EXPECT_EQ(aux(r, "g_zero_freq"), 0.0);
}

// At x = 0, p = x is poorly behaved and the mollifier vanishes near x.
TEST(HybridStep, PoorlyBehavedPointZeroesMollifier)
{
    const int R = 4;
    const auto r = exp_hybrid_step(x1_power(2, 1), std::vector{0.0, 0.0}, 0.01, 0.5, R, 20000,
                                   {.seed = 11});
    EXPECT_EQ(aux(r, "well_behaved"), 0.0);
    EXPECT_EQ(aux(r, "worst_k"), 0.0);
    EXPECT_GE(aux(r, "g_zero_freq"), 1 - std::ldexp(1.0, -R) - 1.5 * aux(r, "g_zero_ci"));
}

TEST(HybridStep, WellBehavedPointKeepsSign)
{
    const int R = 4;
    const auto r = exp_hybrid_step(x1_power(2, 1), std::vector{3.0, 0.0}, 0.01, 0.1, R, 20000,
                                   {.seed = 12});
    EXPECT_EQ(aux(r, "well_behaved"), 1.0);
    EXPECT_LE(aux(r, "sign_mismatch_freq"),
              std::ldexp(1.0, -R) + 1.5 * aux(r, "sign_mismatch_ci"));
    EXPECT_LE(r.estimate, std::max(1e-3, 1.5 * r.ci_radius));
}

TEST(SignConcentration, SmallHypervarianceRarelyFlips)
{
    const Poly p(2, 2, Basis::hermite,
                 {{MultiIndex{0, 0}, 1.0}, {MultiIndex{1, 0}, 0.05}, {MultiIndex{1, 1}, 0.02}});
    for (int k : {0, 16}) {
        const auto r = exp_sign_concentration(p, 8, k, 50000, {.seed = 13});
        EXPECT_EQ(aux(r, "applies"), 1.0);
        EXPECT_LE(r.estimate, aux(r, "bound") + 1.5 * r.ci_radius) << k;
    }
}

TEST(Deviation, WithinBound)
{
    const Poly p = x1_power(2, 2);
    const std::vector<double> x{0.5, -1.0};
    for (int q : {2, 4}) {
        const auto r = exp_deviation(p, x, 0.01, 0, q, 100000, {.seed = 14});
        EXPECT_LE(r.estimate, aux(r, "bound") + 3 * aux(r, "sigma")) << q;
        EXPECT_GT(r.estimate, 0.0);
    }
    // k = d: the top derivative is constant, so D vanishes.
    EXPECT_NEAR(exp_deviation(p, x, 0.01, 2, 4, 1000, {}).estimate, 0.0, 1e-20);
}

TEST(Corpus, MonomialPowersAndShapes)
{
    CorpusSpec spec;
    spec.n = 4;
    spec.d = 3;
    spec.kinds = {PtfLabel::monomial_power};
    spec.centered_variants = false;
    const auto c = corpus_generate(spec, 3, 0);
    ASSERT_EQ(c.size(), 3u);
    EXPECT_EQ(c[0].p.terms(), x1_power(4, 3).terms());
    EXPECT_EQ(c[1].p.degree(), 2);
    EXPECT_EQ(c[2].p.degree(), 1);
    EXPECT_EQ(c[0].label, PtfLabel::monomial_power);
    EXPECT_TRUE(corpus_generate(spec, 0, 0).empty());
}

TEST(Corpus, DeterministicUnitNormAndCentered)
{
    CorpusSpec spec;
    const auto a = corpus_generate(spec, 8, 21);
    const auto b = corpus_generate(spec, 8, 21);
    ASSERT_EQ(a.size(), 8u);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].p, b[i].p);
        EXPECT_EQ(a[i].name, b[i].name);
        EXPECT_LE(a[i].p.n(), 4u);
        EXPECT_LE(a[i].p.degree(), 3);
        if (a[i].label != PtfLabel::monomial_power) {
            const Poly h = to_hermite(add_constant(a[i].p, a[i].shift));
            EXPECT_NEAR(exact_l2_norm(h), 1.0, 1e-12) << a[i].name;
        }
    }
    // Centered instances sit near probability 1/2.
    const auto r = exp_fooling_error(a[0].p, PrgConfig{}, 10000, 100000, {.seed = 2});
    EXPECT_NEAR(aux(r, "gauss_mean"), 0.5, 0.01);
    EXPECT_NE(corpus_generate(spec, 1, 22)[0].p, a[0].p);
}

// Low degree leaves fewer distinct monomials than the usual sparse term count.
TEST(Corpus, SparseFitsSmallMonomialSpaces)
{
    CorpusSpec spec;
    spec.kinds = {PtfLabel::sparse};
    spec.centered_variants = false;
    for (std::size_t n : {1u, 2u, 4u, 6u}) {
        spec.n = n;
        spec.d = 3;
        for (const auto &inst : corpus_generate(spec, 3, 5)) {
            const int d = inst.p.degree();
            std::size_t available = 0;
            for (int k = 1; k <= d; ++k) {
                for_each_index_of_total(n, k, [&](const MultiIndex &) { ++available; });
            }
            EXPECT_EQ(inst.p.terms().size(), std::min<std::size_t>({n + 1, 5, available}))
                << inst.name;
        }
    }
}

TEST(Report, CsvLayout)
{
    ExperimentReport a;
    a.experiment = "x";
    a.n = 2;
    a.d = 3;
    a.lambda = 0.1;
    a.trials = 10;
    a.seed = 7;
    a.estimate = 1.0 / 3;
    a.ci_radius = 0.0;
    a.aux = {{"k", 1.0}};
    ExperimentReport b = a;
    b.lambda.reset();
    b.L = 64;
    b.aux = {{"k", 2.0}, {"q", 4.0}};
    const std::string csv = to_csv({a, b});
    std::istringstream in(csv);
    std::string header, row1, row2;
    std::getline(in, header);
    std::getline(in, row1);
    std::getline(in, row2);
    EXPECT_EQ(header, "experiment,n,d,lambda,eps,delta,L,R,trials,seed,estimate,ci_radius,"
                      "aux1_name,aux1_value,aux2_name,aux2_value");
    EXPECT_EQ(row1, "x,2,3,0.10000000000000001,,,,,10,7,0.33333333333333331,0,k,1,,");
    EXPECT_EQ(row2, "x,2,3,,,,64,,10,7,0.33333333333333331,0,k,2,q,4");
    EXPECT_EQ(std::stod(format_double(1.0 / 3)), 1.0 / 3);
}

TEST(Determinism, JobCountDoesNotChangeResults)
{
    const Poly p = x1_power(3, 3);
    std::vector<ExperimentReport> one, many;
    for (unsigned jobs : {1u, 3u}) {
        auto &out = jobs == 1 ? one : many;
        const RunOptions opts{.seed = 99, .jobs = jobs, .chunk_size = 1000};
        out.push_back(exp_anticoncentration(p, 0.1, 12345, opts));
        out.push_back(exp_slow_growth(p, 0.1, 5000, 3.0, opts));
        out.push_back(exp_restriction_fixing(p, 0.1, 0.05, 20, 200, opts));
        out.push_back(exp_hypervariance(p, 0.1, 2.0, 300, opts));
        out.push_back(exp_deviation(p, std::vector{0.1, 0.2, 0.3}, 0.01, 1, 4, 5000, opts));
        out.push_back(exp_hybrid_step(p, std::vector{1.0, 0.2, 0.3}, 0.05, 0.1, 3, 3000, opts));
        PrgConfig cfg;
        cfg.n = 3;
        out.push_back(exp_fooling_error(p, cfg, 10000, 10000, opts));
    }
    EXPECT_EQ(to_csv(one), to_csv(many));
    const auto again = exp_anticoncentration(p, 0.1, 12345, {.seed = 99});
    EXPECT_NE(to_csv({again}), to_csv({exp_anticoncentration(p, 0.1, 12345, {.seed = 100})}));
}
