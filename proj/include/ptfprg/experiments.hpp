#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ptfprg/derivatives.hpp"
#include "ptfprg/gaussian_analysis.hpp"
#include "ptfprg/moment_sampler.hpp"
#include "ptfprg/parallel.hpp"
#include "ptfprg/poly.hpp"
#include "ptfprg/prg.hpp"
#include "ptfprg/random.hpp"
#include "ptfprg/report.hpp"
#include "ptfprg/stats.hpp"

namespace ptfprg {

/// Seed and worker count shared by every experiment. Results depend only on
/// the seed: trials are cut into fixed-size chunks, each with its own stream.
struct RunOptions {
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    std::uint64_t chunk_size = 4096;
};

/// 1 if v >= 0, else 0.
inline int sign01(double v) noexcept { return v >= 0.0 ? 1 : 0; }

namespace detail {

inline void fill_gaussian(CounterRng &rng, std::span<double> x)
{
    for (double &v : x) {
        v = rng.gaussian();
    }
}

/// Per-chunk sums of a bounded statistic, reduced in chunk order.
struct MomentSums {
    std::vector<double> sum;
    std::vector<double> sumsq;

    explicit MomentSums(std::size_t chunks) : sum(chunks, 0.0), sumsq(chunks, 0.0) {}

    double mean(std::uint64_t n) const { return pairwise_sum(sum) / static_cast<double>(n); }

    /// Unbiased sample variance.
    double variance(std::uint64_t n) const
    {
        if (n < 2) {
            return 0.0;
        }
        const double m = mean(n);
        const double ss = pairwise_sum(sumsq);
        return std::max(0.0, (ss - static_cast<double>(n) * m * m) / static_cast<double>(n - 1));
    }
};

inline void require_trials(std::uint64_t trials, std::uint64_t minimum, const char *what)
{
    if (trials < minimum) {
        throw std::invalid_argument(std::string(what) + " needs at least "
                                    + std::to_string(minimum) + " trials");
    }
}

inline ExperimentReport base_report(const char *name, const Poly &p, std::uint64_t trials,
                                    const RunOptions &opts)
{
    ExperimentReport r;
    r.experiment = name;
    r.n = p.n();
    r.d = p.degree();
    r.trials = trials;
    r.seed = opts.seed;
    return r;
}

/// Largest consecutive ratio ||nabla^k|| / ||nabla^{k-1}||, k = 1..d; 0/0 counts as 0.
inline double max_growth_ratio(const GradientSpectrum &s)
{
    double worst = 0.0;
    for (std::size_t k = 1; k < s.values.size(); ++k) {
        const double num = s.values[k];
        const double den = s.values[k - 1];
        double r = 0.0;
        if (num != 0.0) {
            r = den == 0.0 ? std::numeric_limits<double>::infinity() : num / den;
        }
        worst = std::max(worst, r);
    }
    return worst;
}

} // namespace detail

/// Slow growth of derivative norms at a random point: the (1 - delta)-quantile
/// of max_k ||nabla^k p(x)|| / ||nabla^{k-1} p(x)|| over x ~ N(0,1)^n, and the
/// fraction of points whose max ratio exceeds `threshold`.
inline ExperimentReport exp_slow_growth(const Poly &p, double delta, std::uint64_t trials,
                                        double threshold, const RunOptions &opts)
{
    detail::require_trials(trials, 100, "exp_slow_growth");
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("delta must lie in (0, 1)");
    }
    const DerivativeEvaluator ev(p);
    const std::uint64_t key = derive_seed(opts.seed, tag_of("slow_growth"));
    std::vector<double> ratios(trials);
    const std::size_t chunks = chunk_count(trials, opts.chunk_size);
    for_each_chunk(chunks, opts.jobs, [&](std::size_t c) {
        CounterRng rng(key, c);
        std::vector<double> x(p.n());
        const auto [b, e] = chunk_range(c, trials, opts.chunk_size);
        for (std::uint64_t t = b; t < e; ++t) {
            detail::fill_gaussian(rng, x);
            ratios[t] = detail::max_growth_ratio(ev.spectrum(x));
        }
    });
    const auto exceed = static_cast<std::uint64_t>(
        std::count_if(ratios.begin(), ratios.end(), [&](double r) { return r > threshold; }));
    std::sort(ratios.begin(), ratios.end());
    auto r = detail::base_report("slow_growth", p, trials, opts);
    r.delta = delta;
    r.estimate = quantile_sorted(ratios, 1.0 - delta);
    r.ci_radius = quantile_ci(ratios, 1.0 - delta);
    const double frac = static_cast<double>(exceed) / static_cast<double>(trials);
    r.aux = {{"threshold", threshold},
             {"exceed_fraction", frac},
             {"exceed_ci", frequency_ci(frac, trials)},
             {"median_ratio", quantile_sorted(ratios, 0.5)}};
    return r;
}

/// Restriction fixing: for x ~ N(0,1)^n, how often is the restricted PTF
/// y -> sign(p(sqrt(1-lambda) x + sqrt(lambda) y)) constant with probability
/// more than 1 - eps? Each x gets `inner` Gaussian y.
inline ExperimentReport exp_restriction_fixing(const Poly &p, double lambda, double eps,
                                               std::uint64_t outer, std::uint64_t inner,
                                               const RunOptions &opts)
{
    detail::require_lambda(lambda);
    detail::require_trials(outer, 1, "exp_restriction_fixing");
    detail::require_trials(inner, 1, "exp_restriction_fixing");
    const Poly ph = to_hermite(p);
    const std::uint64_t key = derive_seed(opts.seed, tag_of("restriction_fixing"));
    std::vector<double> max_prob(outer);
    // Each outer trial is already heavy; one stream per outer trial.
    for_each_chunk(static_cast<std::size_t>(outer), opts.jobs, [&](std::size_t t) {
        CounterRng rng(key, t);
        RestrictionParams params{lambda, std::vector<double>(p.n())};
        detail::fill_gaussian(rng, params.x);
        const DerivativeEvaluator q(gaussian_restrict(ph, params), 0);
        std::vector<double> y(p.n());
        std::uint64_t ones = 0;
        for (std::uint64_t i = 0; i < inner; ++i) {
            detail::fill_gaussian(rng, y);
            ones += static_cast<std::uint64_t>(sign01(q.value(y)));
        }
        max_prob[t] = static_cast<double>(std::max(ones, inner - ones))
                      / static_cast<double>(inner);
    });
    const auto fixed = static_cast<std::uint64_t>(std::count_if(
        max_prob.begin(), max_prob.end(), [&](double m) { return m > 1.0 - eps; }));
    auto r = detail::base_report("restriction_fixing", p, outer, opts);
    r.lambda = lambda;
    r.eps = eps;
    r.estimate = static_cast<double>(fixed) / static_cast<double>(outer);
    r.ci_radius = frequency_ci(r.estimate, outer);
    r.aux = {{"inner_trials", static_cast<double>(inner)},
             {"mean_max_prob", pairwise_sum(max_prob) / static_cast<double>(outer)}};
    return r;
}

/// Normalized hypervariance H_R of the restriction at x ~ N(0,1)^n: median
/// (estimate) and 0.9 / 0.99 quantiles.
inline ExperimentReport exp_hypervariance(const Poly &p, double lambda, double R,
                                          std::uint64_t trials, const RunOptions &opts)
{
    detail::require_lambda(lambda);
    detail::require_trials(trials, 1, "exp_hypervariance");
    if (!(R >= 1.0)) {
        throw std::invalid_argument("R must be >= 1");
    }
    const Poly ph = to_hermite(p);
    const std::uint64_t key = derive_seed(opts.seed, tag_of("hypervariance"));
    std::vector<double> h(trials);
    const std::uint64_t chunk = std::max<std::uint64_t>(1, opts.chunk_size / 16);
    for_each_chunk(chunk_count(trials, chunk), opts.jobs, [&](std::size_t c) {
        CounterRng rng(key, c);
        RestrictionParams params{lambda, std::vector<double>(p.n())};
        const auto [b, e] = chunk_range(c, trials, chunk);
        for (std::uint64_t t = b; t < e; ++t) {
            detail::fill_gaussian(rng, params.x);
            h[t] = hypervariance(gaussian_restrict(ph, params), R).normalized;
        }
    });
    std::sort(h.begin(), h.end());
    auto r = detail::base_report("hypervariance", p, trials, opts);
    r.lambda = lambda;
    r.R = R;
    r.estimate = quantile_sorted(h, 0.5);
    r.ci_radius = quantile_ci(h, 0.5);
    r.aux = {{"q90", quantile_sorted(h, 0.9)}, {"q99", quantile_sorted(h, 0.99)}};
    return r;
}

/// Frequency of |p(x)| <= eps ||nabla p(x)|| over x ~ N(0,1)^n.
inline ExperimentReport exp_anticoncentration(const Poly &p, double eps, std::uint64_t trials,
                                              const RunOptions &opts)
{
    if (!(eps > 0.0)) {
        throw std::invalid_argument("eps must be > 0");
    }
    detail::require_trials(trials, 1, "exp_anticoncentration");
    const DerivativeEvaluator ev(p, 1);
    const std::uint64_t key = derive_seed(opts.seed, tag_of("anticoncentration"));
    const std::size_t chunks = chunk_count(trials, opts.chunk_size);
    std::vector<double> hits(chunks, 0.0);
    for_each_chunk(chunks, opts.jobs, [&](std::size_t c) {
        CounterRng rng(key, c);
        std::vector<double> x(p.n());
        const auto [b, e] = chunk_range(c, trials, opts.chunk_size);
        double local = 0.0;
        for (std::uint64_t t = b; t < e; ++t) {
            detail::fill_gaussian(rng, x);
            const auto s = ev.spectrum(x);
            const double grad = s.values.size() > 1 ? s.values[1] : 0.0;
            if (s.values[0] <= eps * grad) {
                local += 1.0;
            }
        }
        hits[c] = local;
    });
    auto r = detail::base_report("anticoncentration", p, trials, opts);
    r.eps = eps;
    r.estimate = pairwise_sum(hits) / static_cast<double>(trials);
    r.ci_radius = frequency_ci(r.estimate, trials);
    return r;
}

/// Two-sided fooling error |E sign(p(Z)) - E sign(p(z))| of the generator
/// against Gaussian Monte Carlo. ci_radius combines both binomial errors.
inline ExperimentReport exp_fooling_error(const Poly &p, const PrgConfig &cfg,
                                          std::uint64_t prg_draws, std::uint64_t mc_draws,
                                          const RunOptions &opts)
{
    detail::require_trials(prg_draws, 10000, "exp_fooling_error (generator side)");
    detail::require_trials(mc_draws, 10000, "exp_fooling_error (Gaussian side)");
    if (cfg.n != p.n()) {
        throw std::invalid_argument("generator dimension does not match the polynomial");
    }
    const Prg prg(cfg);
    const DerivativeEvaluator ev(p, 0);

    const std::size_t prg_chunks = chunk_count(prg_draws, opts.chunk_size);
    std::vector<double> prg_ones(prg_chunks, 0.0);
    for_each_chunk(prg_chunks, opts.jobs, [&](std::size_t c) {
        std::vector<double> z(p.n());
        const auto [b, e] = chunk_range(c, prg_draws, opts.chunk_size);
        double local = 0.0;
        for (std::uint64_t j = b; j < e; ++j) {
            prg.output(j, z);
            local += sign01(ev.value(z));
        }
        prg_ones[c] = local;
    });

    const std::uint64_t key = derive_seed(opts.seed, tag_of("fooling_gaussian"));
    const std::size_t mc_chunks = chunk_count(mc_draws, opts.chunk_size);
    std::vector<double> mc_ones(mc_chunks, 0.0);
    for_each_chunk(mc_chunks, opts.jobs, [&](std::size_t c) {
        CounterRng rng(key, c);
        std::vector<double> z(p.n());
        const auto [b, e] = chunk_range(c, mc_draws, opts.chunk_size);
        double local = 0.0;
        for (std::uint64_t j = b; j < e; ++j) {
            detail::fill_gaussian(rng, z);
            local += sign01(ev.value(z));
        }
        mc_ones[c] = local;
    });

    const double a = pairwise_sum(prg_ones) / static_cast<double>(prg_draws);
    const double g = pairwise_sum(mc_ones) / static_cast<double>(mc_draws);
    const double se_a = frequency_se(a, prg_draws);
    const double se_g = frequency_se(g, mc_draws);
    const double sigma = std::sqrt(se_a * se_a + se_g * se_g);
    const auto seeds = seed_accounting(cfg);

    auto r = detail::base_report("fooling_error", p, prg_draws, opts);
    r.lambda = cfg.lambda();
    r.L = cfg.L;
    r.R = cfg.R;
    r.estimate = std::abs(a - g);
    r.ci_radius = kZ95 * sigma;
    r.aux = {{"prg_mean", a},
             {"gauss_mean", g},
             {"sigma", sigma},
             {"mc_draws", static_cast<double>(mc_draws)},
             {"moment_order", static_cast<double>(cfg.moment_order())},
             {"seed_bits_total", static_cast<double>(seeds.total_bits)},
             {"seed_optimal", seeds.seed_optimal ? 1.0 : 0.0}};
    return r;
}

/// One hybrid step at a fixed x: compares E sign(p) g at x + sqrt(lambda) Y
/// (Y matching d*R moments) with the same at x + sqrt(lambda) y (Gaussian y),
/// where g is the mollifier with parameter eps. Also reports which regime x
/// falls in for phi and the two regime predictions (g = 0 often when x is
/// poorly behaved; sign agrees with sign(phi(x)) when it is well behaved).
inline ExperimentReport exp_hybrid_step(const Poly &p, std::span<const double> x,
                                        double lambda, double eps, int R, std::uint64_t trials,
                                        const RunOptions &opts)
{
    detail::require_lambda(lambda);
    detail::require_dimension(p, x);
    detail::require_trials(trials, 1, "exp_hybrid_step");
    if (!(eps > 0.0) || R < 1) {
        throw std::invalid_argument("exp_hybrid_step needs eps > 0 and R >= 1");
    }
    const Poly ph = to_hermite(p);
    const Poly phi_poly = phi(ph, lambda);
    const auto regime = is_well_behaved(phi_poly, x, eps);
    const double phi_x = eval(phi_poly, x);
    const int phi_sign = sign01(phi_x);
    const int d = std::max(1, p.degree());
    const MomentSampler sampler = MomentSampler::fully_independent(
        p.n(), d * R, derive_seed(opts.seed, tag_of("hybrid_moment")));
    const DerivativeEvaluator ev(ph);
    const double step = std::sqrt(lambda);

    const std::size_t chunks = chunk_count(trials, opts.chunk_size);
    detail::MomentSums prg_sums(chunks), gauss_sums(chunks);
    std::vector<double> g_zero(chunks, 0.0), mismatch(chunks, 0.0);
    const std::uint64_t key = derive_seed(opts.seed, tag_of("hybrid_gaussian"));
    for_each_chunk(chunks, opts.jobs, [&](std::size_t c) {
        CounterRng rng(key, c);
        std::vector<double> y(p.n()), point(p.n());
        std::vector<double> partials(ev.slots().size());
        const auto [b, e] = chunk_range(c, trials, opts.chunk_size);
        auto score = [&](std::span<const double> dir, double &g_out, int &s_out) {
            for (std::size_t i = 0; i < point.size(); ++i) {
                point[i] = x[i] + step * dir[i];
            }
            ev.evaluate(point, partials);
            const auto spec = ev.spectrum_from_partials(partials);
            g_out = mollifier_from_spectrum(spec, eps);
            const auto [b0, e0] = ev.order_range(0);
            s_out = sign01(b0 == e0 ? 0.0 : partials[b0]);
            return s_out * g_out;
        };
        for (std::uint64_t t = b; t < e; ++t) {
            double g = 0.0;
            int s = 0;
            sampler.sample(t, y);
            const double v = score(y, g, s);
            prg_sums.sum[c] += v;
            prg_sums.sumsq[c] += v * v;
            g_zero[c] += g == 0.0 ? 1.0 : 0.0;
            mismatch[c] += s != phi_sign ? 1.0 : 0.0;

            detail::fill_gaussian(rng, y);
            const double w = score(y, g, s);
            gauss_sums.sum[c] += w;
            gauss_sums.sumsq[c] += w * w;
        }
    });
    const double a = prg_sums.mean(trials);
    const double b = gauss_sums.mean(trials);
    const double n = static_cast<double>(trials);
    const double sigma = std::sqrt(prg_sums.variance(trials) / n + gauss_sums.variance(trials) / n);
    const double gz = pairwise_sum(g_zero) / n;
    const double mm = pairwise_sum(mismatch) / n;

    auto r = detail::base_report("hybrid_step", p, trials, opts);
    r.lambda = lambda;
    r.eps = eps;
    r.R = R;
    r.estimate = std::abs(a - b);
    r.ci_radius = kZ95 * sigma;
    r.aux = {{"prg_mean", a},
             {"gauss_mean", b},
             {"well_behaved", regime.ok ? 1.0 : 0.0},
             {"worst_k", regime.worst_k ? static_cast<double>(*regime.worst_k) : -1.0},
             {"phi_at_x", phi_x},
             {"g_zero_freq", gz},
             {"g_zero_ci", frequency_ci(gz, trials)},
             {"sign_mismatch_freq", mm},
             {"sign_mismatch_ci", frequency_ci(mm, trials)}};
    return r;
}

/// Frequency of sign(p(y)) != sign(p^(0)) for Gaussian y (sampler_k == 0) or
/// for y from a fully independent sampler matching sampler_k moments.
/// aux carries whether the hypervariance condition holds and the 2^-q bound.
inline ExperimentReport exp_sign_concentration(const Poly &p, int q, int sampler_k,
                                               std::uint64_t trials, const RunOptions &opts)
{
    detail::require_trials(trials, 1, "exp_sign_concentration");
    const Poly ph = to_hermite(p);
    const auto bound = sign_fixed_probability_bound(ph, q);
    const int ref = sign01(ph.coefficient(MultiIndex(p.n())));
    const DerivativeEvaluator ev(ph, 0);
    const std::uint64_t key = derive_seed(opts.seed, tag_of("concentration"));
    std::optional<MomentSampler> sampler;
    if (sampler_k > 0) {
        sampler = MomentSampler::fully_independent(p.n(), sampler_k,
                                                   derive_seed(opts.seed, tag_of("conc_moment")));
    }
    const std::size_t chunks = chunk_count(trials, opts.chunk_size);
    std::vector<double> flips(chunks, 0.0);
    for_each_chunk(chunks, opts.jobs, [&](std::size_t c) {
        CounterRng rng(key, c);
        std::vector<double> y(p.n());
        const auto [b, e] = chunk_range(c, trials, opts.chunk_size);
        double local = 0.0;
        for (std::uint64_t t = b; t < e; ++t) {
            if (sampler) {
                sampler->sample(t, y);
            } else {
                detail::fill_gaussian(rng, y);
            }
            local += sign01(ev.value(y)) != ref ? 1.0 : 0.0;
        }
        flips[c] = local;
    });
    auto r = detail::base_report("sign_concentration", p, trials, opts);
    r.estimate = pairwise_sum(flips) / static_cast<double>(trials);
    r.ci_radius = frequency_ci(r.estimate, trials);
    r.aux = {{"q", static_cast<double>(q)},
             {"sampler_k", static_cast<double>(sampler_k)},
             {"applies", bound.applies ? 1.0 : 0.0},
             {"bound", bound.bound},
             {"normalized_hypervariance",
              hypervariance(ph, std::sqrt(static_cast<double>(q))).normalized}};
    return r;
}

/// Monte Carlo ||D||_{q/2} with D(y) = ||nabla^k p(x + sqrt(lambda) y) - nabla^k phi(x)||^2,
/// next to the analytic deviation bound (aux "bound"). ci_radius is the
/// delta-method 95% half-width of the estimate.
inline ExperimentReport exp_deviation(const Poly &p, std::span<const double> x, double lambda,
                                      int k, int q, std::uint64_t trials, const RunOptions &opts)
{
    detail::require_trials(trials, 2, "exp_deviation");
    const Poly ph = to_hermite(p);
    const double bound = deviation_moment_bound(ph, x, lambda, k, q);
    const auto phi_partials = all_partials(phi(ph, lambda), x);

    const DerivativeEvaluator ev(to_standard(p), k);
    const auto [kb, ke] = ev.order_range(k);
    // Expected order-k partials aligned with the evaluator's slots, plus the
    // ones only phi has.
    std::vector<double> expected(ke - kb, 0.0);
    double phi_only_sq = 0.0;
    for (const auto &[alpha, v] : phi_partials) {
        if (alpha.total() != k) {
            continue;
        }
        const auto it = std::find(ev.slots().begin() + static_cast<std::ptrdiff_t>(kb),
                                  ev.slots().begin() + static_cast<std::ptrdiff_t>(ke), alpha);
        if (it == ev.slots().begin() + static_cast<std::ptrdiff_t>(ke)) {
            phi_only_sq += v * v;
        } else {
            expected[static_cast<std::size_t>(it - ev.slots().begin()) - kb] = v;
        }
    }

    const double half_q = 0.5 * q;
    const double step = std::sqrt(lambda);
    const std::uint64_t key = derive_seed(opts.seed, tag_of("deviation"));
    const std::size_t chunks = chunk_count(trials, opts.chunk_size);
    detail::MomentSums sums(chunks);
    for_each_chunk(chunks, opts.jobs, [&](std::size_t c) {
        CounterRng rng(key, c);
        std::vector<double> y(p.n()), point(p.n()), partials(ev.slots().size());
        const auto [b, e] = chunk_range(c, trials, opts.chunk_size);
        for (std::uint64_t t = b; t < e; ++t) {
            detail::fill_gaussian(rng, y);
            for (std::size_t i = 0; i < point.size(); ++i) {
                point[i] = x[i] + step * y[i];
            }
            ev.evaluate(point, partials);
            double dsum = phi_only_sq;
            for (std::size_t s = kb; s < ke; ++s) {
                const double diff = partials[s] - expected[s - kb];
                dsum += diff * diff;
            }
            const double v = std::pow(dsum, half_q);
            sums.sum[c] += v;
            sums.sumsq[c] += v * v;
        }
    });
    const double m = sums.mean(trials);
    const double se_m = std::sqrt(sums.variance(trials) / static_cast<double>(trials));
    const double est = std::pow(m, 1.0 / half_q);
    const double se = m > 0.0 ? (1.0 / half_q) * std::pow(m, 1.0 / half_q - 1.0) * se_m : 0.0;

    auto r = detail::base_report("deviation", p, trials, opts);
    r.lambda = lambda;
    r.estimate = est;
    r.ci_radius = kZ95 * se;
    r.aux = {{"k", static_cast<double>(k)},
             {"q", static_cast<double>(q)},
             {"bound", bound},
             {"sigma", se}};
    return r;
}

} // namespace ptfprg
