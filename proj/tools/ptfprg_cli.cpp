// ptfprg: command-line front end for the PTF generator experiments.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ptfprg/ptfprg.hpp"

using namespace ptfprg;

namespace {

constexpr int kUsageError = 1;
constexpr int kRuntimeError = 2;

/// Options shared by the experiment subcommands.
struct Common {
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    std::string out;
    std::string poly;
    std::size_t n = 4;
    int d = 3;
    std::size_t count = 20;
    std::uint64_t trials = 100000;
};

void add_seed_jobs_out(CLI::App *cmd, Common &c)
{
    cmd->add_option("--seed", c.seed, "Master seed; every output is a function of it")
        ->capture_default_str();
    cmd->add_option("--jobs", c.jobs,
                    "Worker threads (default: $PTFPRG_JOBS or the core count); results do not "
                    "depend on it")
        ->capture_default_str();
    cmd->add_option("--out", c.out, "Output file (default: standard output)");
}

void add_instances(CLI::App *cmd, Common &c)
{
    cmd->add_option("--poly", c.poly,
                    "Polynomial JSON file; without it a deterministic corpus is generated");
    cmd->add_option("--n", c.n, "Corpus dimension")->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--d", c.d, "Corpus maximum degree (and generator degree for fool)")
        ->capture_default_str()
        ->check(CLI::Range(1, kDegreeCap));
    cmd->add_option("--count", c.count, "Corpus size")->capture_default_str();
}

void add_trials(CLI::App *cmd, Common &c, const std::string &what)
{
    cmd->add_option("--trials", c.trials, what)->capture_default_str()->check(CLI::PositiveNumber);
}

std::vector<PtfInstance> instances(const Common &c)
{
    if (!c.poly.empty()) {
        return {{load_poly(c.poly), PtfLabel::custom, "custom", 0.0}};
    }
    CorpusSpec spec;
    spec.n = c.n;
    spec.d = c.d;
    return corpus_generate(spec, c.count, c.seed);
}

RunOptions run_options(const Common &c)
{
    RunOptions o;
    o.seed = c.seed;
    o.jobs = c.jobs;
    return o;
}

/// Prefixes the instance index to a row's auxiliary values.
ExperimentReport tagged(ExperimentReport r, std::size_t instance)
{
    r.aux.insert(r.aux.begin(), {"instance", static_cast<double>(instance)});
    return r;
}

void write_text(const std::string &path, const std::string &text)
{
    if (path.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    f << text;
    if (!f.flush()) {
        throw std::runtime_error("write to '" + path + "' failed");
    }
}

void write_rows(const Common &c, const std::vector<ExperimentReport> &rows)
{
    write_text(c.out, to_csv(rows));
}

/// Explicit --x, or a Gaussian point drawn from --x-seed.
std::vector<double> center_point(const std::vector<double> &x, std::uint64_t x_seed, std::size_t n)
{
    if (!x.empty()) {
        if (x.size() != n) {
            throw std::invalid_argument("--x has " + std::to_string(x.size())
                                        + " coordinates, polynomial has " + std::to_string(n));
        }
        return x;
    }
    CounterRng rng(derive_seed(x_seed, tag_of("center")), 0);
    std::vector<double> out(n);
    for (double &v : out) {
        v = rng.gaussian();
    }
    return out;
}

std::string join(const std::vector<double> &v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        s += (i ? "," : "") + format_double(v[i]);
    }
    return s;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Experiments on a moment-matching pseudorandom generator for Gaussian "
                 "polynomial threshold functions sign(p(x))."};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Help for every subcommand");

    Common c;
    c.jobs = default_jobs();

    // fool
    auto *fool = app.add_subcommand(
        "fool", "Fooling error of Z = (1/sqrt(L)) sum_i Y_i, with each Y_i matching d*R Gaussian "
                "moments, against Gaussian Monte Carlo, per PTF. Tests the claim that this sum "
                "fools degree-d PTFs once L and R are large enough.");
    std::vector<int> fool_L{16}, fool_R{4};
    std::uint64_t mc_trials = 0;
    std::optional<std::uint64_t> prime;
    add_instances(fool, c);
    add_trials(fool, c, "Generator draws per row");
    fool->add_option("--mc-trials", mc_trials, "Gaussian draws per row (default: --trials)");
    fool->add_option("--L", fool_L, "Number of summands (comma list sweeps)")->delimiter(',')->capture_default_str();
    fool->add_option("--R", fool_R, "Moment multiplier: each Y_i matches d*R moments (comma list)")
        ->delimiter(',')
        ->capture_default_str();
    fool->add_option("--kwise-prime", prime,
                     "Use the k-wise independent sampler over GF(prime) instead of independent "
                     "coordinates");
    add_seed_jobs_out(fool, c);

    // moments
    auto *moments = app.add_subcommand(
        "moments", "Gauss-Hermite node law used by the sampler: checks that it reproduces the "
                   "Gaussian moments through order k, the property the generator relies on.");
    int mk = 6;
    bool audit = false;
    std::optional<std::uint64_t> moments_prime;
    moments->add_option("--k", mk, "Moment order to match")->capture_default_str()->check(CLI::NonNegativeNumber);
    moments->add_flag("--audit", audit, "Fail (exit 2) if any residual through order k exceeds 1e-9");
    moments->add_option("--kwise-prime", moments_prime,
                        "Audit the rounded law of the k-wise sampler over GF(prime)");
    moments->add_option("--n", c.n, "Dimension for the k-wise sampler")->capture_default_str();

    // restrict
    auto *restrict_cmd = app.add_subcommand(
        "restrict", "Gaussian restriction y -> p(sqrt(1-lambda) x + sqrt(lambda) y) in the Hermite "
                    "basis, spot-checked against direct evaluation.");
    double r_lambda = 0.01;
    std::vector<double> r_x;
    std::uint64_t x_seed = 0;
    restrict_cmd->add_option("--poly", c.poly, "Polynomial JSON file")->required();
    restrict_cmd->add_option("--lambda", r_lambda, "Variance left free, in (0, 1)")->capture_default_str();
    restrict_cmd->add_option("--x", r_x, "Center point (comma list)")->delimiter(',');
    restrict_cmd->add_option("--x-seed", x_seed, "Draw the center from N(0,1)^n with this seed")
        ->capture_default_str();
    restrict_cmd->add_option("--out", c.out, "Output JSON file (default: standard output)");

    // convert
    auto *convert = app.add_subcommand("convert", "Rewrite a polynomial in the Hermite or standard basis.");
    std::string to_basis_name = "hermite";
    convert->add_option("--poly", c.poly, "Polynomial JSON file")->required();
    convert->add_option("--to", to_basis_name, "Target basis")
        ->capture_default_str()
        ->check(CLI::IsMember({"hermite", "standard"}));
    convert->add_option("--out", c.out, "Output JSON file (default: standard output)");

    // slow-growth
    auto *slow = app.add_subcommand(
        "slow-growth", "Quantiles of max_k ||grad^k p(x)|| / ||grad^(k-1) p(x)|| at Gaussian x. "
                       "Tests that derivative norms grow slowly with high probability.");
    std::vector<double> deltas{0.1};
    double threshold = 10.0;
    add_instances(slow, c);
    add_trials(slow, c, "Gaussian points per row");
    slow->add_option("--delta", deltas, "Failure probability; reports the (1-delta)-quantile (comma list)")
        ->delimiter(',')
        ->capture_default_str();
    slow->add_option("--threshold", threshold, "Also report Pr[max ratio > threshold]")->capture_default_str();
    add_seed_jobs_out(slow, c);

    // fixing
    auto *fixing = app.add_subcommand(
        "fixing", "Fraction of centers x whose restricted PTF is constant with probability > 1-eps. "
                  "Tests that a random restriction with small lambda nearly fixes the PTF.");
    std::vector<double> f_lambda{0.1, 0.01, 0.001}, f_eps{0.05};
    std::uint64_t outer = 1000, inner = 10000;
    add_instances(fixing, c);
    fixing->add_option("--lambda", f_lambda, "Restriction variance (comma list)")->delimiter(',')->capture_default_str();
    fixing->add_option("--eps", f_eps, "Bias threshold (comma list)")->delimiter(',')->capture_default_str();
    fixing->add_option("--outer", outer, "Centers per row")->capture_default_str();
    fixing->add_option("--inner", inner, "Restricted samples per center")->capture_default_str();
    add_seed_jobs_out(fixing, c);

    // hypervar
    auto *hyper = app.add_subcommand(
        "hypervar", "Normalized hypervariance H_R of the restriction at Gaussian centers. Tests "
                    "that restrictions typically have small hypervariance.");
    std::vector<double> h_lambda{0.01}, h_R{2.0};
    add_instances(hyper, c);
    add_trials(hyper, c, "Centers per row");
    hyper->add_option("--lambda", h_lambda, "Restriction variance (comma list)")->delimiter(',')->capture_default_str();
    hyper->add_option("--R", h_R, "Hypervariance radius R >= 1 (comma list)")->delimiter(',')->capture_default_str();
    add_seed_jobs_out(hyper, c);

    // anticonc
    auto *anti = app.add_subcommand(
        "anticonc", "Frequency of |p(x)| <= eps ||grad p(x)|| at Gaussian x. Tests the "
                    "anticoncentration of a polynomial relative to its gradient.");
    std::vector<double> a_eps{0.01, 0.05, 0.1};
    add_instances(anti, c);
    add_trials(anti, c, "Gaussian points per row");
    anti->add_option("--eps", a_eps, "Scale (comma list)")->delimiter(',')->capture_default_str();
    add_seed_jobs_out(anti, c);

    // hybrid
    auto *hybrid = app.add_subcommand(
        "hybrid", "One replacement step at a fixed x: E[sign(p) g] at x + sqrt(lambda) Y for "
                  "moment-matching Y versus Gaussian y, with g the well-behavedness mollifier. "
                  "Tests that one summand can be swapped at small cost.");
    std::vector<double> hy_lambda{1.0 / 16}, hy_eps{0.1};
    std::vector<int> hy_R{4};
    std::vector<double> hy_x;
    add_instances(hybrid, c);
    add_trials(hybrid, c, "Draws per side per row");
    hybrid->add_option("--lambda", hy_lambda, "Step variance (comma list)")->delimiter(',')->capture_default_str();
    hybrid->add_option("--eps", hy_eps, "Mollifier scale (comma list)")->delimiter(',')->capture_default_str();
    hybrid->add_option("--R", hy_R, "Moment multiplier (comma list)")->delimiter(',')->capture_default_str();
    hybrid->add_option("--x", hy_x, "Center point (comma list)")->delimiter(',');
    hybrid->add_option("--x-seed", x_seed, "Draw the center from N(0,1)^n with this seed")->capture_default_str();
    add_seed_jobs_out(hybrid, c);

    // concentration
    auto *conc = app.add_subcommand(
        "concentration", "Frequency of sign(p(y)) != sign of the constant coefficient. Tests that "
                         "normalized hypervariance at most 1/4 at R = sqrt(q) caps it at 2^-q, for "
                         "Gaussian y and for moment-matching y.");
    std::vector<int> c_q{8}, c_k{0};
    add_instances(conc, c);
    add_trials(conc, c, "Draws per row");
    conc->add_option("--q", c_q, "Even moment order (comma list)")->delimiter(',')->capture_default_str();
    conc->add_option("--sampler-k", c_k, "Moment order of the sampler; 0 means Gaussian (comma list)")
        ->delimiter(',')
        ->capture_default_str();
    add_seed_jobs_out(conc, c);

    // deviation
    auto *dev = app.add_subcommand(
        "deviation", "Monte Carlo ||D||_{q/2}, D(y) = ||grad^k p(x + sqrt(lambda) y) - grad^k "
                     "phi(x)||^2, next to its analytic bound. Tests that the local derivatives "
                     "stay close to those of the smoothed polynomial phi.");
    std::vector<double> d_lambda{0.01};
    std::vector<int> d_k{0}, d_q{4};
    std::vector<double> d_x;
    add_instances(dev, c);
    add_trials(dev, c, "Samples per row");
    dev->add_option("--lambda", d_lambda, "Step variance (comma list)")->delimiter(',')->capture_default_str();
    dev->add_option("--k", d_k, "Derivative order (comma list)")->delimiter(',')->capture_default_str();
    dev->add_option("--q", d_q, "Even norm order (comma list)")->delimiter(',')->capture_default_str();
    dev->add_option("--x", d_x, "Center point (comma list)")->delimiter(',');
    dev->add_option("--x-seed", x_seed, "Draw the center from N(0,1)^n with this seed")->capture_default_str();
    add_seed_jobs_out(dev, c);

    // corpus
    auto *corpus = app.add_subcommand("corpus", "Write the deterministic PTF corpus as JSON.");
    corpus->add_option("--n", c.n, "Dimension")->capture_default_str();
    corpus->add_option("--d", c.d, "Maximum degree")->capture_default_str()->check(CLI::Range(1, kDegreeCap));
    corpus->add_option("--count", c.count, "Number of instances")->capture_default_str();
    corpus->add_option("--seed", c.seed, "Corpus seed")->capture_default_str();
    corpus->add_option("--out", c.out, "Output JSON file (default: standard output)");

    // seed
    auto *seed_cmd = app.add_subcommand(
        "seed", "Seed length of the generator: L * (k+1) * ceil(log2 prime) bits for the k-wise "
                "sampler, L * n * ceil(log2 M) for independent coordinates.");
    std::optional<std::uint64_t> seed_prime;
    int s_L = 16, s_R = 4;
    seed_cmd->add_option("--n", c.n, "Dimension")->capture_default_str();
    seed_cmd->add_option("--d", c.d, "Degree")->capture_default_str();
    seed_cmd->add_option("--L", s_L, "Number of summands")->capture_default_str();
    seed_cmd->add_option("--R", s_R, "Moment multiplier")->capture_default_str();
    seed_cmd->add_option("--kwise-prime", seed_prime, "Field size of the k-wise sampler");

    // suite
    auto *suite = app.add_subcommand(
        "suite", "A fixed battery of every experiment over a small corpus, one CSV. Used to check "
                 "that results are reproducible across runs and worker counts.");
    Common sc = c;
    sc.count = 6;
    sc.trials = 20000;
    add_instances(suite, sc);
    add_trials(suite, sc, "Base trial count");
    add_seed_jobs_out(suite, sc);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsageError;
    }

    try {
        const RunOptions opts = run_options(c);
        if (fool->parsed()) {
            std::vector<ExperimentReport> rows;
            const auto inst = instances(c);
            for (int L : fool_L) {
                for (int R : fool_R) {
                    for (std::size_t i = 0; i < inst.size(); ++i) {
                        if (inst[i].p.degree() > c.d) {
                            throw std::invalid_argument("polynomial degree exceeds --d");
                        }
                        PrgConfig cfg;
                        cfg.n = inst[i].p.n();
                        cfg.d = c.d;
                        cfg.L = L;
                        cfg.R = R;
                        cfg.master_seed = derive_seed(c.seed, tag_of("generator"));
                        cfg.kwise_prime = prime;
                        rows.push_back(tagged(
                            exp_fooling_error(inst[i].p, cfg, c.trials,
                                              mc_trials ? mc_trials : c.trials, opts),
                            i));
                    }
                }
            }
            write_rows(c, rows);
        } else if (moments->parsed()) {
            const MomentSampler s = moments_prime
                                        ? MomentSampler::kwise(c.n, mk, *moments_prime, 0)
                                        : MomentSampler::fully_independent(1, mk, 0);
            std::ostringstream os;
            os << "node,value,weight\n";
            for (std::size_t j = 0; j < s.realized_law().size(); ++j) {
                os << j << ',' << format_double(s.realized_law()[j].value) << ','
                   << format_double(s.realized_law()[j].weight) << '\n';
            }
            os << "m,hermite_moment_residual\n";
            const auto res = s.moment_residuals(mk);
            double worst = 0.0;
            for (int m = 0; m <= mk; ++m) {
                const double r = res[static_cast<std::size_t>(m)];
                worst = std::max(worst, std::abs(r));
                os << m << ',' << format_double(r) << '\n';
            }
            os << "max_residual," << format_double(worst) << '\n';
            std::cout << os.str();
            if (audit && worst > 1e-9) {
                throw std::runtime_error("moment audit failed: residual " + format_double(worst)
                                         + " > 1e-9");
            }
        } else if (restrict_cmd->parsed()) {
            const Poly p = to_hermite(load_poly(c.poly));
            const auto x = center_point(r_x, x_seed, p.n());
            const Poly q = gaussian_restrict(p, {r_lambda, x});
            // Spot check: q(y) against p(sqrt(1-lambda) x + sqrt(lambda) y).
            CounterRng rng(derive_seed(x_seed, tag_of("spot")), 0);
            double worst = 0.0;
            std::vector<double> y(p.n()), z(p.n());
            for (int t = 0; t < 16; ++t) {
                for (std::size_t i = 0; i < y.size(); ++i) {
                    y[i] = rng.gaussian();
                    z[i] = std::sqrt(1 - r_lambda) * x[i] + std::sqrt(r_lambda) * y[i];
                }
                const double want = eval(p, z);
                worst = std::max(worst, std::abs(eval(q, y) - want) / std::max(1.0, std::abs(want)));
            }
            std::cerr << "center " << join(x) << "; spot-check max relative error "
                      << format_double(worst) << '\n';
            if (worst > 1e-8) {
                throw std::runtime_error("restriction failed its spot check");
            }
            write_text(c.out, to_json(q).dump(2) + "\n");
        } else if (convert->parsed()) {
            const Poly p = to_basis(load_poly(c.poly), basis_from_string(to_basis_name));
            write_text(c.out, to_json(p).dump(2) + "\n");
        } else if (slow->parsed()) {
            std::vector<ExperimentReport> rows;
            const auto inst = instances(c);
            for (double delta : deltas) {
                for (std::size_t i = 0; i < inst.size(); ++i) {
                    rows.push_back(tagged(exp_slow_growth(inst[i].p, delta, c.trials, threshold, opts), i));
                }
            }
            write_rows(c, rows);
        } else if (fixing->parsed()) {
            std::vector<ExperimentReport> rows;
            const auto inst = instances(c);
            for (double lambda : f_lambda) {
                for (double eps : f_eps) {
                    for (std::size_t i = 0; i < inst.size(); ++i) {
                        rows.push_back(tagged(
                            exp_restriction_fixing(inst[i].p, lambda, eps, outer, inner, opts), i));
                    }
                }
            }
            write_rows(c, rows);
        } else if (hyper->parsed()) {
            std::vector<ExperimentReport> rows;
            const auto inst = instances(c);
            for (double lambda : h_lambda) {
                for (double R : h_R) {
                    for (std::size_t i = 0; i < inst.size(); ++i) {
                        rows.push_back(tagged(exp_hypervariance(inst[i].p, lambda, R, c.trials, opts), i));
                    }
                }
            }
            write_rows(c, rows);
        } else if (anti->parsed()) {
            std::vector<ExperimentReport> rows;
            const auto inst = instances(c);
            for (double eps : a_eps) {
                for (std::size_t i = 0; i < inst.size(); ++i) {
                    rows.push_back(tagged(exp_anticoncentration(inst[i].p, eps, c.trials, opts), i));
                }
            }
            write_rows(c, rows);
        } else if (hybrid->parsed()) {
            std::vector<ExperimentReport> rows;
            const auto inst = instances(c);
            for (double lambda : hy_lambda) {
                for (double eps : hy_eps) {
                    for (int R : hy_R) {
                        for (std::size_t i = 0; i < inst.size(); ++i) {
                            const auto x = center_point(hy_x, x_seed, inst[i].p.n());
                            rows.push_back(tagged(
                                exp_hybrid_step(inst[i].p, x, lambda, eps, R, c.trials, opts), i));
                        }
                    }
                }
            }
            write_rows(c, rows);
        } else if (conc->parsed()) {
            std::vector<ExperimentReport> rows;
            const auto inst = instances(c);
            for (int q : c_q) {
                for (int k : c_k) {
                    for (std::size_t i = 0; i < inst.size(); ++i) {
                        rows.push_back(tagged(exp_sign_concentration(inst[i].p, q, k, c.trials, opts), i));
                    }
                }
            }
            write_rows(c, rows);
        } else if (dev->parsed()) {
            std::vector<ExperimentReport> rows;
            const auto inst = instances(c);
            for (double lambda : d_lambda) {
                for (int k : d_k) {
                    for (int q : d_q) {
                        for (std::size_t i = 0; i < inst.size(); ++i) {
                            const auto x = center_point(d_x, x_seed, inst[i].p.n());
                            rows.push_back(tagged(
                                exp_deviation(inst[i].p, x, lambda, std::min(k, inst[i].p.degree()),
                                              q, c.trials, opts),
                                i));
                        }
                    }
                }
            }
            write_rows(c, rows);
        } else if (corpus->parsed()) {
            nlohmann::json arr = nlohmann::json::array();
            for (const auto &inst : instances(c)) {
                arr.push_back({{"name", inst.name},
                               {"kind", std::string(to_string(inst.label))},
                               {"shift", inst.shift},
                               {"poly", to_json(inst.p)}});
            }
            write_text(c.out, arr.dump(2) + "\n");
        } else if (seed_cmd->parsed()) {
            PrgConfig cfg;
            cfg.n = c.n;
            cfg.d = c.d;
            cfg.L = s_L;
            cfg.R = s_R;
            cfg.kwise_prime = seed_prime;
            if (seed_prime) {
                // Validates the prime against n and the node count.
                (void)MomentSampler::kwise(cfg.n, cfg.moment_order(), *seed_prime, 0);
            }
            const auto acc = seed_accounting(cfg);
            std::cout << "moment_order," << cfg.moment_order() << '\n'
                      << "nodes," << nodes_for_moments(cfg.moment_order()) << '\n'
                      << "bits_per_summand," << acc.bits_per_sample << '\n'
                      << "total_bits," << acc.total_bits << '\n'
                      << "seed_optimal," << (acc.seed_optimal ? "yes" : "no") << '\n';
        } else if (suite->parsed()) {
            const Common &c = sc;
            const RunOptions opts = run_options(sc);
            std::vector<ExperimentReport> rows;
            const auto inst = instances(c);
            const std::uint64_t t = c.trials;
            for (std::size_t i = 0; i < inst.size(); ++i) {
                const Poly &p = inst[i].p;
                const auto x = center_point({}, c.seed + i, p.n());
                PrgConfig cfg;
                cfg.n = p.n();
                cfg.d = std::max(c.d, p.degree());
                cfg.L = 16;
                cfg.R = 4;
                cfg.master_seed = derive_seed(c.seed, tag_of("generator"));
                rows.push_back(tagged(exp_anticoncentration(p, 0.05, t, opts), i));
                rows.push_back(tagged(exp_slow_growth(p, 0.1, std::max<std::uint64_t>(t, 100), 10.0, opts), i));
                rows.push_back(tagged(exp_hypervariance(p, 0.01, 2.0, std::max<std::uint64_t>(t / 20, 1), opts), i));
                rows.push_back(tagged(exp_restriction_fixing(p, 0.01, 0.05, std::max<std::uint64_t>(t / 200, 1), 500, opts), i));
                rows.push_back(tagged(exp_fooling_error(p, cfg, std::max<std::uint64_t>(t, 10000),
                                                        std::max<std::uint64_t>(t, 10000), opts), i));
                rows.push_back(tagged(exp_sign_concentration(p, 8, 0, t, opts), i));
                rows.push_back(tagged(exp_deviation(p, x, 0.01, 1, 4, std::max<std::uint64_t>(t, 2), opts), i));
                rows.push_back(tagged(exp_hybrid_step(p, x, 1.0 / 16, 0.1, 4, t, opts), i));
            }
            write_rows(c, rows);
        }
    } catch (const PolyFormatError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntimeError;
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::out_of_range &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
    return 0;
}
