#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "ptfprg/moment_sampler.hpp"

namespace ptfprg {

/// Generator parameters. Each of the L summands matches k = d * R moments.
struct PrgConfig {
    std::size_t n = 4;
    int d = 3;
    int L = 16;
    int R = 4;
    std::uint64_t master_seed = 0;
    /// Set to use the k-wise independent sampler over GF(prime).
    std::optional<std::uint64_t> kwise_prime;

    int moment_order() const noexcept { return d * R; }
    double lambda() const noexcept { return 1.0 / L; }

    void validate() const
    {
        if (L < 1) {
            throw std::invalid_argument("L must be >= 1");
        }
        if (R < 1) {
            throw std::invalid_argument("R must be >= 1");
        }
        if (d < 1) {
            throw std::invalid_argument("d must be >= 1");
        }
        if (nodes_for_moments(moment_order()) > kMaxQuadratureNodes) {
            throw std::out_of_range("d * R = " + std::to_string(moment_order())
                                    + " exceeds the largest supported moment order "
                                    + std::to_string(2 * kMaxQuadratureNodes - 1));
        }
    }
};

/// Z = (1/sqrt(L)) sum_{i=1}^{L} Y_i with Y_i drawn from a dR-moment-matching sampler.
///
/// Output seed_index s uses sampler streams s*L + 0 .. s*L + L-1.
class Prg {
public:
    explicit Prg(const PrgConfig &cfg) : cfg_(validated(cfg)), sampler_(make_sampler(cfg_)) {}

    const PrgConfig &config() const noexcept { return cfg_; }
    const MomentSampler &sampler() const noexcept { return sampler_; }

    /// The sum is formed from signed node counts, so draws that cancel in
    /// exact arithmetic give exactly 0 rather than a rounding residue.
    void output(std::uint64_t seed_index, std::span<double> out) const
    {
        if (out.size() != cfg_.n) {
            throw std::invalid_argument("Prg::output: output size mismatch");
        }
        const auto &nodes = sampler_.nodes();
        const std::size_t M = nodes.size();
        thread_local std::vector<std::uint8_t> idx;
        thread_local std::vector<int> net; // per coordinate, count(+a_m) - count(-a_m)
        idx.resize(cfg_.n);
        net.assign(cfg_.n * (M / 2), 0);
        const auto L = static_cast<std::uint64_t>(cfg_.L);
        for (std::uint64_t i = 0; i < L; ++i) {
            sampler_.sample_nodes(seed_index * L + i, idx);
            for (std::size_t j = 0; j < cfg_.n; ++j) {
                const std::size_t m = idx[j];
                if (2 * m + 1 < M) {
                    --net[j * (M / 2) + m];
                } else if (2 * m + 1 > M) {
                    ++net[j * (M / 2) + (M - 1 - m)];
                }
            }
        }
        const double scale = 1.0 / std::sqrt(static_cast<double>(cfg_.L));
        for (std::size_t j = 0; j < cfg_.n; ++j) {
            double v = 0.0;
            for (std::size_t m = 0; m < M / 2; ++m) {
                v += net[j * (M / 2) + m] * nodes[M - 1 - m].value;
            }
            out[j] = v * scale;
        }
    }

    std::vector<double> output(std::uint64_t seed_index) const
    {
        std::vector<double> z(cfg_.n);
        output(seed_index, z);
        return z;
    }

private:
    static PrgConfig validated(const PrgConfig &cfg)
    {
        cfg.validate();
        return cfg;
    }

    static MomentSampler make_sampler(const PrgConfig &cfg)
    {
        if (cfg.kwise_prime) {
            return MomentSampler::kwise(cfg.n, cfg.moment_order(), *cfg.kwise_prime,
                                        cfg.master_seed);
        }
        return MomentSampler::fully_independent(cfg.n, cfg.moment_order(), cfg.master_seed);
    }

    PrgConfig cfg_;
    MomentSampler sampler_;
};

struct SeedAccounting {
    std::uint64_t bits_per_sample;
    std::uint64_t total_bits;
    /// False for the fully independent sampler, whose cost grows with n.
    bool seed_optimal;
};

/// k-wise: (k+1) * ceil(log2 prime) bits per Y_i; fully independent:
/// n * ceil(log2 M). Total is L times that.
inline SeedAccounting seed_accounting(const PrgConfig &cfg)
{
    cfg.validate();
    const int k = cfg.moment_order();
    std::uint64_t per = 0;
    if (cfg.kwise_prime) {
        per = static_cast<std::uint64_t>(k + 1)
              * static_cast<std::uint64_t>(ceil_log2(*cfg.kwise_prime));
    } else {
        per = static_cast<std::uint64_t>(cfg.n)
              * static_cast<std::uint64_t>(ceil_log2(static_cast<std::uint64_t>(nodes_for_moments(k))));
    }
    return {per, per * static_cast<std::uint64_t>(cfg.L), cfg.kwise_prime.has_value()};
}

} // namespace ptfprg
