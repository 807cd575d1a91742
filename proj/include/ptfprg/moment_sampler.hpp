#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ptfprg/quadrature.hpp"
#include "ptfprg/random.hpp"

namespace ptfprg {

inline bool is_prime(std::uint64_t p) noexcept
{
    if (p < 2) {
        return false;
    }
    for (std::uint64_t d = 2; d * d <= p; ++d) {
        if (p % d == 0) {
            return false;
        }
    }
    return true;
}

/// ceil(log2(v)) for v >= 1.
inline int ceil_log2(std::uint64_t v) noexcept
{
    int b = 0;
    while ((std::uint64_t{1} << b) < v && b < 63) {
        ++b;
    }
    return b;
}

/// Node count needed to match k moments: ceil((k+1)/2).
inline int nodes_for_moments(int k) { return (k + 2) / 2; }

/// Distribution on R^n whose coordinates follow a Gauss-Hermite node law, so
/// every polynomial of degree <= k has the same expectation as under N(0,1)^n.
///
/// Fully independent mode draws each coordinate from a counter stream keyed by
/// (master_seed, stream_index). k-wise mode evaluates a random polynomial of
/// degree k over GF(prime) at the coordinate indices and maps each field
/// element to a node through contiguous blocks sized by the weights, which
/// makes any k+1 coordinates independent. Block sizes are rounded to 1/prime,
/// so the realized law can differ slightly from the quadrature weights; see
/// realized_law() and moment_residuals().
class MomentSampler {
public:
    enum class Mode { fully_independent, kwise };

    static MomentSampler fully_independent(std::size_t n, int k, std::uint64_t master_seed)
    {
        return MomentSampler(n, k, Mode::fully_independent, 0, master_seed);
    }

    static MomentSampler kwise(std::size_t n, int k, std::uint64_t prime, std::uint64_t master_seed)
    {
        return MomentSampler(n, k, Mode::kwise, prime, master_seed);
    }

    std::size_t n() const noexcept { return n_; }
    int k() const noexcept { return k_; }
    Mode mode() const noexcept { return mode_; }
    std::uint64_t prime() const noexcept { return prime_; }
    std::uint64_t master_seed() const noexcept { return seed_; }

    /// Quadrature law (exact weights).
    const std::vector<Node> &nodes() const noexcept { return nodes_; }

    /// Law the sampler actually draws from: the quadrature law, or block
    /// sizes / prime in k-wise mode.
    const std::vector<Node> &realized_law() const noexcept { return realized_; }

    /// Field-element counts per node (k-wise mode only).
    const std::vector<std::uint64_t> &block_sizes() const noexcept { return blocks_; }

    /// E[h_m(Y_1)] - E[h_m(z)] under the realized law, for m = 0..max_m.
    /// Hermite moments stay well conditioned where raw powers of the nodes
    /// would cancel catastrophically.
    std::vector<double> moment_residuals(int max_m) const
    {
        std::vector<double> r;
        for (int m = 0; m <= max_m; ++m) {
            r.push_back(discrete_hermite_moment(realized_, m) - (m == 0 ? 1.0 : 0.0));
        }
        return r;
    }

    /// Node indices (into nodes()) for one draw.
    void sample_nodes(std::uint64_t stream_index, std::span<std::uint8_t> out) const
    {
        if (out.size() != n_) {
            throw std::invalid_argument("MomentSampler::sample: output size mismatch");
        }
        CounterRng rng(seed_, stream_index);
        if (mode_ == Mode::fully_independent) {
            for (auto &v : out) {
                v = index_for_uniform(rng.uniform());
            }
            return;
        }
        thread_local std::vector<std::uint64_t> coeffs;
        coeffs.resize(static_cast<std::size_t>(k_) + 1);
        for (auto &c : coeffs) {
            c = rng.below(prime_);
        }
        field_nodes(coeffs, out);
    }

    void sample(std::uint64_t stream_index, std::span<double> out) const
    {
        if (out.size() != n_) {
            throw std::invalid_argument("MomentSampler::sample: output size mismatch");
        }
        thread_local std::vector<std::uint8_t> idx;
        idx.resize(n_);
        sample_nodes(stream_index, idx);
        for (std::size_t i = 0; i < n_; ++i) {
            out[i] = nodes_[idx[i]].value;
        }
    }

    std::vector<double> sample(std::uint64_t stream_index) const
    {
        std::vector<double> v(n_);
        sample(stream_index, v);
        return v;
    }

    /// k-wise mode: the vector induced by the field polynomial with
    /// coefficients c_0..c_k (constant term first), evaluated at 0..n-1.
    void from_field_coefficients(std::span<const std::uint64_t> coeffs, std::span<double> out) const
    {
        if (out.size() != n_) {
            throw std::invalid_argument("from_field_coefficients: size mismatch");
        }
        std::vector<std::uint8_t> idx(n_);
        field_nodes(coeffs, idx);
        for (std::size_t i = 0; i < n_; ++i) {
            out[i] = nodes_[idx[i]].value;
        }
    }

    double node_for_field_element(std::uint64_t e) const
    {
        return nodes_[index_for_field_element(e)].value;
    }

private:
    MomentSampler(std::size_t n, int k, Mode mode, std::uint64_t prime, std::uint64_t seed)
        : n_(n), k_(k), mode_(mode), prime_(prime), seed_(seed)
    {
        if (k < 0) {
            throw std::invalid_argument("moment order k must be >= 0");
        }
        const int M = nodes_for_moments(k);
        if (M > kMaxQuadratureNodes) {
            throw std::out_of_range("moment order " + std::to_string(k)
                                    + " needs more than " + std::to_string(kMaxQuadratureNodes)
                                    + " nodes");
        }
        nodes_ = gauss_hermite_nodes(M);
        if (mode == Mode::fully_independent) {
            realized_ = nodes_;
            double acc = 0.0;
            for (const auto &nd : nodes_) {
                acc += nd.weight;
                cdf_.push_back(acc);
            }
            cdf_.back() = 1.0;
            return;
        }
        if (!is_prime(prime)) {
            throw std::invalid_argument(std::to_string(prime) + " is not prime");
        }
        if (prime >= (std::uint64_t{1} << 32)) {
            throw std::invalid_argument("prime modulus must be below 2^32");
        }
        if (prime < n) {
            throw std::invalid_argument("prime modulus " + std::to_string(prime)
                                        + " is smaller than the dimension " + std::to_string(n)
                                        + "; coordinates would share evaluation points");
        }
        if (prime < static_cast<std::uint64_t>(M)) {
            throw std::invalid_argument("prime modulus " + std::to_string(prime)
                                        + " cannot resolve " + std::to_string(M) + " nodes");
        }
        blocks_ = apportion(prime);
        std::uint64_t end = 0;
        for (std::size_t j = 0; j < nodes_.size(); ++j) {
            end += blocks_[j];
            block_end_.push_back(end);
            realized_.push_back({nodes_[j].value,
                                 static_cast<double>(blocks_[j]) / static_cast<double>(prime)});
        }
    }

    /// Largest-remainder rounding of weights * prime with every node kept.
    std::vector<std::uint64_t> apportion(std::uint64_t prime) const
    {
        const std::size_t M = nodes_.size();
        std::vector<std::uint64_t> counts(M);
        std::vector<double> rem(M);
        std::uint64_t used = 0;
        for (std::size_t j = 0; j < M; ++j) {
            const double exact = nodes_[j].weight * static_cast<double>(prime);
            counts[j] = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::floor(exact)));
            rem[j] = exact - static_cast<double>(counts[j]);
            used += counts[j];
        }
        std::vector<std::size_t> order(M);
        std::iota(order.begin(), order.end(), 0);
        // Ties broken by index so the symmetric pair stays symmetric as far as possible.
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return rem[a] > rem[b]; });
        for (std::size_t i = 0; used < prime; i = (i + 1) % M) {
            ++counts[order[i]];
            ++used;
        }
        while (used > prime) {
            for (auto it = order.rbegin(); it != order.rend() && used > prime; ++it) {
                if (counts[*it] > 1) {
                    --counts[*it];
                    --used;
                }
            }
        }
        return counts;
    }

    void field_nodes(std::span<const std::uint64_t> coeffs, std::span<std::uint8_t> out) const
    {
        if (mode_ != Mode::kwise) {
            throw std::logic_error("from_field_coefficients needs a k-wise sampler");
        }
        if (coeffs.size() != static_cast<std::size_t>(k_) + 1 || out.size() != n_) {
            throw std::invalid_argument("from_field_coefficients: size mismatch");
        }
        for (std::size_t i = 0; i < n_; ++i) {
            // Horner over GF(prime); prime < 2^32 keeps products in range.
            std::uint64_t v = 0;
            for (std::size_t j = coeffs.size(); j-- > 0;) {
                v = (v * i + coeffs[j]) % prime_;
            }
            out[i] = index_for_field_element(v);
        }
    }

    std::uint8_t index_for_field_element(std::uint64_t e) const
    {
        const auto it = std::upper_bound(block_end_.begin(), block_end_.end(), e);
        return static_cast<std::uint8_t>(it - block_end_.begin());
    }

    std::uint8_t index_for_uniform(double u) const
    {
        const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        return static_cast<std::uint8_t>(std::min<std::size_t>(
            static_cast<std::size_t>(it - cdf_.begin()), nodes_.size() - 1));
    }

    std::size_t n_;
    int k_;
    Mode mode_;
    std::uint64_t prime_;
    std::uint64_t seed_;
    std::vector<Node> nodes_;
    std::vector<Node> realized_;
    std::vector<double> cdf_;
    std::vector<std::uint64_t> blocks_;
    std::vector<std::uint64_t> block_end_;
};

} // namespace ptfprg
