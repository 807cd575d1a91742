#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ptfprg/derivatives.hpp"
#include "ptfprg/poly.hpp"
#include "ptfprg/random.hpp"
#include "ptfprg/stats.hpp"

namespace ptfprg {

enum class PtfLabel { random_hermite, random_standard, sparse, monomial_power, custom };

inline std::string_view to_string(PtfLabel l) noexcept
{
    switch (l) {
    case PtfLabel::random_hermite:
        return "random_hermite";
    case PtfLabel::random_standard:
        return "random_standard";
    case PtfLabel::sparse:
        return "sparse";
    case PtfLabel::monomial_power:
        return "monomial_power";
    case PtfLabel::custom:
        return "custom";
    }
    return "custom";
}

inline PtfLabel label_from_string(std::string_view s)
{
    for (auto l : {PtfLabel::random_hermite, PtfLabel::random_standard, PtfLabel::sparse,
                   PtfLabel::monomial_power, PtfLabel::custom}) {
        if (to_string(l) == s) {
            return l;
        }
    }
    throw std::invalid_argument("unknown corpus kind '" + std::string(s) + "'");
}

/// A PTF sign(p(x)) with a provenance tag.
struct PtfInstance {
    Poly p;
    PtfLabel label;
    std::string name;
    /// Constant shift subtracted to center the PTF (0 when uncentered).
    double shift = 0.0;
};

struct CorpusSpec {
    std::size_t n = 4;
    /// Maximum degree; instances cycle through d, d-1, ..., 1.
    int d = 3;
    std::vector<PtfLabel> kinds{PtfLabel::random_hermite, PtfLabel::random_standard,
                                PtfLabel::sparse, PtfLabel::monomial_power};
    /// Subtract a Monte Carlo median so Pr[sign = 1] is near 1/2, on every
    /// other sweep through the degrees (starting with the first).
    bool centered_variants = true;
    /// Dense random polynomials keep at most this many terms.
    std::size_t max_terms = 256;
};

/// Monte Carlo median of p(x), x ~ N(0,1)^n.
inline double mc_median(const Poly &p, std::uint64_t samples, std::uint64_t seed)
{
    DerivativeEvaluator ev(p, 0);
    CounterRng rng(seed, 0);
    std::vector<double> x(p.n());
    std::vector<double> vals(samples);
    for (auto &v : vals) {
        for (auto &xi : x) {
            xi = rng.gaussian();
        }
        v = ev.value(x);
    }
    std::sort(vals.begin(), vals.end());
    return quantile_sorted(vals, 0.5);
}

namespace detail {

/// All alpha with |alpha| <= d, or a random subset of at most `cap` that always
/// keeps one index of total degree d.
inline std::vector<MultiIndex> support_up_to(std::size_t n, int d, std::size_t cap,
                                             CounterRng &rng)
{
    std::vector<MultiIndex> all;
    for (int k = 0; k <= d; ++k) {
        for_each_index_of_total(n, k, [&](const MultiIndex &a) { all.push_back(a); });
        if (all.size() > 4 * cap) {
            break;
        }
    }
    if (all.size() <= cap && all.back().total() == d) {
        return all;
    }
    std::vector<MultiIndex> pick;
    MultiIndex top(n);
    top.set(0, d);
    pick.push_back(top);
    while (pick.size() < cap) {
        MultiIndex a(n);
        const int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(d) + 1));
        for (int j = 0; j < k; ++j) {
            const auto i = static_cast<std::size_t>(rng.below(n));
            a.set(i, a[i] + 1);
        }
        if (std::find(pick.begin(), pick.end(), a) == pick.end()) {
            pick.push_back(a);
        }
    }
    return pick;
}

inline Poly unit_norm(const Poly &p)
{
    const double norm = exact_l2_norm(to_hermite(p));
    return scaled(p, 1.0 / norm);
}

inline Poly random_dense(std::size_t n, int d, Basis basis, std::size_t cap, CounterRng &rng)
{
    Poly::Terms terms;
    for (const auto &a : support_up_to(n, d, cap, rng)) {
        terms[a] = rng.gaussian();
    }
    return unit_norm(Poly(n, d, basis, std::move(terms)));
}

inline Poly random_sparse(std::size_t n, int d, CounterRng &rng)
{
    // Never ask for more distinct monomials with 1 <= |alpha| <= d than exist.
    std::size_t available = 1; // C(n + d, d), then minus the constant
    for (int j = 1; j <= d && available < 64; ++j) {
        available = available * (n + static_cast<std::size_t>(j)) / static_cast<std::size_t>(j);
    }
    const std::size_t count = std::min<std::size_t>({n + 1, 5, available - 1});
    Poly::Terms terms;
    while (terms.size() < count) {
        const int k = terms.empty()
                          ? d
                          : 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(d)));
        MultiIndex a(n);
        for (int j = 0; j < k; ++j) {
            const auto i = static_cast<std::size_t>(rng.below(n));
            a.set(i, a[i] + 1);
        }
        terms.emplace(a, rng.gaussian());
    }
    return unit_norm(Poly(n, d, Basis::standard, std::move(terms)));
}

} // namespace detail

/// Deterministic PTF corpus. Instance i has kind kinds[i % K], degree
/// d - ((i / K) % d), and is centered when centered_variants is set and
/// (i / (K d)) is even.
inline std::vector<PtfInstance> corpus_generate(const CorpusSpec &spec, std::size_t count,
                                                std::uint64_t seed)
{
    if (spec.kinds.empty()) {
        throw std::invalid_argument("corpus needs at least one kind");
    }
    if (spec.n == 0 || spec.d < 1 || spec.d > kDegreeCap) {
        throw std::invalid_argument("corpus needs n >= 1 and 1 <= d <= cap");
    }
    std::vector<PtfInstance> out;
    out.reserve(count);
    const std::size_t K = spec.kinds.size();
    const auto D = static_cast<std::size_t>(spec.d);
    for (std::size_t i = 0; i < count; ++i) {
        const PtfLabel kind = spec.kinds[i % K];
        const int deg = spec.d - static_cast<int>((i / K) % D);
        const bool centered = spec.centered_variants && ((i / (K * D)) % 2 == 0);
        CounterRng rng(derive_seed(seed, tag_of("corpus")), i);
        Poly p = Poly::constant(spec.n, 0.0);
        switch (kind) {
        case PtfLabel::random_hermite:
            p = detail::random_dense(spec.n, deg, Basis::hermite, spec.max_terms, rng);
            break;
        case PtfLabel::random_standard:
            p = detail::random_dense(spec.n, deg, Basis::standard, spec.max_terms, rng);
            break;
        case PtfLabel::sparse:
            p = detail::random_sparse(spec.n, deg, rng);
            break;
        case PtfLabel::monomial_power:
            p = Poly::term([&] {
                MultiIndex a(spec.n);
                a.set(0, deg);
                return a;
            }(), 1.0, Basis::standard);
            break;
        case PtfLabel::custom:
            throw std::invalid_argument("custom instances come from files, not the generator");
        }
        double shift = 0.0;
        if (centered) {
            shift = mc_median(p, 100001, derive_seed(seed, tag_of("median") + i));
            p = add_constant(p, -shift);
        }
        std::string name = std::string(to_string(kind)) + "_d" + std::to_string(deg)
                           + (centered ? "_centered" : "") + "_" + std::to_string(i);
        out.push_back({std::move(p), kind, std::move(name), shift});
    }
    return out;
}

} // namespace ptfprg
