#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "ptfprg/poly.hpp"

namespace ptfprg {

/// Norms ||nabla^k p(x)|| for k = 0..d at one point.
///
/// ||nabla^k p(x)||^2 is the sum over multi-indices |alpha| = k of
/// (d^alpha p(x))^2, each multi-index counted once.
struct GradientSpectrum {
    std::vector<double> values;

    std::size_t size() const noexcept { return values.size(); }
    double operator[](std::size_t k) const { return values.at(k); }
};

/// Precompiled evaluator for every partial derivative d^alpha p with
/// |alpha| <= max_order, reusable across many evaluation points.
///
/// Each (term beta, alpha <= beta) pair becomes a flat entry
/// coefficient * basis_{beta - alpha}(x) accumulated into alpha's slot, so a
/// point costs one coordinate table plus n multiplies per entry.
class DerivativeEvaluator {
public:
    explicit DerivativeEvaluator(const Poly &p) : DerivativeEvaluator(p, p.degree()) {}

    DerivativeEvaluator(const Poly &p, int max_order)
        : n_(p.n()), degree_(p.degree()), basis_(p.basis()),
          max_order_(std::min(max_order, p.degree()))
    {
        std::map<MultiIndex, std::vector<Pending>> by_slot;
        for (const auto &[beta, c] : p.terms()) {
            for_each_sub_index(beta, [&](const MultiIndex &alpha) {
                if (alpha.total() > max_order_) {
                    return;
                }
                const MultiIndex gamma = beta - alpha;
                const double ratio = beta.factorial() / gamma.factorial();
                const double f = basis_ == Basis::hermite ? std::sqrt(ratio) : ratio;
                by_slot[alpha].push_back({c * f, gamma.to_vector()});
            });
        }
        // Slots grouped by order so order-k partials form a contiguous range.
        order_begin_.assign(static_cast<std::size_t>(max_order_) + 2, 0);
        std::vector<std::vector<const MultiIndex *>> per_order(
            static_cast<std::size_t>(max_order_) + 1);
        for (const auto &[alpha, list] : by_slot) {
            per_order[static_cast<std::size_t>(alpha.total())].push_back(&alpha);
        }
        for (std::size_t k = 0; k < per_order.size(); ++k) {
            order_begin_[k] = slots_.size();
            for (const MultiIndex *alpha : per_order[k]) {
                const std::size_t slot = slots_.size();
                slots_.push_back(*alpha);
                for (const Pending &e : by_slot[*alpha]) {
                    entries_.push_back({e.coef, slot});
                    for (int g : e.gamma) {
                        gammas_.push_back(static_cast<std::uint8_t>(g));
                    }
                }
            }
        }
        order_begin_.back() = slots_.size();
    }

    std::size_t n() const noexcept { return n_; }
    int max_order() const noexcept { return max_order_; }

    /// Multi-indices with a (possibly) nonzero partial, grouped by order.
    const std::vector<MultiIndex> &slots() const noexcept { return slots_; }

    /// Slot range [first, last) holding the order-k partials.
    std::pair<std::size_t, std::size_t> order_range(int k) const
    {
        if (k < 0 || k > max_order_) {
            return {0, 0};
        }
        const auto kk = static_cast<std::size_t>(k);
        return {order_begin_[kk], order_begin_[kk + 1]};
    }

    /// Writes d^alpha p(x) into out[slot] for every slot. out.size() == slots().size().
    void evaluate(std::span<const double> x, std::span<double> out) const
    {
        if (x.size() != n_) {
            throw std::invalid_argument("DerivativeEvaluator: point dimension mismatch");
        }
        std::fill(out.begin(), out.end(), 0.0);
        if (entries_.empty()) {
            return;
        }
        thread_local std::vector<double> table;
        fill_table(x, table);
        const std::size_t w = static_cast<std::size_t>(degree_) + 1;
        const std::uint8_t *g = gammas_.data();
        for (const Entry &e : entries_) {
            double v = e.coef;
            for (std::size_t i = 0; i < n_; ++i, ++g) {
                if (*g) {
                    v *= table[i * w + *g];
                }
            }
            out[e.slot] += v;
        }
    }

    /// p(x) alone.
    double value(std::span<const double> x) const
    {
        thread_local std::vector<double> buf;
        buf.resize(slots_.size());
        evaluate(x, buf);
        const auto [b, e] = order_range(0);
        return b == e ? 0.0 : buf[b];
    }

    GradientSpectrum spectrum(std::span<const double> x) const
    {
        thread_local std::vector<double> buf;
        buf.resize(slots_.size());
        evaluate(x, buf);
        return spectrum_from_partials(buf);
    }

    GradientSpectrum spectrum_from_partials(std::span<const double> partials) const
    {
        GradientSpectrum s;
        s.values.assign(static_cast<std::size_t>(max_order_) + 1, 0.0);
        for (int k = 0; k <= max_order_; ++k) {
            const auto [b, e] = order_range(k);
            double sq = 0.0;
            for (std::size_t i = b; i < e; ++i) {
                sq += partials[i] * partials[i];
            }
            s.values[static_cast<std::size_t>(k)] = std::sqrt(sq);
        }
        return s;
    }

private:
    struct Pending {
        double coef;
        std::vector<int> gamma;
    };
    struct Entry {
        double coef;
        std::size_t slot;
    };

    void fill_table(std::span<const double> x, std::vector<double> &table) const
    {
        const std::size_t w = static_cast<std::size_t>(degree_) + 1;
        table.resize(n_ * w);
        for (std::size_t i = 0; i < n_; ++i) {
            double *row = table.data() + i * w;
            if (basis_ == Basis::hermite) {
                hermite_table(x[i], std::span<double>(row, w));
            } else {
                row[0] = 1.0;
                for (std::size_t m = 1; m < w; ++m) {
                    row[m] = row[m - 1] * x[i];
                }
            }
        }
    }

    std::size_t n_;
    int degree_;
    Basis basis_;
    int max_order_;
    std::vector<MultiIndex> slots_;
    std::vector<std::size_t> order_begin_;
    std::vector<Entry> entries_;
    std::vector<std::uint8_t> gammas_;
};

/// ||nabla^k p(x)|| for k = 0..degree.
inline GradientSpectrum gradient_spectrum(const Poly &p, std::span<const double> x)
{
    detail::require_dimension(p, x);
    return DerivativeEvaluator(p).spectrum(x);
}

/// Every nonzero partial d^alpha p(x), keyed by alpha.
inline std::map<MultiIndex, double> all_partials(const Poly &p, std::span<const double> x)
{
    detail::require_dimension(p, x);
    DerivativeEvaluator ev(p);
    std::vector<double> buf(ev.slots().size());
    ev.evaluate(x, buf);
    std::map<MultiIndex, double> out;
    for (std::size_t i = 0; i < buf.size(); ++i) {
        out.emplace(ev.slots()[i], buf[i]);
    }
    return out;
}

} // namespace ptfprg
