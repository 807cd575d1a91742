#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ptfprg/hermite.hpp"
#include "ptfprg/multi_index.hpp"

namespace ptfprg {

enum class Basis { hermite, standard };

inline std::string_view to_string(Basis b) noexcept
{
    return b == Basis::hermite ? "hermite" : "standard";
}

inline Basis basis_from_string(std::string_view s)
{
    if (s == "hermite") {
        return Basis::hermite;
    }
    if (s == "standard") {
        return Basis::standard;
    }
    throw std::invalid_argument("unknown basis '" + std::string(s) + "'");
}

/// Sparse real polynomial in n variables with declared degree bound d.
///
/// Coefficients are keyed by MultiIndex in lexicographic order and never hold
/// an explicit zero. In the Hermite basis the coefficient of alpha is the
/// Hermite coefficient f^(alpha); in the standard basis it multiplies the
/// monomial x^alpha. Values are immutable once constructed.
class Poly {
public:
    using Terms = std::map<MultiIndex, double>;

    Poly(std::size_t n, int degree, Basis basis, Terms terms = {})
        : n_(n), degree_(degree), basis_(basis)
    {
        if (degree < 0 || degree > kDegreeCap) {
            throw std::out_of_range("declared degree " + std::to_string(degree)
                                    + " outside [0, " + std::to_string(kDegreeCap) + "]");
        }
        for (auto &[alpha, c] : terms) {
            check_index(alpha);
            if (!std::isfinite(c)) {
                throw std::invalid_argument("non-finite coefficient at " + alpha.to_string());
            }
            if (c != 0.0) {
                terms_.emplace(alpha, c);
            }
        }
    }

    static Poly constant(std::size_t n, double c, Basis basis = Basis::hermite)
    {
        return Poly(n, 0, basis, {{MultiIndex(n), c}});
    }

    /// c * h_alpha or c * x^alpha, with declared degree |alpha|.
    static Poly term(const MultiIndex &alpha, double c, Basis basis)
    {
        return Poly(alpha.size(), alpha.total(), basis, {{alpha, c}});
    }

    std::size_t n() const noexcept { return n_; }
    int degree() const noexcept { return degree_; }
    Basis basis() const noexcept { return basis_; }
    const Terms &terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty(); }

    double coefficient(const MultiIndex &alpha) const
    {
        auto it = terms_.find(alpha);
        return it == terms_.end() ? 0.0 : it->second;
    }

    /// Largest |alpha| actually present (0 for the zero polynomial).
    int effective_degree() const noexcept
    {
        int d = 0;
        for (const auto &[alpha, c] : terms_) {
            d = std::max(d, alpha.total());
        }
        return d;
    }

    bool operator==(const Poly &) const = default;

private:
    void check_index(const MultiIndex &alpha) const
    {
        if (alpha.size() != n_) {
            throw std::invalid_argument("multi-index " + alpha.to_string() + " has length "
                                        + std::to_string(alpha.size()) + ", expected "
                                        + std::to_string(n_));
        }
        if (alpha.total() > degree_) {
            throw std::invalid_argument("multi-index " + alpha.to_string()
                                        + " exceeds declared degree " + std::to_string(degree_));
        }
    }

    std::size_t n_;
    int degree_;
    Basis basis_;
    Terms terms_;
};

namespace detail {

inline void require_dimension(const Poly &p, std::span<const double> x)
{
    if (x.size() != p.n()) {
        throw std::invalid_argument("point has dimension " + std::to_string(x.size())
                                    + ", polynomial has " + std::to_string(p.n()));
    }
}

inline void require_hermite(const Poly &p, const char *what)
{
    if (p.basis() != Basis::hermite) {
        throw std::invalid_argument(std::string(what) + " needs a Hermite-basis polynomial");
    }
}

/// Per-coordinate table of h_m(x_i) or x_i^m for m <= degree.
inline std::vector<double> coordinate_table(Basis basis, int degree, std::span<const double> x)
{
    const std::size_t w = static_cast<std::size_t>(degree) + 1;
    std::vector<double> table(x.size() * w);
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::span<double> row(table.data() + i * w, w);
        if (basis == Basis::hermite) {
            hermite_table(x[i], row);
        } else {
            row[0] = 1.0;
            for (std::size_t m = 1; m < w; ++m) {
                row[m] = row[m - 1] * x[i];
            }
        }
    }
    return table;
}

/// Accumulates contributions and drops entries that cancel down to rounding noise.
class CancellingAccumulator {
public:
    void add(const MultiIndex &alpha, long double v)
    {
        auto &[sum, mag] = acc_[alpha];
        sum += v;
        mag += std::abs(v);
    }

    /// Entries below 64 ulps (of double) of their contribution mass are dropped.
    Poly::Terms finish() const
    {
        constexpr long double kNoise = 64.0L * 2.220446049250313e-16L;
        Poly::Terms out;
        for (const auto &[alpha, sm] : acc_) {
            if (std::abs(sm.first) > kNoise * sm.second) {
                out.emplace(alpha, static_cast<double>(sm.first));
            }
        }
        return out;
    }

private:
    std::map<MultiIndex, std::pair<long double, long double>> acc_;
};

/// Re-expands p coordinate by coordinate using table[m][j] (m -> sum_j table[m][j] e_j).
template <typename Table>
Poly change_basis(const Poly &p, const Table &table, Basis target)
{
    CancellingAccumulator acc;
    const std::size_t n = p.n();
    for (const auto &[alpha, c] : p.terms()) {
        // Expand the product over coordinates as a running list of partial terms.
        std::vector<std::pair<MultiIndex, long double>> partial{{MultiIndex(n), c}};
        for (std::size_t i = 0; i < n; ++i) {
            const int m = alpha[i];
            if (m == 0) {
                continue;
            }
            std::vector<std::pair<MultiIndex, long double>> next;
            next.reserve(partial.size() * static_cast<std::size_t>(m + 1));
            for (const auto &[beta, v] : partial) {
                for (int j = 0; j <= m; ++j) {
                    const long double t = table[m][j];
                    if (t == 0.0L) {
                        continue;
                    }
                    MultiIndex b = beta;
                    b.set(i, j);
                    next.emplace_back(std::move(b), v * t);
                }
            }
            partial = std::move(next);
        }
        for (const auto &[beta, v] : partial) {
            acc.add(beta, v);
        }
    }
    return Poly(n, p.degree(), target, acc.finish());
}

} // namespace detail

/// Evaluates p at x in whichever basis p is stored.
inline double eval(const Poly &p, std::span<const double> x)
{
    detail::require_dimension(p, x);
    if (p.is_zero()) {
        return 0.0;
    }
    const auto table = detail::coordinate_table(p.basis(), p.degree(), x);
    const std::size_t w = static_cast<std::size_t>(p.degree()) + 1;
    double sum = 0.0;
    for (const auto &[alpha, c] : p.terms()) {
        double v = c;
        for (std::size_t i = 0; i < p.n(); ++i) {
            if (alpha[i] != 0) {
                v *= table[i * w + static_cast<std::size_t>(alpha[i])];
            }
        }
        sum += v;
    }
    return sum;
}

inline Poly to_standard(const Poly &p)
{
    if (p.basis() == Basis::standard) {
        return p;
    }
    return detail::change_basis(p, basis_tables().hermite_to_power, Basis::standard);
}

inline Poly to_hermite(const Poly &p)
{
    if (p.basis() == Basis::hermite) {
        return p;
    }
    return detail::change_basis(p, basis_tables().power_to_hermite, Basis::hermite);
}

inline Poly to_basis(const Poly &p, Basis b)
{
    return b == Basis::hermite ? to_hermite(p) : to_standard(p);
}

/// Partial derivative d^alpha p, in the same basis as p.
///
/// Hermite basis: h_beta -> sqrt(beta!/gamma!) h_gamma with gamma = beta - alpha.
/// Standard basis: x^beta -> (beta!/gamma!) x^gamma.
/// Terms with beta not >= alpha vanish.
inline Poly derivative(const Poly &p, const MultiIndex &alpha)
{
    if (alpha.size() != p.n()) {
        throw std::invalid_argument("derivative multi-index has wrong length");
    }
    Poly::Terms out;
    for (const auto &[beta, c] : p.terms()) {
        if (!beta.dominates(alpha)) {
            continue;
        }
        const MultiIndex gamma = beta - alpha;
        const double ratio = beta.factorial() / gamma.factorial();
        out.emplace(gamma, c * (p.basis() == Basis::hermite ? std::sqrt(ratio) : ratio));
    }
    return Poly(p.n(), std::max(0, p.degree() - alpha.total()), p.basis(), std::move(out));
}

/// U_rho: f^(alpha) -> rho^|alpha| f^(alpha). rho > 1 is allowed.
inline Poly noise_operator(const Poly &p, double rho)
{
    detail::require_hermite(p, "noise_operator");
    if (!(rho >= 0.0)) {
        throw std::invalid_argument("noise_operator: rho must be >= 0");
    }
    Poly::Terms out;
    for (const auto &[alpha, c] : p.terms()) {
        out.emplace(alpha, c * std::pow(rho, alpha.total()));
    }
    return Poly(p.n(), p.degree(), Basis::hermite, std::move(out));
}

/// (E_{x ~ N(0,1)^n} p(x)^2)^{1/2}, read off the orthonormal coefficients.
inline double exact_l2_norm(const Poly &p)
{
    detail::require_hermite(p, "exact_l2_norm");
    double s = 0.0;
    for (const auto &[alpha, c] : p.terms()) {
        s += c * c;
    }
    return std::sqrt(s);
}

/// ||U_{sqrt(q-1)} p||_2, the hypercontractive upper bound on the Gaussian q-norm.
inline double hypercontractive_qnorm_bound(const Poly &p, int q)
{
    detail::require_hermite(p, "hypercontractive_qnorm_bound");
    if (q < 2 || q % 2 != 0) {
        throw std::invalid_argument("q must be an even integer >= 2");
    }
    double s = 0.0;
    for (const auto &[alpha, c] : p.terms()) {
        s += std::pow(static_cast<double>(q - 1), alpha.total()) * c * c;
    }
    return std::sqrt(s);
}

inline Poly scaled(const Poly &p, double factor)
{
    Poly::Terms out;
    for (const auto &[alpha, c] : p.terms()) {
        out.emplace(alpha, c * factor);
    }
    return Poly(p.n(), p.degree(), p.basis(), std::move(out));
}

/// p + shift (the constant term is the zero multi-index in both bases).
inline Poly add_constant(const Poly &p, double shift)
{
    Poly::Terms out = p.terms();
    out[MultiIndex(p.n())] += shift;
    return Poly(p.n(), p.degree(), p.basis(), std::move(out));
}

} // namespace ptfprg
