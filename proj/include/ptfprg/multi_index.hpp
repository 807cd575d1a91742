#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ptfprg {

/// Largest total degree (and per-coordinate exponent) a polynomial may carry.
/// Factorials beyond 16! stop being exactly representable as doubles.
inline constexpr int kDegreeCap = 16;

/// Exponent vector alpha in N^n, shared by the Hermite and monomial bases.
///
/// Ordering is lexicographic on the exponent sequence, which is what keeps
/// sparse coefficient maps canonical.
class MultiIndex {
public:
    MultiIndex() = default;

    explicit MultiIndex(std::size_t n) : exps_(n, 0) {}

    MultiIndex(std::initializer_list<int> exps)
    {
        exps_.reserve(exps.size());
        for (int e : exps) {
            exps_.push_back(checked(e));
        }
    }

    explicit MultiIndex(std::span<const int> exps)
    {
        exps_.reserve(exps.size());
        for (int e : exps) {
            exps_.push_back(checked(e));
        }
    }

    static MultiIndex unit(std::size_t n, std::size_t i)
    {
        MultiIndex a(n);
        a.set(i, 1);
        return a;
    }

    std::size_t size() const noexcept { return exps_.size(); }

    int operator[](std::size_t i) const noexcept { return exps_[i]; }

    void set(std::size_t i, int e) { exps_.at(i) = checked(e); }

    /// |alpha|
    int total() const noexcept
    {
        return std::accumulate(exps_.begin(), exps_.end(), 0);
    }

    /// alpha! = prod_i alpha_i!
    double factorial() const noexcept
    {
        double f = 1.0;
        for (int e : exps_) {
            for (int j = 2; j <= e; ++j) {
                f *= j;
            }
        }
        return f;
    }

    /// True when every entry is 0 or 1.
    bool is_multilinear() const noexcept
    {
        return std::all_of(exps_.begin(), exps_.end(), [](auto e) { return e <= 1; });
    }

    bool is_zero() const noexcept
    {
        return std::all_of(exps_.begin(), exps_.end(), [](auto e) { return e == 0; });
    }

    /// Componentwise this >= other.
    bool dominates(const MultiIndex &other) const noexcept
    {
        if (other.size() != size()) {
            return false;
        }
        for (std::size_t i = 0; i < size(); ++i) {
            if (exps_[i] < other.exps_[i]) {
                return false;
            }
        }
        return true;
    }

    /// Componentwise difference; requires this->dominates(other).
    MultiIndex operator-(const MultiIndex &other) const
    {
        if (!dominates(other)) {
            throw std::invalid_argument("MultiIndex subtraction would go negative");
        }
        MultiIndex r(size());
        for (std::size_t i = 0; i < size(); ++i) {
            r.exps_[i] = static_cast<std::uint8_t>(exps_[i] - other.exps_[i]);
        }
        return r;
    }

    MultiIndex operator+(const MultiIndex &other) const
    {
        if (other.size() != size()) {
            throw std::invalid_argument("MultiIndex length mismatch");
        }
        MultiIndex r(size());
        for (std::size_t i = 0; i < size(); ++i) {
            r.set(i, exps_[i] + other.exps_[i]);
        }
        return r;
    }

    std::vector<int> to_vector() const { return {exps_.begin(), exps_.end()}; }

    std::string to_string() const
    {
        std::string s = "(";
        for (std::size_t i = 0; i < size(); ++i) {
            if (i) {
                s += ',';
            }
            s += std::to_string(exps_[i]);
        }
        return s + ")";
    }

    auto operator<=>(const MultiIndex &) const = default;
    bool operator==(const MultiIndex &) const = default;

private:
    static std::uint8_t checked(int e)
    {
        if (e < 0 || e > kDegreeCap) {
            throw std::out_of_range("MultiIndex exponent " + std::to_string(e) + " outside [0, "
                                    + std::to_string(kDegreeCap) + "]");
        }
        return static_cast<std::uint8_t>(e);
    }

    std::vector<std::uint8_t> exps_;
};

/// Calls f(alpha) for every alpha <= beta (componentwise), odometer order.
template <typename F>
void for_each_sub_index(const MultiIndex &beta, F &&f)
{
    MultiIndex alpha(beta.size());
    while (true) {
        f(static_cast<const MultiIndex &>(alpha));
        std::size_t i = 0;
        for (; i < beta.size(); ++i) {
            if (alpha[i] < beta[i]) {
                alpha.set(i, alpha[i] + 1);
                break;
            }
            alpha.set(i, 0);
        }
        if (i == beta.size()) {
            return;
        }
    }
}

namespace detail {

template <typename F>
void indices_of_total(MultiIndex &a, std::size_t pos, int remaining, F &f)
{
    if (pos + 1 == a.size()) {
        a.set(pos, remaining);
        f(static_cast<const MultiIndex &>(a));
        a.set(pos, 0);
        return;
    }
    for (int e = remaining; e >= 0; --e) {
        a.set(pos, e);
        indices_of_total(a, pos + 1, remaining - e, f);
    }
    a.set(pos, 0);
}

} // namespace detail

/// Calls f(alpha) for every alpha in N^n with |alpha| == total.
template <typename F>
void for_each_index_of_total(std::size_t n, int total, F &&f)
{
    if (n == 0) {
        if (total == 0) {
            f(MultiIndex{});
        }
        return;
    }
    MultiIndex a(n);
    detail::indices_of_total(a, 0, total, f);
}

} // namespace ptfprg
