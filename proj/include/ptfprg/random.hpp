#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string_view>

namespace ptfprg {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Stable 64-bit tag for a name (FNV-1a), used to split a master seed by purpose.
constexpr std::uint64_t tag_of(std::string_view name) noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : name) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Derives an independent seed from (seed, tag).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) noexcept
{
    return mix64(mix64(seed ^ 0x6a09e667f3bcc909ULL) + mix64(tag + 0x9e3779b97f4a7c15ULL));
}

/// Counter-based generator: the i-th output is a pure function of
/// (seed, stream, i), so streams can be consumed from any thread in any order.
class CounterRng {
public:
    using result_type = std::uint64_t;

    CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
        : key0_(mix64(seed ^ 0x243f6a8885a308d3ULL)),
          key1_(mix64(mix64(stream + 0x13198a2e03707344ULL) ^ key0_))
    {
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    /// Output at an absolute counter position.
    result_type at(std::uint64_t counter) const noexcept
    {
        return mix64(mix64(key1_ + counter * 0x9e3779b97f4a7c15ULL) ^ key0_);
    }

    result_type operator()() noexcept { return at(counter_++); }

    std::uint64_t counter() const noexcept { return counter_; }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound), bound > 0, by rejection.
    std::uint64_t below(std::uint64_t bound) noexcept
    {
        const std::uint64_t limit = max() - max() % bound;
        std::uint64_t r;
        do {
            r = (*this)();
        } while (r >= limit);
        return r % bound;
    }

    /// Standard normal by Box-Muller; the second deviate of each pair is cached.
    double gaussian() noexcept
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform(); // (0, 1]
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::uint64_t key0_;
    std::uint64_t key1_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace ptfprg
