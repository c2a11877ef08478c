#pragma once

// Counter-based random numbers: every draw is a pure function of
// (key, counter), so results never depend on scheduling or draw order.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace skomap {

inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derives a stream key from a seed and up to three labels.
inline constexpr std::uint64_t derive_key(std::uint64_t seed, std::uint64_t a = 0, std::uint64_t b = 0,
                                          std::uint64_t c = 0) {
    return mix64(mix64(mix64(mix64(seed) ^ a) ^ (b * 0x632be59bd9b4e019ULL)) ^ (c * 0x8cb92ba72f3d8dd7ULL));
}

class CounterRng {
public:
    explicit constexpr CounterRng(std::uint64_t key) : key_(key) {}

    constexpr std::uint64_t bits(std::uint64_t counter) const { return mix64(key_ ^ mix64(counter)); }

    // Uniform on (0, 1], 53-bit resolution.
    double uniform(std::uint64_t counter) const {
        return static_cast<double>((bits(counter) >> 11) + 1) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller on the counter pair (2c, 2c+1).
    double normal(std::uint64_t counter) const {
        const double u1 = uniform(2 * counter);
        const double u2 = uniform(2 * counter + 1);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t key_;
};

// Sequential convenience wrapper for generators that just need "the next" draw.
class StreamRng {
public:
    explicit StreamRng(std::uint64_t key) : rng_(key) {}

    double uniform() { return rng_.uniform(next_++); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal() { return rng_.normal(next_++); }
    // Integer in [lo, hi].
    std::int64_t integer(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(rng_.bits(next_++) % span);
    }
    bool chance(double p) { return uniform() <= p; }

private:
    CounterRng rng_;
    std::uint64_t next_ = 0;
};

}  // namespace skomap
