#include "skomap/brownian.hpp"

#include <cmath>

#include "skomap/errors.hpp"
#include "skomap/random.hpp"

namespace skomap {

namespace {
constexpr std::uint64_t kBridgeLabel = 0xb0b1;
constexpr unsigned kMaxLevel = 30;
}  // namespace

BrownianHierarchy::BrownianHierarchy(std::uint64_t seed, double horizon, unsigned max_level, std::uint64_t stream)
    : horizon_(horizon), max_level_(max_level) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw UsageError("Brownian horizon must be positive");
    if (max_level > kMaxLevel) throw UsageError("Brownian level above 30");
    const std::size_t n = std::size_t{1} << max_level;
    values_.assign(n + 1, 0.0);
    values_[n] = std::sqrt(horizon) * CounterRng(derive_key(seed, kBridgeLabel, stream, 0)).normal(0);
    for (unsigned lev = 1; lev <= max_level; ++lev) {
        const CounterRng rng(derive_key(seed, kBridgeLabel, stream, lev));
        const std::size_t half = n >> lev;
        // Parent interval length T / 2^(lev-1); the midpoint has variance length/4.
        const double sd = 0.5 * std::sqrt(horizon / static_cast<double>(std::size_t{1} << (lev - 1)));
        const std::size_t count = std::size_t{1} << (lev - 1);
        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t mid = (2 * i + 1) * half;
            values_[mid] = 0.5 * (values_[mid - half] + values_[mid + half]) + sd * rng.normal(i);
        }
    }
}

GridPath BrownianHierarchy::level(unsigned k) const {
    if (k > max_level_) throw UsageError("requested Brownian level exceeds the generated depth");
    const std::size_t intervals = std::size_t{1} << k;
    const std::size_t stride = std::size_t{1} << (max_level_ - k);
    std::vector<double> v(intervals + 1);
    for (std::size_t i = 0; i <= intervals; ++i) v[i] = values_[i * stride];
    return GridPath(TimeGrid::uniform(horizon_, intervals), std::move(v));
}

std::vector<GridPath> brownian_path(std::uint64_t seed, double horizon, unsigned n_levels, std::uint64_t stream) {
    if (n_levels < 1) throw UsageError("n_levels must be at least 1");
    const BrownianHierarchy h(seed, horizon, n_levels - 1, stream);
    std::vector<GridPath> out;
    out.reserve(n_levels);
    for (unsigned k = 0; k < n_levels; ++k) out.push_back(h.level(k));
    return out;
}

unsigned dyadic_level(std::size_t intervals) {
    if (intervals == 0 || (intervals & (intervals - 1)) != 0) {
        throw UsageError("resolution " + std::to_string(intervals) + " is not a power of two");
    }
    unsigned k = 0;
    while ((std::size_t{1} << k) < intervals) ++k;
    if (k > kMaxLevel) throw UsageError("resolution above 2^30");
    return k;
}

}  // namespace skomap
