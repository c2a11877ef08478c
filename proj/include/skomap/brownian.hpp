#pragma once

// Brownian paths on dyadic grids built by midpoint (Brownian-bridge)
// refinement. Level k has 2^k intervals on [0, T]. Every normal draw is keyed
// by (seed, stream, level, index), so the level-k values are the same no
// matter how deep the hierarchy is generated, and each level is the
// restriction of every finer one.

#include <cstdint>
#include <vector>

#include "skomap/path.hpp"

namespace skomap {

class BrownianHierarchy {
public:
    // Generates levels 0..max_level. `stream` separates independent
    // motions driven by the same seed.
    BrownianHierarchy(std::uint64_t seed, double horizon, unsigned max_level, std::uint64_t stream = 0);

    unsigned max_level() const { return max_level_; }
    double horizon() const { return horizon_; }
    // Restriction to level k (k <= max_level).
    GridPath level(unsigned k) const;
    std::span<const double> finest() const { return values_; }

private:
    double horizon_;
    unsigned max_level_;
    std::vector<double> values_;
};

// Levels 0 .. n_levels-1 as separate paths.
std::vector<GridPath> brownian_path(std::uint64_t seed, double horizon, unsigned n_levels, std::uint64_t stream = 0);

// Number of intervals for a resolution that must be a power of two.
unsigned dyadic_level(std::size_t intervals);

}  // namespace skomap
