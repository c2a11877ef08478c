#pragma once

// Random piecewise-constant problem instances for the verification suites.
// psi has N(0, 1) increments; grids have 16-256 points; boundary gaps are
// drawn from [0.1, 2] unless the options say otherwise.

#include <cstdint>

#include "skomap/path.hpp"

namespace skomap {

struct InstanceOptions {
    std::size_t min_points = 16;
    std::size_t max_points = 256;
    double min_gap = 0.1;
    double max_gap = 2.0;
    // Probability that a whole side is infinite (one-sided problem).
    double infinite_upper_prob = 0.0;
    double infinite_lower_prob = 0.0;
    // Per-point probability of a pinch (lower == upper).
    double pinch_prob = 0.0;
    // Round every value to a multiple of 2^-12 so that sums and differences
    // of instance values are exact in double precision.
    bool dyadic = false;
};

struct EsmInstance {
    GridPath psi;
    BoundaryPair bounds;
};

EsmInstance random_instance(std::uint64_t seed, const InstanceOptions& options = {});

// Options for the oracle suite: mixes one-sided and pinched instances.
InstanceOptions oracle_options();

// Rounds to the nearest multiple of 2^-12.
double to_dyadic(double v);

}  // namespace skomap
