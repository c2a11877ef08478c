#pragma once

// Two-dimensional reflected Brownian motion in a thorn
// D = {(x, y): y >= 0, L(y) <= x <= R(y)} with horizontal reflection on the
// sides: Z2 is the one-sided map of B2 at 0 and Z1 is the two-sided map of B1
// between l(t) = L(Z2(t)) and r(t) = R(Z2(t)).

#include <cstdint>
#include <optional>
#include <vector>

#include "skomap/esm.hpp"
#include "skomap/variation.hpp"

namespace skomap {

// Symmetric profile L = -w/2, R = w/2 with
//   w(y) = base_width + y^gamma                                   y <= epsilon
//   w(y) = base_width + epsilon^gamma + s (y - epsilon)            y >  epsilon
// where s = min(slope_cap, gamma epsilon^(gamma-1)).
struct ThornSpec {
    double gamma = 1.0;
    double epsilon = 1.0;
    double slope_cap = 1.0;
    // Zero for a true thorn (L(0) = R(0) = 0); positive widens the tip.
    double base_width = 0.0;
    // Asserts L and R are Lipschitz; rejected for gamma < 1.
    bool lipschitz = true;

    void validate() const;
    double width(double y) const;
    double lower(double y) const { return -0.5 * width(y); }
    double upper(double y) const { return 0.5 * width(y); }
};

struct ThornPath {
    GridPath B1;
    GridPath B2;
    GridPath Z2;
    EsmSolution sol;  // sol.phi is Z1, sol.eta is Y
    const GridPath& Z1() const { return sol.phi; }
    const GridPath& Y() const { return sol.eta; }
};

// Z1(0) = 0; Z2 starts at z2_start >= 0.
ThornPath thorn_from(const GridPath& B1, const GridPath& B2, const ThornSpec& spec, double z2_start = 0.0);
// B1 and B2 come from streams 1 and 2 of the bridge hierarchy for `seed`.
ThornPath simulate_thorn(const ThornSpec& spec, std::uint64_t seed, double horizon, std::size_t resolution);

struct ExcursionRecord {
    std::size_t first = 0;  // grid index with Z2 <= threshold
    std::size_t last = 0;   // grid index with Z2 <= threshold
    double start = 0.0;
    double end = 0.0;
    double height = 0.0;
    double variation = NAN;  // variation of Y over [start, end]
};

// Maximal runs of grid points with Z2 > threshold, widened by one point on
// each side. Runs touching either end of the path are incomplete and
// dropped. UsageError unless threshold > 0.
std::vector<ExcursionRecord> detect_excursions(const GridPath& z2, double threshold);
std::vector<ExcursionRecord> detect_excursions(const GridPath& z2, const GridPath& y, double threshold);

// scale * sqrt(largest grid step).
double excursion_threshold(const TimeGrid& grid, double scale = 2.0);

struct ThornExperiment {
    std::vector<ThornSpec> specs;  // gammas must be distinct
    std::vector<std::size_t> resolutions;
    std::vector<std::uint64_t> seeds;
    double horizon = 1.0;
    double threshold_scale = 2.0;
    TrendThresholds thresholds;
};

void validate(const ThornExperiment& e);

// Largest complete excursion of each path, tracked across resolutions. It is
// detected once at the finest resolution (highest complete excursion); each
// coarser resolution measures Y over the same window shrunk to its own grid.
// Seeds with no excursion, or one shorter than a coarse step, are skipped.
// gamma == 2, and gamma < 2 without the Lipschitz flag, are unclassified.
VariationReport excursion_variation_experiment(const ThornExperiment& e, std::size_t threads = 1);

// variation(Y) over [0, horizon] with Z(0) = 0, every spec classified.
VariationReport semimartingale_experiment(const ThornExperiment& e, std::size_t threads = 1);

}  // namespace skomap
