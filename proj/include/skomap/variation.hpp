#pragma once

// Variation-versus-resolution experiments and their trend verdicts.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "skomap/boundary.hpp"

namespace skomap {

struct TrendThresholds {
    double diverging = 1.5;   // finest-two mean ratio at or above this
    double plateauing = 1.15; // at or below this
};

enum class Verdict { diverging, plateauing, inconclusive, unclassified };
std::string verdict_name(Verdict v);
Verdict classify_trend(double ratio, const TrendThresholds& t);

// One (parameter, seed, resolution) measurement. Excursion fields are NaN
// for experiments that do not select an excursion.
struct VariationRow {
    double parameter = 0.0;
    std::uint64_t seed = 0;
    std::size_t resolution = 0;
    double variation = 0.0;
    double start = NAN;
    double end = NAN;
    double height = NAN;
};

struct VariationSeries {
    double parameter = 0.0;
    std::vector<std::size_t> resolutions;
    std::vector<double> means;
    std::vector<double> stddevs;
    std::size_t seeds = 0;     // seeds requested
    std::size_t included = 0;  // seeds that contributed at every resolution
    std::size_t skipped = 0;
    std::vector<double> log2_ratios;  // log2(mean[i+1] / mean[i])
    double final_ratio = NAN;         // mean[last] / mean[last-1]
    Verdict verdict = Verdict::inconclusive;
    // Seeds whose variation dropped by more than 1e-9 between successive
    // resolutions of the same nested path.
    std::size_t monotone_violations = 0;
};

struct VariationReport {
    std::string experiment;
    TrendThresholds thresholds;
    std::vector<VariationSeries> series;
    std::vector<VariationRow> rows;  // sorted by parameter, seed, resolution
};

// Builds a series from a seeds x resolutions table. Rows with include[i]
// false are counted as skipped. `classify` false yields Verdict::unclassified.
VariationSeries summarize_series(double parameter, const std::vector<std::size_t>& resolutions,
                                 const std::vector<std::vector<double>>& table, const std::vector<bool>& include,
                                 const TrendThresholds& thresholds, bool classify = true);

struct CuspExperiment {
    BoundarySpec spec;           // alpha is replaced by each entry of alphas
    std::vector<double> alphas;
    std::vector<std::size_t> resolutions;  // powers of two, increasing
    std::vector<std::uint64_t> seeds;
    double x0 = 0.0;
    TrendThresholds thresholds;
};

// Validates the configuration (UsageError).
void validate(const CuspExperiment& e);

// For each (alpha, seed) runs the RBM on the bridge-refined path at every
// resolution and records variation(Y) over [0, tau].
VariationReport variation_experiment(const CuspExperiment& e, std::size_t threads = 1);

}  // namespace skomap
