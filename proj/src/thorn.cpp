#include "skomap/thorn.hpp"

#include <algorithm>
#include <cmath>

#include "skomap/brownian.hpp"
#include "skomap/errors.hpp"
#include "skomap/parallel.hpp"

namespace skomap {

void ThornSpec::validate() const {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw UsageError("gamma must be positive");
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw UsageError("epsilon must be positive");
    if (!(slope_cap >= 0.0) || !std::isfinite(slope_cap)) throw UsageError("slope_cap must be non-negative");
    if (!(base_width >= 0.0) || !std::isfinite(base_width)) throw UsageError("base_width must be non-negative");
    if (lipschitz && gamma < 1.0) throw UsageError("y^gamma is not Lipschitz at 0 for gamma < 1");
}

double ThornSpec::width(double y) const {
    if (!(y >= 0.0)) throw DomainError("thorn profile evaluated below y = 0");
    if (y <= epsilon) return base_width + std::pow(y, gamma);
    const double slope = std::min(slope_cap, gamma * std::pow(epsilon, gamma - 1.0));
    return base_width + std::pow(epsilon, gamma) + slope * (y - epsilon);
}

ThornPath thorn_from(const GridPath& B1, const GridPath& B2, const ThornSpec& spec, double z2_start) {
    spec.validate();
    require_same_grid(B1, B2, "thorn_from");
    if (!(z2_start >= 0.0)) throw UsageError("z2_start must be non-negative");
    GridPath z2 = gamma_zero(B2 + z2_start);
    std::vector<double> lo(z2.size()), hi(z2.size());
    for (std::size_t k = 0; k < z2.size(); ++k) {
        const double w = spec.width(z2[k]);
        lo[k] = -0.5 * w;
        hi[k] = 0.5 * w;
    }
    const BoundaryPair bounds(GridPath(z2.grid(), std::move(lo)), GridPath(z2.grid(), std::move(hi)));
    EsmSolution sol = esm_solve(B1, bounds);
    return ThornPath{B1, B2, std::move(z2), std::move(sol)};
}

ThornPath simulate_thorn(const ThornSpec& spec, std::uint64_t seed, double horizon, std::size_t resolution) {
    const unsigned level = dyadic_level(resolution);
    const BrownianHierarchy h1(seed, horizon, level, 1);
    const BrownianHierarchy h2(seed, horizon, level, 2);
    return thorn_from(h1.level(level), h2.level(level), spec);
}

std::vector<ExcursionRecord> detect_excursions(const GridPath& z2, double threshold) {
    if (!(threshold > 0.0)) throw UsageError("excursion threshold must be positive");
    std::vector<ExcursionRecord> out;
    const std::size_t n = z2.size();
    std::size_t k = 0;
    while (k < n) {
        if (!(z2[k] > threshold)) {
            ++k;
            continue;
        }
        const std::size_t run = k;
        double height = z2[k];
        while (k < n && z2[k] > threshold) height = std::max(height, z2[k++]);
        if (run == 0 || k == n) continue;
        ExcursionRecord rec;
        rec.first = run - 1;
        rec.last = k;
        rec.start = z2.grid()[rec.first];
        rec.end = z2.grid()[rec.last];
        rec.height = height;
        out.push_back(rec);
    }
    return out;
}

std::vector<ExcursionRecord> detect_excursions(const GridPath& z2, const GridPath& y, double threshold) {
    require_same_grid(z2, y, "detect_excursions");
    auto out = detect_excursions(z2, threshold);
    for (auto& rec : out) rec.variation = variation_between(y, rec.first, rec.last);
    return out;
}

double excursion_threshold(const TimeGrid& grid, double scale) {
    double step = 0.0;
    for (std::size_t k = 1; k < grid.size(); ++k) step = std::max(step, grid[k] - grid[k - 1]);
    return scale * std::sqrt(step);
}

void validate(const ThornExperiment& e) {
    if (e.specs.empty()) throw UsageError("specs must not be empty");
    for (std::size_t i = 0; i < e.specs.size(); ++i) {
        e.specs[i].validate();
        for (std::size_t j = 0; j < i; ++j) {
            if (e.specs[j].gamma == e.specs[i].gamma) throw UsageError("gamma values must be distinct");
        }
    }
    if (e.resolutions.size() < 2) throw UsageError("need at least two resolutions");
    for (std::size_t i = 0; i < e.resolutions.size(); ++i) {
        dyadic_level(e.resolutions[i]);
        if (i > 0 && e.resolutions[i] <= e.resolutions[i - 1]) throw UsageError("resolutions must increase");
    }
    if (e.seeds.size() < 10) throw UsageError("need at least 10 seeds");
    if (!(e.horizon > 0.0) || !std::isfinite(e.horizon)) throw UsageError("horizon must be positive");
    if (!(e.threshold_scale > 0.0)) throw UsageError("threshold_scale must be positive");
    if (!(e.thresholds.plateauing < e.thresholds.diverging)) throw UsageError("plateauing threshold must be below diverging");
}

namespace {

struct Cell {
    double variation = NAN;
    double start = NAN;
    double end = NAN;
    double height = NAN;
};

bool excursion_claim(const ThornSpec& s) { return s.gamma > 2.0 || (s.gamma < 2.0 && s.lipschitz); }

template <class Measure>
VariationReport run(const ThornExperiment& e, std::size_t threads, const char* name, bool per_excursion,
                    Measure measure) {
    validate(e);
    const std::size_t ns = e.seeds.size();
    const std::size_t nr = e.resolutions.size();
    const unsigned top = dyadic_level(e.resolutions.back());

    std::vector<std::vector<Cell>> cells(e.specs.size() * ns, std::vector<Cell>(nr));
    std::vector<char> ok(cells.size(), 1);
    parallel_for(cells.size(), threads, [&](std::size_t task) {
        const ThornSpec& spec = e.specs[task / ns];
        const std::uint64_t seed = e.seeds[task % ns];
        const BrownianHierarchy h1(seed, e.horizon, top, 1);
        const BrownianHierarchy h2(seed, e.horizon, top, 2);
        ok[task] = measure(spec, h1, h2, cells[task]) ? 1 : 0;
    });

    VariationReport rep;
    rep.experiment = name;
    rep.thresholds = e.thresholds;
    for (std::size_t i = 0; i < e.specs.size(); ++i) {
        std::vector<std::vector<double>> table(ns, std::vector<double>(nr));
        std::vector<bool> include(ns);
        for (std::size_t s = 0; s < ns; ++s) {
            include[s] = ok[i * ns + s] != 0;
            for (std::size_t r = 0; r < nr; ++r) table[s][r] = cells[i * ns + s][r].variation;
        }
        const bool classify = !per_excursion || excursion_claim(e.specs[i]);
        rep.series.push_back(summarize_series(e.specs[i].gamma, e.resolutions, table, include, e.thresholds, classify));
        for (std::size_t s = 0; s < ns; ++s) {
            if (!include[s]) continue;
            for (std::size_t r = 0; r < nr; ++r) {
                const Cell& c = cells[i * ns + s][r];
                VariationRow row;
                row.parameter = e.specs[i].gamma;
                row.seed = e.seeds[s];
                row.resolution = e.resolutions[r];
                row.variation = c.variation;
                row.start = c.start;
                row.end = c.end;
                row.height = c.height;
                rep.rows.push_back(row);
            }
        }
    }
    std::stable_sort(rep.rows.begin(), rep.rows.end(), [](const VariationRow& x, const VariationRow& y) {
        if (x.parameter != y.parameter) return x.parameter < y.parameter;
        if (x.seed != y.seed) return x.seed < y.seed;
        return x.resolution < y.resolution;
    });
    return rep;
}

}  // namespace

VariationReport excursion_variation_experiment(const ThornExperiment& e, std::size_t threads) {
    const double scale = e.threshold_scale;
    return run(e, threads, "thorn_excursion", true,
               [&](const ThornSpec& spec, const BrownianHierarchy& h1, const BrownianHierarchy& h2,
                   std::vector<Cell>& out) {
                   const std::size_t nr = e.resolutions.size();
                   const unsigned top = dyadic_level(e.resolutions.back());
                   const ThornPath fine = thorn_from(h1.level(top), h2.level(top), spec);
                   const auto exc = detect_excursions(fine.Z2, fine.Y(), excursion_threshold(fine.Z2.grid(), scale));
                   const ExcursionRecord* pick = nullptr;
                   for (const auto& x : exc) {
                       if (!pick || x.height > pick->height) pick = &x;
                   }
                   if (!pick) return false;
                   out[nr - 1] = Cell{pick->variation, pick->start, pick->end, pick->height};
                   for (std::size_t r = 0; r + 1 < nr; ++r) {
                       const unsigned lev = dyadic_level(e.resolutions[r]);
                       const std::size_t factor = std::size_t{1} << (top - lev);
                       const std::size_t first = (pick->first + factor - 1) / factor;
                       const std::size_t last = pick->last / factor;
                       if (last <= first) return false;
                       const ThornPath p = thorn_from(h1.level(lev), h2.level(lev), spec);
                       double height = 0.0;
                       for (std::size_t k = first; k <= last; ++k) height = std::max(height, p.Z2[k]);
                       out[r] = Cell{variation_between(p.Y(), first, last), p.Z2.grid()[first], p.Z2.grid()[last], height};
                   }
                   return true;
               });
}

VariationReport semimartingale_experiment(const ThornExperiment& e, std::size_t threads) {
    return run(e, threads, "thorn_full_horizon", false,
               [&](const ThornSpec& spec, const BrownianHierarchy& h1, const BrownianHierarchy& h2,
                   std::vector<Cell>& out) {
                   for (std::size_t r = 0; r < e.resolutions.size(); ++r) {
                       const unsigned lev = dyadic_level(e.resolutions[r]);
                       const ThornPath p = thorn_from(h1.level(lev), h2.level(lev), spec);
                       out[r].variation = variation(p.Y());
                   }
                   return true;
               });
}

}  // namespace skomap
