#include "skomap/variation.hpp"

#include <algorithm>
#include <cmath>

#include "skomap/brownian.hpp"
#include "skomap/cusp.hpp"
#include "skomap/errors.hpp"
#include "skomap/parallel.hpp"

namespace skomap {

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::diverging: return "diverging";
        case Verdict::plateauing: return "plateauing";
        case Verdict::inconclusive: return "inconclusive";
        case Verdict::unclassified: return "unclassified";
    }
    return "?";
}

Verdict classify_trend(double ratio, const TrendThresholds& t) {
    if (!std::isfinite(ratio)) return Verdict::inconclusive;
    if (ratio >= t.diverging) return Verdict::diverging;
    if (ratio <= t.plateauing) return Verdict::plateauing;
    return Verdict::inconclusive;
}

VariationSeries summarize_series(double parameter, const std::vector<std::size_t>& resolutions,
                                 const std::vector<std::vector<double>>& table, const std::vector<bool>& include,
                                 const TrendThresholds& thresholds, bool classify) {
    VariationSeries out;
    out.parameter = parameter;
    out.resolutions = resolutions;
    out.seeds = table.size();
    const std::size_t nr = resolutions.size();
    std::vector<double> sum(nr, 0.0), sq(nr, 0.0);
    for (std::size_t i = 0; i < table.size(); ++i) {
        if (!include[i]) {
            ++out.skipped;
            continue;
        }
        ++out.included;
        bool dropped = false;
        for (std::size_t r = 0; r < nr; ++r) {
            sum[r] += table[i][r];
            sq[r] += table[i][r] * table[i][r];
            if (r > 0 && table[i][r] < table[i][r - 1] - 1e-9) dropped = true;
        }
        if (dropped) ++out.monotone_violations;
    }
    const double n = static_cast<double>(out.included);
    for (std::size_t r = 0; r < nr; ++r) {
        const double mean = out.included ? sum[r] / n : NAN;
        const double var = out.included > 1 ? std::max(0.0, (sq[r] - n * mean * mean) / (n - 1.0)) : NAN;
        out.means.push_back(mean);
        out.stddevs.push_back(std::sqrt(var));
        if (r > 0) out.log2_ratios.push_back(std::log2(mean / out.means[r - 1]));
    }
    if (nr >= 2) out.final_ratio = out.means[nr - 1] / out.means[nr - 2];
    out.verdict = classify ? classify_trend(out.final_ratio, thresholds) : Verdict::unclassified;
    return out;
}

void validate(const CuspExperiment& e) {
    e.spec.validate();
    if (e.alphas.empty()) throw UsageError("alphas must not be empty");
    for (double a : e.alphas) {
        if (!(a > 0.0) || !std::isfinite(a)) throw UsageError("alpha values must be positive");
    }
    if (e.resolutions.size() < 2) throw UsageError("need at least two resolutions");
    for (std::size_t i = 0; i < e.resolutions.size(); ++i) {
        dyadic_level(e.resolutions[i]);
        if (i > 0 && e.resolutions[i] <= e.resolutions[i - 1]) throw UsageError("resolutions must increase");
    }
    if (e.seeds.size() < 10) throw UsageError("need at least 10 seeds");
    if (!(e.thresholds.plateauing < e.thresholds.diverging)) throw UsageError("plateauing threshold must be below diverging");
}

VariationReport variation_experiment(const CuspExperiment& e, std::size_t threads) {
    validate(e);
    const std::size_t na = e.alphas.size();
    const std::size_t ns = e.seeds.size();
    const std::size_t nr = e.resolutions.size();
    const unsigned top = dyadic_level(e.resolutions.back());
    const double horizon = e.spec.tau;

    std::vector<std::vector<double>> values(na * ns, std::vector<double>(nr));
    parallel_for(na * ns, threads, [&](std::size_t task) {
        const std::size_t a = task / ns;
        const std::size_t s = task % ns;
        BoundarySpec spec = e.spec;
        spec.alpha = e.alphas[a];
        const BrownianHierarchy h(e.seeds[s], horizon, top);
        for (std::size_t r = 0; r < nr; ++r) {
            const auto path = rbm_from(h.level(dyadic_level(e.resolutions[r])), e.x0, spec);
            values[task][r] = variation(path.Y());
        }
    });

    VariationReport rep;
    rep.experiment = "cusp";
    rep.thresholds = e.thresholds;
    for (std::size_t a = 0; a < na; ++a) {
        std::vector<std::vector<double>> table(values.begin() + static_cast<std::ptrdiff_t>(a * ns),
                                               values.begin() + static_cast<std::ptrdiff_t>((a + 1) * ns));
        rep.series.push_back(summarize_series(e.alphas[a], e.resolutions, table, std::vector<bool>(ns, true),
                                              e.thresholds));
        for (std::size_t s = 0; s < ns; ++s) {
            for (std::size_t r = 0; r < nr; ++r) {
                VariationRow row;
                row.parameter = e.alphas[a];
                row.seed = e.seeds[s];
                row.resolution = e.resolutions[r];
                row.variation = table[s][r];
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

}  // namespace skomap
