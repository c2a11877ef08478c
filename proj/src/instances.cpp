#include "skomap/instances.hpp"

#include <cmath>
#include <vector>

#include "skomap/random.hpp"

namespace skomap {

double to_dyadic(double v) { return std::ldexp(std::nearbyint(std::ldexp(v, 12)), -12); }

InstanceOptions oracle_options() {
    InstanceOptions o;
    o.infinite_upper_prob = 0.1;
    o.infinite_lower_prob = 0.1;
    o.pinch_prob = 0.05;
    o.min_gap = 0.0;
    return o;
}

EsmInstance random_instance(std::uint64_t seed, const InstanceOptions& o) {
    StreamRng rng(derive_key(seed, 0x1257));
    const auto n = static_cast<std::size_t>(
        rng.integer(static_cast<std::int64_t>(o.min_points), static_cast<std::int64_t>(o.max_points)));
    auto fix = [&](double v) { return o.dyadic ? to_dyadic(v) : v; };

    std::vector<double> times(n);
    times[0] = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        double step = rng.uniform(0.5, 1.5) / static_cast<double>(n);
        if (o.dyadic) step = std::max(to_dyadic(step), 0x1.0p-12);
        times[k] = times[k - 1] + step;
    }

    std::vector<double> psi(n), lower(n), upper(n);
    psi[0] = fix(rng.normal());
    double level = fix(0.5 * rng.normal());
    for (std::size_t k = 0; k < n; ++k) {
        if (k > 0) {
            psi[k] = fix(psi[k - 1] + rng.normal());
            level = fix(level + 0.5 * rng.normal());
        }
        double gap = fix(rng.uniform(o.min_gap, o.max_gap));
        if (o.pinch_prob > 0.0 && rng.chance(o.pinch_prob)) gap = 0.0;
        lower[k] = level;
        upper[k] = fix(level + gap);
    }
    if (o.infinite_upper_prob > 0.0 && rng.chance(o.infinite_upper_prob)) {
        for (double& v : upper) v = INFINITY;
    } else if (o.infinite_lower_prob > 0.0 && rng.chance(o.infinite_lower_prob)) {
        for (double& v : lower) v = -INFINITY;
    }
    TimeGrid grid(std::move(times));
    return EsmInstance{GridPath(grid, std::move(psi)),
                       BoundaryPair(GridPath(grid, std::move(lower)), GridPath(grid, std::move(upper)))};
}

}  // namespace skomap
