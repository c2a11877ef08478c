#pragma once

// Boundary families with power-law cusps. Every analytic kind is described by
// a width f(t) = r(t) - l(t) around a constant centre:
//     l(t) = offset - f(t)/2,   r(t) = offset + f(t)/2.
//
//   symmetric_cusp  f = scale * min(t, tau - t)^alpha      (scale 2: -l = r = t^alpha)
//   closing_cusp    f = scale * min(cap, (tau - t)^alpha)  (cap 0.5, so f(0)^2 < tau)
//   opening_cusp    f = scale * min(cap, t^alpha)
//   constant_gap    f = gap
//
// Cusp widths are 0 for t >= tau. `custom` uses piecewise-linear knots for l
// and r, held constant outside the knot range.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "skomap/path.hpp"

namespace skomap {

enum class BoundaryKind { symmetric_cusp, closing_cusp, opening_cusp, constant_gap, custom };

BoundaryKind parse_boundary_kind(std::string_view name);  // UsageError if unknown
std::string boundary_kind_name(BoundaryKind kind);

struct Knot {
    double t;
    double lower;
    double upper;
};

struct BoundarySpec {
    BoundaryKind kind = BoundaryKind::symmetric_cusp;
    double alpha = 1.0;
    double tau = 1.0;
    // Unset means the per-kind default above.
    std::optional<double> scale;
    std::optional<double> cap;
    double gap = 1.0;
    double offset = 0.0;
    std::vector<Knot> knots;

    static BoundarySpec symmetric(double alpha, double tau = 1.0);
    static BoundarySpec closing(double alpha, double tau = 1.0);
    static BoundarySpec opening(double alpha, double tau = 1.0);
    static BoundarySpec constant(double gap, double horizon = 1.0);

    // UsageError on invalid parameters.
    void validate() const;

    double width(double t) const;
    double lower(double t) const;
    double upper(double t) const;

    // sup of l and inf of r over [t1, t2]. All analytic widths are
    // quasi-concave on [0, tau] so the extremes sit at the endpoints; custom
    // knots inside the interval are also examined.
    double sup_lower(double t1, double t2) const;
    double inf_upper(double t1, double t2) const;

    // Discretization of (l, r) on a grid.
    BoundaryPair on_grid(const TimeGrid& grid) const;

    double effective_scale() const;
    double effective_cap() const;
};

}  // namespace skomap
