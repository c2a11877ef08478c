#include "skomap/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "skomap/errors.hpp"

namespace skomap {

namespace {

struct KindEntry {
    BoundaryKind kind;
    const char* name;
};

constexpr KindEntry kKinds[] = {
    {BoundaryKind::symmetric_cusp, "symmetric_cusp"},
    {BoundaryKind::closing_cusp, "closing_cusp"},
    {BoundaryKind::opening_cusp, "opening_cusp"},
    {BoundaryKind::constant_gap, "constant_gap"},
    {BoundaryKind::custom, "custom"},
};

constexpr double kInf = std::numeric_limits<double>::infinity();

// Linear interpolation in the knot table; flat outside.
double knot_value(const std::vector<Knot>& knots, double t, bool upper) {
    auto value = [upper](const Knot& k) { return upper ? k.upper : k.lower; };
    if (t <= knots.front().t) return value(knots.front());
    if (t >= knots.back().t) return value(knots.back());
    const auto it = std::upper_bound(knots.begin(), knots.end(), t, [](double x, const Knot& k) { return x < k.t; });
    const Knot& b = *it;
    const Knot& a = *(it - 1);
    const double w = (t - a.t) / (b.t - a.t);
    return value(a) + w * (value(b) - value(a));
}

}  // namespace

BoundaryKind parse_boundary_kind(std::string_view name) {
    for (const auto& e : kKinds) {
        if (name == e.name) return e.kind;
    }
    throw UsageError("unknown boundary kind '" + std::string(name) + "'");
}

std::string boundary_kind_name(BoundaryKind kind) {
    for (const auto& e : kKinds) {
        if (e.kind == kind) return e.name;
    }
    return "?";
}

BoundarySpec BoundarySpec::symmetric(double alpha, double tau) {
    BoundarySpec s;
    s.kind = BoundaryKind::symmetric_cusp;
    s.alpha = alpha;
    s.tau = tau;
    return s;
}

BoundarySpec BoundarySpec::closing(double alpha, double tau) {
    BoundarySpec s = symmetric(alpha, tau);
    s.kind = BoundaryKind::closing_cusp;
    return s;
}

BoundarySpec BoundarySpec::opening(double alpha, double tau) {
    BoundarySpec s = symmetric(alpha, tau);
    s.kind = BoundaryKind::opening_cusp;
    return s;
}

BoundarySpec BoundarySpec::constant(double gap, double horizon) {
    BoundarySpec s;
    s.kind = BoundaryKind::constant_gap;
    s.gap = gap;
    s.tau = horizon;
    return s;
}

double BoundarySpec::effective_scale() const {
    if (scale) return *scale;
    return kind == BoundaryKind::symmetric_cusp ? 2.0 : 1.0;
}

double BoundarySpec::effective_cap() const {
    if (cap) return *cap;
    return kind == BoundaryKind::closing_cusp ? 0.5 : kInf;
}

void BoundarySpec::validate() const {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw UsageError("tau must be positive and finite");
    if (!std::isfinite(offset)) throw UsageError("offset must be finite");
    switch (kind) {
        case BoundaryKind::constant_gap:
            if (!(gap > 0.0) || !std::isfinite(gap)) throw UsageError("gap must be positive and finite");
            break;
        case BoundaryKind::custom:
            if (knots.empty()) throw UsageError("custom boundary needs at least one knot");
            for (std::size_t i = 0; i < knots.size(); ++i) {
                const Knot& k = knots[i];
                if (!std::isfinite(k.t) || std::isnan(k.lower) || std::isnan(k.upper)) {
                    throw UsageError("custom knot " + std::to_string(i) + " has a non-finite time or NaN value");
                }
                if (k.lower > k.upper) throw UsageError("custom knot " + std::to_string(i) + " has lower > upper");
                if (i > 0 && !(k.t > knots[i - 1].t)) throw UsageError("custom knot times must increase");
            }
            break;
        default:
            if (!(alpha > 0.0) || !std::isfinite(alpha)) throw UsageError("alpha must be positive and finite");
            if (!(effective_scale() > 0.0) || !std::isfinite(effective_scale())) throw UsageError("scale must be positive");
            if (!(effective_cap() > 0.0)) throw UsageError("cap must be positive");
    }
}

double BoundarySpec::width(double t) const {
    const double s = effective_scale();
    const double c = effective_cap();
    switch (kind) {
        case BoundaryKind::symmetric_cusp:
            if (t <= 0.0 || t >= tau) return 0.0;
            return s * std::min(c, std::pow(std::min(t, tau - t), alpha));
        case BoundaryKind::closing_cusp:
            if (t >= tau) return 0.0;
            return s * std::min(c, std::pow(tau - t, alpha));
        case BoundaryKind::opening_cusp:
            if (t <= 0.0) return 0.0;
            return s * std::min(c, std::pow(t, alpha));
        case BoundaryKind::constant_gap: return gap;
        case BoundaryKind::custom: return upper(t) - lower(t);
    }
    return 0.0;
}

double BoundarySpec::lower(double t) const {
    if (kind == BoundaryKind::custom) return knot_value(knots, t, false);
    return offset - 0.5 * width(t);
}

double BoundarySpec::upper(double t) const {
    if (kind == BoundaryKind::custom) return knot_value(knots, t, true);
    return offset + 0.5 * width(t);
}

double BoundarySpec::sup_lower(double t1, double t2) const {
    double v = std::max(lower(t1), lower(t2));
    if (kind == BoundaryKind::custom) {
        for (const Knot& k : knots) {
            if (k.t > t1 && k.t < t2) v = std::max(v, k.lower);
        }
    }
    return v;
}

double BoundarySpec::inf_upper(double t1, double t2) const {
    double v = std::min(upper(t1), upper(t2));
    if (kind == BoundaryKind::custom) {
        for (const Knot& k : knots) {
            if (k.t > t1 && k.t < t2) v = std::min(v, k.upper);
        }
    }
    return v;
}

BoundaryPair BoundarySpec::on_grid(const TimeGrid& grid) const {
    std::vector<double> l(grid.size()), r(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        l[k] = lower(grid[k]);
        r[k] = upper(grid[k]);
    }
    return BoundaryPair(GridPath(grid, std::move(l)), GridPath(grid, std::move(r)));
}

}  // namespace skomap
