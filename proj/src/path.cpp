#include "skomap/path.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "skomap/kernels.hpp"

namespace skomap {

namespace {

std::string time_str(double t) {
    std::ostringstream os;
    os.precision(17);
    os << t;
    return os.str();
}

GridPath combine(const GridPath& a, const GridPath& b, double sign) {
    require_same_grid(a, b, "path arithmetic");
    std::vector<double> out(a.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = a[k] + sign * b[k];
    return GridPath(a.grid(), std::move(out));
}

}  // namespace

TimeGrid::TimeGrid(std::vector<double> points) {
    if (points.size() < 2) throw DomainError("time grid needs at least 2 points");
    if (points.front() != 0.0) throw DomainError("time grid must start at 0");
    for (std::size_t k = 0; k < points.size(); ++k) {
        if (!std::isfinite(points[k])) throw DomainError("time grid points must be finite");
        if (k > 0 && !(points[k] > points[k - 1])) {
            throw DomainError("time grid points must be strictly increasing (at t=" + time_str(points[k]) + ")");
        }
    }
    points_ = std::make_shared<const std::vector<double>>(std::move(points));
}

TimeGrid TimeGrid::uniform(double horizon, std::size_t intervals) {
    if (intervals < 1) throw DomainError("uniform grid needs at least one interval");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("uniform grid horizon must be positive");
    std::vector<double> pts(intervals + 1);
    for (std::size_t k = 0; k <= intervals; ++k) {
        pts[k] = horizon * static_cast<double>(k) / static_cast<double>(intervals);
    }
    pts.back() = horizon;
    return TimeGrid(std::move(pts));
}

std::size_t TimeGrid::index_at(double t) const {
    const auto& pts = *points_;
    if (!(t >= 0.0) || t > pts.back()) {
        throw DomainError("time " + time_str(t) + " outside [0, " + time_str(pts.back()) + "]");
    }
    const auto it = std::upper_bound(pts.begin(), pts.end(), t);
    return static_cast<std::size_t>(it - pts.begin()) - 1;
}

bool TimeGrid::same_as(const TimeGrid& other) const {
    return points_ == other.points_ || *points_ == *other.points_;
}

GridPath::GridPath(TimeGrid grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size()) throw UsageError("path length does not match its grid");
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (std::isnan(values_[k])) throw DomainError("NaN path value at t=" + time_str(grid_[k]));
    }
}

GridPath GridPath::constant(const TimeGrid& grid, double value) {
    return GridPath(grid, std::vector<double>(grid.size(), value));
}

bool GridPath::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double eval(const GridPath& path, double t) { return path[path.grid().index_at(t)]; }

double variation_between(const GridPath& path, std::size_t first, std::size_t last) {
    if (first > last || last >= path.size()) throw DomainError("variation index window out of range");
    const auto window = path.values().subspan(first, last - first + 1);
    for (double v : window) {
        if (!std::isfinite(v)) throw DomainError("variation of a path with infinite values");
    }
    return kernels::abs_increment_sum(window);
}

double variation(const GridPath& path, double t1, double t2) {
    if (t1 > t2) throw DomainError("variation window has t1 > t2");
    const std::size_t i1 = path.grid().index_at(t1);
    const std::size_t i2 = path.grid().index_at(t2);
    return variation_between(path, i1, i2);
}

double variation(const GridPath& path) { return variation_between(path, 0, path.size() - 1); }

TimeGrid refine(const TimeGrid& grid, std::size_t factor) {
    if (factor < 1) throw DomainError("refinement factor must be >= 1");
    if (factor == 1) return grid;
    const auto pts = grid.points();
    std::vector<double> out;
    out.reserve((pts.size() - 1) * factor + 1);
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        const double a = pts[k];
        const double h = pts[k + 1] - a;
        out.push_back(a);
        for (std::size_t j = 1; j < factor; ++j) {
            out.push_back(a + h * static_cast<double>(j) / static_cast<double>(factor));
        }
    }
    out.push_back(pts.back());
    return TimeGrid(std::move(out));
}

GridPath refine(const GridPath& path, std::size_t factor) {
    if (factor < 1) throw DomainError("refinement factor must be >= 1");
    if (factor == 1) return path;
    std::vector<double> out;
    out.reserve((path.size() - 1) * factor + 1);
    for (std::size_t k = 0; k + 1 < path.size(); ++k) out.insert(out.end(), factor, path[k]);
    out.push_back(path.back());
    return GridPath(refine(path.grid(), factor), std::move(out));
}

void require_same_grid(const GridPath& a, const GridPath& b, const char* what) {
    if (!a.grid().same_as(b.grid())) throw UsageError(std::string(what) + ": paths are on different grids");
}

double sup_distance(const GridPath& a, const GridPath& b, double T) {
    require_same_grid(a, b, "sup_distance");
    const std::size_t last = a.grid().index_at(T);
    const auto va = a.values().first(last + 1);
    const auto vb = b.values().first(last + 1);
    for (std::size_t k = 0; k <= last; ++k) {
        if (!std::isfinite(va[k]) || !std::isfinite(vb[k])) throw DomainError("sup_distance of infinite values");
    }
    return kernels::max_abs_diff(va, vb);
}

GridPath resample(const GridPath& path, const TimeGrid& grid) {
    if (grid.same_as(path.grid())) return GridPath(grid, std::vector<double>(path.values().begin(), path.values().end()));
    std::vector<double> out(grid.size());
    const auto src = path.grid().points();
    std::size_t j = 0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double t = grid[k];
        if (t > path.grid().horizon()) throw DomainError("resample target extends past the path horizon");
        while (j + 1 < src.size() && src[j + 1] <= t) ++j;
        out[k] = path[j];
    }
    return GridPath(grid, std::move(out));
}

TimeGrid merge_grids(const TimeGrid& a, const TimeGrid& b) {
    if (a.same_as(b)) return a;
    if (a.horizon() != b.horizon()) throw UsageError("cannot merge grids with different horizons");
    std::vector<double> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.points().begin(), a.points().end(), b.points().begin(), b.points().end(),
                   std::back_inserter(out));
    return TimeGrid(std::move(out));
}

GridPath operator+(const GridPath& a, const GridPath& b) { return combine(a, b, 1.0); }
GridPath operator-(const GridPath& a, const GridPath& b) { return combine(a, b, -1.0); }

GridPath operator-(const GridPath& a) {
    std::vector<double> out(a.values().begin(), a.values().end());
    for (double& v : out) v = -v;
    return GridPath(a.grid(), std::move(out));
}

GridPath operator+(const GridPath& a, double c) {
    std::vector<double> out(a.values().begin(), a.values().end());
    for (double& v : out) v += c;
    return GridPath(a.grid(), std::move(out));
}

BoundaryPair::BoundaryPair(GridPath lower, GridPath upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
    require_same_grid(lower_, upper_, "boundary pair");
    for (std::size_t k = 0; k < lower_.size(); ++k) {
        const double t = lower_.grid()[k];
        if (lower_[k] == INFINITY) throw DomainError("lower boundary is +inf at t=" + time_str(t));
        if (upper_[k] == -INFINITY) throw DomainError("upper boundary is -inf at t=" + time_str(t));
        if (lower_[k] > upper_[k]) {
            throw BoundaryOrderError("lower boundary exceeds upper boundary at t=" + time_str(t), t);
        }
    }
}

BoundaryPair BoundaryPair::constant(const TimeGrid& grid, double lower, double upper) {
    return BoundaryPair(GridPath::constant(grid, lower), GridPath::constant(grid, upper));
}

double BoundaryPair::min_gap() const {
    double gap = INFINITY;
    for (std::size_t k = 0; k < size(); ++k) {
        const double g = upper_[k] - lower_[k];
        gap = std::min(gap, g);
    }
    return gap;
}

AlignedInput align(const GridPath& psi, const GridPath& lower, const GridPath& upper) {
    const TimeGrid grid = merge_grids(merge_grids(psi.grid(), lower.grid()), upper.grid());
    return AlignedInput{resample(psi, grid), BoundaryPair(resample(lower, grid), resample(upper, grid))};
}

}  // namespace skomap
