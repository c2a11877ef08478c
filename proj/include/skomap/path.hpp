#pragma once

// Time grids and piecewise-constant cadlag paths.
//
// A GridPath holds one value per grid point and is read with right-continuous
// step semantics: f(t) = values[k] for the largest k with points[k] <= t.
// All statements are restricted to the finite horizon [0, T] of the grid.

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "skomap/errors.hpp"

namespace skomap {

// lower(t) > upper(t) at some grid time.
class BoundaryOrderError : public DomainError {
public:
    BoundaryOrderError(const std::string& what, double time) : DomainError(what), time_(time) {}
    double time() const { return time_; }

private:
    double time_;
};

class TimeGrid {
public:
    // Throws DomainError unless points has >= 2 entries, starts at 0 and is
    // strictly increasing with finite entries.
    explicit TimeGrid(std::vector<double> points);

    // `intervals` equal steps on [0, horizon].
    static TimeGrid uniform(double horizon, std::size_t intervals);

    std::span<const double> points() const { return *points_; }
    std::size_t size() const { return points_->size(); }
    double horizon() const { return points_->back(); }
    double operator[](std::size_t k) const { return (*points_)[k]; }

    // Largest k with points[k] <= t. DomainError if t is outside [0, horizon].
    std::size_t index_at(double t) const;

    bool same_as(const TimeGrid& other) const;

private:
    std::shared_ptr<const std::vector<double>> points_;
};

class GridPath {
public:
    // Values may be +-inf (boundary paths) but never NaN.
    GridPath(TimeGrid grid, std::vector<double> values);

    static GridPath constant(const TimeGrid& grid, double value);

    const TimeGrid& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t k) const { return values_[k]; }
    double front() const { return values_.front(); }
    double back() const { return values_.back(); }

    bool all_finite() const;

private:
    TimeGrid grid_;
    std::vector<double> values_;
};

// Step evaluation. DomainError if t is outside [0, horizon].
double eval(const GridPath& path, double t);

// Total variation over [t1, t2]: sum of |jumps| at grid times in (t1, t2].
// DomainError when t1 > t2, when either time is outside the horizon, or when
// the path takes an infinite value inside the window.
double variation(const GridPath& path, double t1, double t2);
double variation(const GridPath& path);

// Same, addressed by grid indices: sum_{k=first+1}^{last} |v[k] - v[k-1]|.
double variation_between(const GridPath& path, std::size_t first, std::size_t last);

// Inserts factor-1 equally spaced points into every interval.
GridPath refine(const GridPath& path, std::size_t factor);
TimeGrid refine(const TimeGrid& grid, std::size_t factor);

// max_{points[k] <= T} |a[k] - b[k]|. UsageError on mismatched grids,
// DomainError on infinite values or T outside the horizon.
double sup_distance(const GridPath& a, const GridPath& b, double T);

// Reads `path` at every point of `grid` with step semantics. The target grid
// must lie within the path's horizon.
GridPath resample(const GridPath& path, const TimeGrid& grid);

// Sorted union of both point sets; horizons must agree.
TimeGrid merge_grids(const TimeGrid& a, const TimeGrid& b);

// Throws UsageError unless both paths live on the same grid.
void require_same_grid(const GridPath& a, const GridPath& b, const char* what);

GridPath operator+(const GridPath& a, const GridPath& b);
GridPath operator-(const GridPath& a, const GridPath& b);
GridPath operator-(const GridPath& a);
GridPath operator+(const GridPath& a, double c);

// Validated (lower, upper) on a shared grid: lower <= upper pointwise, lower
// never +inf, upper never -inf.
class BoundaryPair {
public:
    BoundaryPair(GridPath lower, GridPath upper);

    static BoundaryPair constant(const TimeGrid& grid, double lower, double upper);

    const GridPath& lower() const { return lower_; }
    const GridPath& upper() const { return upper_; }
    const TimeGrid& grid() const { return lower_.grid(); }
    std::size_t size() const { return lower_.size(); }

    // inf_t (upper - lower) over the grid (may be +inf).
    double min_gap() const;

private:
    GridPath lower_;
    GridPath upper_;
};

// Aligns psi and both boundaries onto the union of their grids.
struct AlignedInput {
    GridPath psi;
    BoundaryPair bounds;
};
AlignedInput align(const GridPath& psi, const GridPath& lower, const GridPath& upper);

}  // namespace skomap
