#pragma once

// Extended Skorokhod map on a time-dependent interval [lower(.), upper(.)].
//
// For psi, lower, upper on a shared grid, the constrained path is
//     phi = psi - Xi(psi),
//     Xi(t) = max( (psi(0) - r(0))^+ ∧ inf_{u<=t} (psi(u) - l(u)),
//                  sup_{s<=t} [ (psi(s) - r(s)) ∧ inf_{u in [s,t]} (psi(u) - l(u)) ] ).
// On piecewise-constant inputs this collapses to the forward recursion
//     Xi[k] = max(Xi[k-1], psi[k] - r[k]) ∧ (psi[k] - l[k]),   Xi[-1] = 0,
// which is the same as phi[k] = clamp(phi[k-1] + psi[k] - psi[k-1], l[k], r[k]).

#include <map>
#include <span>
#include <string>
#include <vector>

#include "skomap/path.hpp"

namespace skomap {

struct EsmSolution {
    GridPath phi;    // constrained path
    GridPath eta;    // phi - psi
    GridPath eta_l;  // non-decreasing push from the lower boundary
    GridPath eta_r;  // non-decreasing push from the upper boundary
};

struct ConditionCheck {
    std::string name;
    double worst_violation = 0.0;
    double location = 0.0;  // time of the worst violation
    std::size_t evaluated = 0;
    bool passed = true;
};

// passed iff worst_violation <= tolerance. Boolean hypotheses that fail
// contribute an infinite violation.
struct ConditionReport {
    double tolerance = 0.0;
    double worst_violation = 0.0;
    double location = 0.0;
    bool passed = true;
    std::vector<ConditionCheck> detail;
    std::map<std::string, double> metrics;
    std::vector<std::string> notes;

    explicit ConditionReport(double tol = 0.0) : tolerance(tol) {}

    // Records one check (its passed flag is derived from the tolerance) and
    // updates the aggregate.
    void add(ConditionCheck check);
    // Boolean hypothesis: violation 0 when `ok`, +inf otherwise.
    void require(const std::string& name, bool ok, double location = 0.0);
    // Folds another report's checks into this one, prefixing their names.
    void absorb(const ConditionReport& other, const std::string& prefix);
};

// Tracks the worst violation of one named check while scanning a grid.
class ViolationTracker {
public:
    explicit ViolationTracker(std::string name) { check_.name = std::move(name); }
    void observe(double violation, double time) {
        ++check_.evaluated;
        if (violation > check_.worst_violation) {
            check_.worst_violation = violation;
            check_.location = time;
        }
    }
    ConditionCheck finish() const { return check_; }

private:
    ConditionCheck check_;
};

// (x ∧ r) ∨ l. DomainError if l > r.
double project(double x, double lower, double upper);

// Xi(t) by the double sup/inf formula, O(n) for one t and O(n^2) per path.
double xi_direct(const GridPath& psi, const BoundaryPair& bounds, double t);
GridPath xi_direct_path(const GridPath& psi, const BoundaryPair& bounds);

// Xi by the forward recursion, O(n).
GridPath xi_recursive(const GridPath& psi, const BoundaryPair& bounds);

// Solves the ESP; the (eta_l, eta_r) split takes positive eta increments into
// eta_l and negative ones into eta_r, with eta(0-) = 0. SolverError if the
// clamp had to move phi = psi - Xi by more than 1e-9 (relative).
EsmSolution esm_solve(const GridPath& psi, const BoundaryPair& bounds);

// Solves several problems sharing one grid, kernels::kBatchLanes at a time.
// Bit-identical to calling esm_solve on each.
std::vector<EsmSolution> esm_solve_batch(std::span<const GridPath> psis, std::span<const BoundaryPair> bounds);

// One-sided map psi(t) + sup_{s<=t} [lower(s) - psi(s)]^+ (upper = +inf).
GridPath gamma_lower(const GridPath& psi, const GridPath& lower);

// Classical map on [0, inf): psi(t) + sup_{s<=t} [-psi(s)]^+.
GridPath gamma_zero(const GridPath& psi);

// Extended Skorokhod problem conditions at grid resolution:
//   range        phi = psi + eta, l <= phi <= r
//   up_interior  eta does not decrease at steps where phi < r - tol
//   down_interior eta does not increase at steps where phi > l + tol
// Steps where phi sits within tol of a boundary without touching it exactly
// are counted in metrics["near_touch_steps"] rather than failed.
ConditionReport verify_esp(const EsmSolution& sol, const GridPath& psi, const BoundaryPair& bounds, double tol = 1e-9);

// Complementarity of the SP: eta_l only grows where phi <= l + tol and eta_r
// only where phi >= r - tol; also checks that the split is monotone and sums
// back to eta.
ConditionReport verify_sp_complementarity(const EsmSolution& sol, const BoundaryPair& bounds, double tol = 1e-9);

namespace testing {
// Planted bug for CI sanity checks: flips the sign of Xi inside
// xi_recursive (and hence esm_solve). Process-wide; off by default.
void inject_sign_fault(bool on);
bool sign_fault_injected();
}  // namespace testing

}  // namespace skomap
