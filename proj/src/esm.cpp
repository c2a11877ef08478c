#include "skomap/esm.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>

#include "skomap/kernels.hpp"

namespace skomap {

namespace {

std::atomic<bool> g_sign_fault{false};

inline double pick_min(double a, double b) { return b < a ? b : a; }
inline double pick_max(double a, double b) { return a < b ? b : a; }

void require_solvable(const GridPath& psi, const BoundaryPair& bounds) {
    require_same_grid(psi, bounds.lower(), "ESM input");
    if (!psi.all_finite()) throw DomainError("input path psi must be finite");
}

// Splits eta increments by sign; eta(0-) = 0.
void split_eta(std::span<const double> eta, std::vector<double>& up, std::vector<double>& down) {
    up.resize(eta.size());
    down.resize(eta.size());
    double acc_up = 0.0;
    double acc_down = 0.0;
    double prev = 0.0;
    for (std::size_t k = 0; k < eta.size(); ++k) {
        const double d = eta[k] - prev;
        if (d > 0.0) acc_up += d;
        if (d < 0.0) acc_down -= d;
        up[k] = acc_up;
        down[k] = acc_down;
        prev = eta[k];
    }
}

EsmSolution assemble(const GridPath& psi, const BoundaryPair& bounds, std::span<const double> xi) {
    const std::size_t n = psi.size();
    std::vector<double> phi(n);
    kernels::clamp_residual(psi.values(), xi, bounds.lower().values(), bounds.upper().values(), phi);

    std::vector<double> eta(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double raw = psi[k] - xi[k];
        const double moved = std::fabs(phi[k] - raw);
        if (!g_sign_fault.load(std::memory_order_relaxed) && !(moved <= 1e-9 * std::max(1.0, std::fabs(raw)))) {
            throw SolverError("constrained path left [lower, upper] at t=" + std::to_string(psi.grid()[k]) +
                              " (grid or NaN corruption)");
        }
        eta[k] = phi[k] - psi[k];
    }
    std::vector<double> up;
    std::vector<double> down;
    split_eta(eta, up, down);
    const TimeGrid& grid = psi.grid();
    return EsmSolution{GridPath(grid, std::move(phi)), GridPath(grid, std::move(eta)), GridPath(grid, std::move(up)),
                       GridPath(grid, std::move(down))};
}

}  // namespace

void ConditionReport::add(ConditionCheck check) {
    check.passed = check.worst_violation <= tolerance;
    if (check.worst_violation > worst_violation) {
        worst_violation = check.worst_violation;
        location = check.location;
    }
    passed = passed && check.passed;
    detail.push_back(std::move(check));
}

void ConditionReport::require(const std::string& name, bool ok, double where) {
    ConditionCheck c;
    c.name = name;
    c.evaluated = 1;
    c.location = where;
    c.worst_violation = ok ? 0.0 : std::numeric_limits<double>::infinity();
    add(std::move(c));
}

void ConditionReport::absorb(const ConditionReport& other, const std::string& prefix) {
    for (ConditionCheck c : other.detail) {
        c.name = prefix + c.name;
        add(std::move(c));
    }
    for (const auto& [k, v] : other.metrics) metrics[prefix + k] = v;
    for (const auto& note : other.notes) notes.push_back(prefix + note);
}

namespace testing {
void inject_sign_fault(bool on) { g_sign_fault.store(on); }
bool sign_fault_injected() { return g_sign_fault.load(); }
}  // namespace testing

double project(double x, double lower, double upper) {
    if (lower > upper) throw DomainError("project: lower > upper");
    return pick_max(pick_min(x, upper), lower);
}

double xi_direct(const GridPath& psi, const BoundaryPair& bounds, double t) {
    require_solvable(psi, bounds);
    const std::size_t k = psi.grid().index_at(t);
    const auto p = psi.values();
    const auto l = bounds.lower().values();
    const auto r = bounds.upper().values();

    // sup over s of [(psi(s) - r(s)) ∧ inf_{u in [s,t]} (psi(u) - l(u))],
    // with the running inf carried from u = t backwards.
    double running_inf = std::numeric_limits<double>::infinity();
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t s = k + 1; s-- > 0;) {
        running_inf = std::min(running_inf, p[s] - l[s]);
        best = std::max(best, std::min(p[s] - r[s], running_inf));
    }
    const double initial = std::min(std::max(p[0] - r[0], 0.0), running_inf);
    return std::max(initial, best);
}

GridPath xi_direct_path(const GridPath& psi, const BoundaryPair& bounds) {
    std::vector<double> out(psi.size());
    const auto pts = psi.grid().points();
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = xi_direct(psi, bounds, pts[k]);
    return GridPath(psi.grid(), std::move(out));
}

GridPath xi_recursive(const GridPath& psi, const BoundaryPair& bounds) {
    require_solvable(psi, bounds);
    const auto p = psi.values();
    const auto l = bounds.lower().values();
    const auto r = bounds.upper().values();
    std::vector<double> xi(p.size());
    const double sign = g_sign_fault.load(std::memory_order_relaxed) ? -1.0 : 1.0;
    double prev = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        prev = pick_min(pick_max(prev, p[k] - r[k]), p[k] - l[k]);
        xi[k] = sign * prev;
    }
    return GridPath(psi.grid(), std::move(xi));
}

EsmSolution esm_solve(const GridPath& psi, const BoundaryPair& bounds) {
    const GridPath xi = xi_recursive(psi, bounds);
    return assemble(psi, bounds, xi.values());
}

std::vector<EsmSolution> esm_solve_batch(std::span<const GridPath> psis, std::span<const BoundaryPair> bounds) {
    if (psis.size() != bounds.size()) throw UsageError("esm_solve_batch: psis and bounds differ in count");
    std::vector<EsmSolution> out;
    out.reserve(psis.size());
    if (psis.empty()) return out;
    const TimeGrid& grid = psis.front().grid();
    for (std::size_t i = 0; i < psis.size(); ++i) {
        if (!psis[i].grid().same_as(grid)) throw UsageError("esm_solve_batch: problems must share one grid");
        require_solvable(psis[i], bounds[i]);
    }

    constexpr std::size_t W = kernels::kBatchLanes;
    const std::size_t n = grid.size();
    std::vector<double> p(n * W), l(n * W), r(n * W), xi(n * W), lane_xi(n);
    for (std::size_t base = 0; base < psis.size(); base += W) {
        // Lanes past the end repeat the first problem of the group.
        auto source = [&](std::size_t j) { return base + j < psis.size() ? base + j : base; };
        for (std::size_t j = 0; j < W; ++j) {
            const std::size_t i = source(j);
            const auto pv = psis[i].values();
            const auto lv = bounds[i].lower().values();
            const auto rv = bounds[i].upper().values();
            for (std::size_t k = 0; k < n; ++k) {
                p[k * W + j] = pv[k];
                l[k * W + j] = lv[k];
                r[k * W + j] = rv[k];
            }
        }
        kernels::xi_scan_batch(p, l, r, xi);
        for (std::size_t j = 0; j < W && base + j < psis.size(); ++j) {
            for (std::size_t k = 0; k < n; ++k) lane_xi[k] = xi[k * W + j];
            out.push_back(assemble(psis[base + j], bounds[base + j], lane_xi));
        }
    }
    return out;
}

GridPath gamma_lower(const GridPath& psi, const GridPath& lower) {
    require_same_grid(psi, lower, "gamma_lower");
    if (!psi.all_finite()) throw DomainError("input path psi must be finite");
    std::vector<double> out(psi.size());
    double push = 0.0;
    for (std::size_t k = 0; k < psi.size(); ++k) {
        if (lower[k] == INFINITY) throw DomainError("lower boundary is +inf");
        push = pick_max(push, lower[k] - psi[k]);
        out[k] = pick_max(psi[k] + push, lower[k]);
    }
    return GridPath(psi.grid(), std::move(out));
}

GridPath gamma_zero(const GridPath& psi) { return gamma_lower(psi, GridPath::constant(psi.grid(), 0.0)); }

ConditionReport verify_esp(const EsmSolution& sol, const GridPath& psi, const BoundaryPair& bounds, double tol) {
    ConditionReport report(tol);
    const auto pts = psi.grid().points();
    const auto phi = sol.phi.values();
    const auto eta = sol.eta.values();
    const auto l = bounds.lower().values();
    const auto r = bounds.upper().values();

    ViolationTracker decomposition("phi_equals_psi_plus_eta");
    ViolationTracker range("phi_in_range");
    ViolationTracker up("eta_nondecreasing_below_upper");
    ViolationTracker down("eta_nonincreasing_above_lower");
    std::size_t near_touch = 0;

    double prev_eta = 0.0;
    for (std::size_t k = 0; k < phi.size(); ++k) {
        const double t = pts[k];
        decomposition.observe(std::fabs(phi[k] - (psi[k] + eta[k])), t);
        range.observe(std::max({0.0, l[k] - phi[k], phi[k] - r[k]}), t);

        const double step = eta[k] - prev_eta;
        if (phi[k] < r[k] - tol) {
            up.observe(std::max(0.0, -step), t);
        } else if (phi[k] < r[k] && step < -tol) {
            ++near_touch;
        }
        if (phi[k] > l[k] + tol) {
            down.observe(std::max(0.0, step), t);
        } else if (phi[k] > l[k] && step > tol) {
            ++near_touch;
        }
        prev_eta = eta[k];
    }
    report.add(decomposition.finish());
    report.add(range.finish());
    report.add(up.finish());
    report.add(down.finish());
    report.metrics["near_touch_steps"] = static_cast<double>(near_touch);
    return report;
}

ConditionReport verify_sp_complementarity(const EsmSolution& sol, const BoundaryPair& bounds, double tol) {
    ConditionReport report(tol);
    const auto pts = sol.phi.grid().points();
    const auto phi = sol.phi.values();
    const auto eta = sol.eta.values();
    const auto el = sol.eta_l.values();
    const auto er = sol.eta_r.values();
    const auto l = bounds.lower().values();
    const auto r = bounds.upper().values();

    double mass_l = 0.0;
    double mass_r = 0.0;
    double where_l = 0.0;
    double where_r = 0.0;
    double worst_l_step = 0.0;
    double worst_r_step = 0.0;
    ViolationTracker monotone("split_nondecreasing");
    ViolationTracker sums("split_sums_to_eta");
    double prev_l = 0.0;
    double prev_r = 0.0;
    for (std::size_t k = 0; k < phi.size(); ++k) {
        const double dl = el[k] - prev_l;
        const double dr = er[k] - prev_r;
        monotone.observe(std::max({0.0, -dl, -dr}), pts[k]);
        sums.observe(std::fabs((el[k] - er[k]) - eta[k]), pts[k]);
        if (phi[k] > l[k] + tol && dl > 0.0) {
            mass_l += dl;
            if (dl > worst_l_step) {
                worst_l_step = dl;
                where_l = pts[k];
            }
        }
        if (phi[k] < r[k] - tol && dr > 0.0) {
            mass_r += dr;
            if (dr > worst_r_step) {
                worst_r_step = dr;
                where_r = pts[k];
            }
        }
        prev_l = el[k];
        prev_r = er[k];
    }
    report.add(monotone.finish());
    report.add(sums.finish());
    report.add(ConditionCheck{"eta_l_mass_off_lower", mass_l, where_l, phi.size(), true});
    report.add(ConditionCheck{"eta_r_mass_off_upper", mass_r, where_r, phi.size(), true});
    return report;
}

}  // namespace skomap
