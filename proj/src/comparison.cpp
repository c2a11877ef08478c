#include "skomap/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "skomap/errors.hpp"
#include "skomap/instances.hpp"
#include "skomap/random.hpp"

namespace skomap {

namespace {

double pos(double x) { return x > 0.0 ? x : 0.0; }

// Tracks lo <= x <= hi as two one-sided checks.
struct Sandwich {
    ViolationTracker lower;
    ViolationTracker upper;
    explicit Sandwich(const std::string& name) : lower(name + "_lower"), upper(name + "_upper") {}
    void observe(double lo, double x, double hi, double t) {
        lower.observe(std::max(lo - x, 0.0), t);
        upper.observe(std::max(x - hi, 0.0), t);
    }
    void finish(ConditionReport& rep) const {
        rep.add(lower.finish());
        rep.add(upper.finish());
    }
};

void require_separated(const BoundaryPair& b, const char* what) {
    if (!(b.min_gap() > 0.0)) throw UsageError(std::string(what) + ": boundaries must stay separated (inf(r - l) > 0)");
}

GridPath nu_of(const ComparisonInstance& inst, double tol) {
    require_same_grid(inst.psi, inst.psi_prime, "comparison");
    require_same_grid(inst.psi, inst.bounds.lower(), "comparison");
    GridPath nu = inst.nu ? *inst.nu : inst.psi - inst.psi_prime;
    require_same_grid(inst.psi, nu, "comparison");
    if (nu[0] != 0.0) throw UsageError("nu(0) must be 0");
    for (std::size_t k = 0; k < nu.size(); ++k) {
        if (!std::isfinite(nu[k])) throw UsageError("nu must be finite");
        if (k > 0 && nu[k] < nu[k - 1]) {
            throw UsageError("nu must be non-decreasing (decreases at t = " + std::to_string(nu.grid()[k]) + ")");
        }
        const double sum = inst.psi_prime[k] + nu[k];
        if (std::fabs(inst.psi[k] - sum) > tol * std::max(1.0, std::fabs(inst.psi[k]))) {
            throw UsageError("psi must equal psi' + nu (differs at t = " + std::to_string(nu.grid()[k]) + ")");
        }
    }
    return nu;
}

}  // namespace

ConditionReport check_domain_monotonicity(const ComparisonInstance& inst, double tol) {
    if (!inst.bounds_tilde) throw UsageError("domain check needs a second (wider) domain");
    const BoundaryPair& b = inst.bounds;
    const BoundaryPair& bt = *inst.bounds_tilde;
    require_same_grid(b.lower(), bt.lower(), "comparison");
    require_same_grid(inst.psi, b.lower(), "comparison");
    require_separated(b, "domain check");
    for (std::size_t k = 0; k < b.lower().size(); ++k) {
        if (bt.lower()[k] > b.lower()[k] || b.upper()[k] > bt.upper()[k]) {
            throw UsageError("domain check: domains not nested at t = " + std::to_string(b.lower().grid()[k]));
        }
    }
    const auto sol = esm_solve(inst.psi, b);
    const auto wide = esm_solve(inst.psi, bt);

    ConditionReport rep(tol);
    ViolationTracker r_dom("eta_r_dominates"), l_dom("eta_l_dominates");
    for (std::size_t k = 0; k < sol.phi.size(); ++k) {
        const double t = sol.phi.grid()[k];
        r_dom.observe(std::max(wide.eta_r[k] - sol.eta_r[k], 0.0), t);
        l_dom.observe(std::max(wide.eta_l[k] - sol.eta_l[k], 0.0), t);
    }
    rep.add(r_dom.finish());
    rep.add(l_dom.finish());
    return rep;
}

ConditionReport check_input_monotonicity(const ComparisonInstance& inst, double tol) {
    const GridPath nu = nu_of(inst, tol);
    const BoundaryPair& b = inst.bounds;
    const auto sol = esm_solve(inst.psi + inst.c0, b);
    const auto alt = esm_solve(inst.psi_prime + inst.c0_prime, b);
    const double up = pos(inst.c0_prime - inst.c0);
    const double down = pos(inst.c0 - inst.c0_prime);

    ConditionReport rep(tol);
    Sandwich phi_gap("phi_difference"), eta_gap("eta_difference");
    for (std::size_t k = 0; k < nu.size(); ++k) {
        const double t = nu.grid()[k];
        const double width = b.upper()[k] - b.lower()[k];
        phi_gap.observe(std::max(-down - nu[k], -width), alt.phi[k] - sol.phi[k], std::min(up, width), t);
        eta_gap.observe(sol.eta[k] - up, alt.eta[k], sol.eta[k] + nu[k] + down, t);
    }
    phi_gap.finish(rep);
    eta_gap.finish(rep);
    return rep;
}

ConditionReport check_constraining_monotonicity(const ComparisonInstance& inst, double tol) {
    const GridPath nu = nu_of(inst, tol);
    require_separated(inst.bounds, "constraining check");
    if (inst.psi[0] != inst.psi_prime[0]) throw UsageError("constraining check needs psi(0) = psi'(0)");
    const auto sol = esm_solve(inst.psi + inst.c0, inst.bounds);
    const auto alt = esm_solve(inst.psi_prime + inst.c0_prime, inst.bounds);
    const double up = pos(inst.c0_prime - inst.c0);
    const double down = pos(inst.c0 - inst.c0_prime);

    ConditionReport rep(tol);
    Sandwich lower_push("eta_l_comparison"), upper_push("eta_r_comparison");
    for (std::size_t k = 0; k < nu.size(); ++k) {
        const double t = nu.grid()[k];
        lower_push.observe(sol.eta_l[k] - up, alt.eta_l[k], sol.eta_l[k] + nu[k] + down, t);
        upper_push.observe(alt.eta_r[k] - up, sol.eta_r[k], alt.eta_r[k] + nu[k] + down, t);
    }
    lower_push.finish(rep);
    upper_push.finish(rep);
    return rep;
}

namespace {

// Non-decreasing nu with nu(0) = 0; shape varies with the seed.
GridPath random_nu(StreamRng& rng, const TimeGrid& g) {
    std::vector<double> v(g.size(), 0.0);
    const auto shape = rng.integer(0, 3);
    for (std::size_t k = 1; k < g.size(); ++k) {
        double inc = 0.0;
        switch (shape) {
            case 0: inc = 0.0; break;
            case 1: inc = g[k] - g[k - 1]; break;  // nu(t) = t
            case 2: inc = rng.chance(0.2) ? std::fabs(rng.normal()) : 0.0; break;
            default: inc = std::fabs(rng.normal()); break;
        }
        v[k] = v[k - 1] + inc;
    }
    return GridPath(g, std::move(v));
}

ComparisonInstance input_pair(std::uint64_t seed, const InstanceOptions& opts) {
    const auto base = random_instance(seed, opts);
    StreamRng rng(derive_key(seed, 0x3a17));
    GridPath nu = random_nu(rng, base.psi.grid());
    GridPath psi = base.psi + nu;
    double c0 = 0.0, c0_prime = 0.0;
    if (rng.chance(0.5)) {
        c0 = rng.normal();
        c0_prime = rng.normal();
    }
    return ComparisonInstance{std::move(psi), base.psi, c0, c0_prime, std::move(nu), base.bounds, std::nullopt};
}

GridPath widen(StreamRng& rng, const GridPath& p, double sign) {
    std::vector<double> v(p.values().begin(), p.values().end());
    for (double& x : v) x += sign * 0.5 * std::fabs(rng.normal());
    return GridPath(p.grid(), std::move(v));
}

}  // namespace

ComparisonInstance domain_instance(std::uint64_t seed) {
    InstanceOptions opts;
    opts.infinite_upper_prob = 0.05;
    opts.infinite_lower_prob = 0.05;
    auto base = random_instance(seed, opts);
    StreamRng rng(derive_key(seed, 0xd0a1));
    const auto& l = base.bounds.lower();
    const auto& r = base.bounds.upper();
    std::optional<BoundaryPair> wide;
    switch (seed % 3) {
        case 0: wide.emplace(l, r + 1.0); break;
        case 1: wide.emplace(l + (-1.0), r + 1.0); break;
        default: {
            GridPath lt = rng.chance(0.1) ? GridPath::constant(l.grid(), -INFINITY) : widen(rng, l, -1.0);
            GridPath rt = rng.chance(0.1) ? GridPath::constant(r.grid(), INFINITY) : widen(rng, r, 1.0);
            wide.emplace(std::move(lt), std::move(rt));
        }
    }
    return ComparisonInstance{base.psi, base.psi, 0.0, 0.0, std::nullopt, base.bounds, std::move(wide)};
}

ComparisonInstance input_instance(std::uint64_t seed) { return input_pair(seed, oracle_options()); }

ComparisonInstance constraining_instance(std::uint64_t seed) {
    InstanceOptions opts;
    opts.infinite_upper_prob = 0.05;
    opts.infinite_lower_prob = 0.05;
    return input_pair(seed, opts);
}

ComparisonInstance negate(const ComparisonInstance& inst) {
    auto flip = [](const BoundaryPair& b) { return BoundaryPair(-b.upper(), -b.lower()); };
    std::optional<GridPath> nu = inst.nu;
    std::optional<BoundaryPair> wide;
    if (inst.bounds_tilde) wide = flip(*inst.bounds_tilde);
    return ComparisonInstance{-inst.psi_prime, -inst.psi, -inst.c0_prime, -inst.c0, std::move(nu), flip(inst.bounds),
                              std::move(wide)};
}

}  // namespace skomap
