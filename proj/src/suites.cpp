#include "skomap/suites.hpp"

#include <charconv>
#include <cmath>
#include <vector>

#include "skomap/comparison.hpp"
#include "skomap/errors.hpp"
#include "skomap/instances.hpp"
#include "skomap/parallel.hpp"

namespace skomap {

namespace {

struct SuiteEntry {
    Suite suite;
    const char* name;
};

constexpr SuiteEntry kSuites[] = {
    {Suite::esp, "esp"},
    {Suite::sp, "sp"},
    {Suite::oracle, "oracle"},
    {Suite::mono_domain, "mono-domain"},
    {Suite::mono_input, "mono-input"},
    {Suite::mono_constraint, "mono-constraint"},
    {Suite::symmetry, "symmetry"},
    {Suite::one_sided, "one-sided"},
};

std::uint64_t parse_u64(std::string_view s) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw UsageError("bad seed value '" + std::string(s) + "'");
    }
    return v;
}

ConditionReport deviation_report(const char* name, double tol, std::span<const double> a, std::span<const double> b,
                                 const TimeGrid& grid) {
    ViolationTracker tr(name);
    for (std::size_t k = 0; k < a.size(); ++k) tr.observe(std::fabs(a[k] - b[k]), grid[k]);
    ConditionReport rep(tol);
    rep.add(tr.finish());
    return rep;
}

ConditionReport symmetry_report(std::uint64_t seed, double tol) {
    InstanceOptions o;
    o.dyadic = true;
    const auto inst = random_instance(seed, o);
    const auto base = esm_solve(inst.psi, inst.bounds);
    // Shift drawn from the same dyadic lattice so every sum stays exact.
    const double c = to_dyadic(4.0 * std::sin(static_cast<double>(seed) + 0.5));
    const auto shifted =
        esm_solve(inst.psi + c, BoundaryPair(inst.bounds.lower() + c, inst.bounds.upper() + c));
    const auto negated = esm_solve(-inst.psi, BoundaryPair(-inst.bounds.upper(), -inst.bounds.lower()));

    ViolationTracker shift("shift_equivariance"), neg("negation_symmetry");
    const auto& g = inst.psi.grid();
    for (std::size_t k = 0; k < g.size(); ++k) {
        shift.observe(std::fabs(shifted.phi[k] - (base.phi[k] + c)), g[k]);
        shift.observe(std::fabs(shifted.eta[k] - base.eta[k]), g[k]);
        neg.observe(std::fabs(negated.phi[k] + base.phi[k]), g[k]);
        neg.observe(std::fabs(negated.eta_l[k] - base.eta_r[k]), g[k]);
        neg.observe(std::fabs(negated.eta_r[k] - base.eta_l[k]), g[k]);
    }
    ConditionReport rep(tol);
    rep.add(shift.finish());
    rep.add(neg.finish());
    return rep;
}

}  // namespace

Suite parse_suite(std::string_view name) {
    for (const auto& e : kSuites) {
        if (name == e.name) return e.suite;
    }
    std::string known;
    for (const auto& e : kSuites) known += std::string(known.empty() ? "" : ", ") + e.name;
    throw UsageError("unknown suite '" + std::string(name) + "' (known: " + known + ")");
}

std::string suite_name(Suite s) {
    for (const auto& e : kSuites) {
        if (e.suite == s) return e.name;
    }
    return "?";
}

double default_tolerance(Suite s) {
    switch (s) {
        case Suite::oracle: return 1e-12;
        case Suite::symmetry:
        case Suite::one_sided: return 0.0;
        default: return 1e-9;
    }
}

SeedRange parse_seed_range(std::string_view text) {
    const auto dots = text.find("..");
    SeedRange r;
    if (dots == std::string_view::npos) {
        r.first = r.last = parse_u64(text);
    } else {
        r.first = parse_u64(text.substr(0, dots));
        r.last = parse_u64(text.substr(dots + 2));
    }
    if (r.last < r.first) throw UsageError("seed range '" + std::string(text) + "' is empty");
    return r;
}

ConditionReport run_suite_instance(Suite s, std::uint64_t seed, double tol) {
    switch (s) {
        case Suite::esp: {
            const auto inst = random_instance(seed);
            return verify_esp(esm_solve(inst.psi, inst.bounds), inst.psi, inst.bounds, tol);
        }
        case Suite::sp: {
            const auto inst = random_instance(seed);
            return verify_sp_complementarity(esm_solve(inst.psi, inst.bounds), inst.bounds, tol);
        }
        case Suite::oracle: {
            const auto inst = random_instance(seed, oracle_options());
            const auto d = xi_direct_path(inst.psi, inst.bounds);
            const auto r = xi_recursive(inst.psi, inst.bounds);
            return deviation_report("xi_direct_vs_recursive", tol, d.values(), r.values(), inst.psi.grid());
        }
        case Suite::mono_domain: return check_domain_monotonicity(domain_instance(seed), tol);
        case Suite::mono_input: return check_input_monotonicity(input_instance(seed), tol);
        case Suite::mono_constraint: return check_constraining_monotonicity(constraining_instance(seed), tol);
        case Suite::symmetry: return symmetry_report(seed, tol);
        case Suite::one_sided: {
            const auto inst = random_instance(seed);
            const BoundaryPair b(inst.bounds.lower(), GridPath::constant(inst.psi.grid(), INFINITY));
            const auto sol = esm_solve(inst.psi, b);
            const auto gl = gamma_lower(inst.psi, inst.bounds.lower());
            return deviation_report("one_sided_vs_gamma_lower", tol, sol.phi.values(), gl.values(), inst.psi.grid());
        }
    }
    throw UsageError("unknown suite");
}

SuiteResult run_suite(Suite s, SeedRange seeds, std::optional<double> tol, std::size_t threads) {
    const double t = tol ? *tol : default_tolerance(s);
    std::vector<ConditionReport> reports(seeds.count());
    parallel_for(reports.size(), threads,
                 [&](std::size_t i) { reports[i] = run_suite_instance(s, seeds.first + i, t); });

    SuiteResult out;
    out.suite = suite_name(s);
    out.seeds = seeds;
    out.tolerance = t;
    out.instances = reports.size();
    bool have_worst = false;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& rep = reports[i];
        if (!rep.passed) ++out.failures;
        if (!have_worst || rep.worst_violation > out.worst_violation) {
            have_worst = true;
            out.worst_violation = rep.worst_violation;
            out.worst_seed = seeds.first + i;
            out.worst_location = rep.location;
            out.worst_check.clear();
            for (const auto& c : rep.detail) {
                if (c.worst_violation == rep.worst_violation) {
                    out.worst_check = c.name;
                    break;
                }
            }
        }
    }
    out.passed = out.failures == 0;
    return out;
}

}  // namespace skomap
