#include <doctest.h>

#include <cmath>

#include "skomap/esm.hpp"
#include "skomap/instances.hpp"

using namespace skomap;

namespace {

GridPath ramp(std::size_t intervals, double horizon) {
    const auto g = TimeGrid::uniform(horizon, intervals);
    return GridPath(g, std::vector<double>(g.points().begin(), g.points().end()));
}

// Independent route: the step-by-step projection phi[k] = pi_k(phi[k-1] + dpsi).
std::vector<double> projection_oracle(const GridPath& psi, const BoundaryPair& b) {
    std::vector<double> phi(psi.size());
    for (std::size_t k = 0; k < psi.size(); ++k) {
        const double x = k == 0 ? psi[0] : phi[k - 1] + (psi[k] - psi[k - 1]);
        phi[k] = std::max(std::min(x, b.upper()[k]), b.lower()[k]);
    }
    return phi;
}

double max_dev(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::fabs(a[k] - b[k]));
    return d;
}

InstanceOptions separated() { return InstanceOptions{}; }

}  // namespace

TEST_CASE("project clips to the interval") {
    CHECK(project(0.5, 0, 1) == 0.5);
    CHECK(project(2, 0, 1) == 1);
    CHECK(project(-3, -1, INFINITY) == -1);
    CHECK(project(7, -INFINITY, INFINITY) == 7);
    CHECK_THROWS_AS(project(0, 1, 0), DomainError);
}

TEST_CASE("ramp into a unit interval") {
    const auto psi = ramp(40, 2.0);
    const auto b = BoundaryPair::constant(psi.grid(), 0.0, 1.0);
    const auto xi_d = xi_direct_path(psi, b);
    const auto xi_r = xi_recursive(psi, b);
    const auto sol = esm_solve(psi, b);
    for (std::size_t k = 0; k < psi.size(); ++k) {
        const double t = psi.grid()[k];
        CHECK(xi_d[k] == doctest::Approx(std::max(t - 1.0, 0.0)).epsilon(1e-15));
        CHECK(xi_r[k] == xi_d[k]);
        CHECK(sol.phi[k] == doctest::Approx(std::min(t, 1.0)).epsilon(1e-15));
        CHECK(sol.eta[k] == doctest::Approx(-std::max(t - 1.0, 0.0)).epsilon(1e-15));
        CHECK(sol.eta_l[k] == 0.0);
        CHECK(sol.eta_r[k] == doctest::Approx(std::max(t - 1.0, 0.0)).epsilon(1e-13));
    }
}

TEST_CASE("a path that stays inside needs no correction") {
    const TimeGrid g({0, 0.5, 1, 2});
    const GridPath psi(g, {0.1, 0.9, 0.4, 0.0});
    const auto b = BoundaryPair::constant(g, 0.0, 1.0);
    for (double t : g.points()) CHECK(xi_direct(psi, b, t) == 0.0);
    const auto sol = esm_solve(psi, b);
    for (std::size_t k = 0; k < g.size(); ++k) CHECK(sol.phi[k] == psi[k]);
}

TEST_CASE("upper = +inf reduces to the one-sided map") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto inst = random_instance(seed, separated());
        const BoundaryPair one_sided(inst.bounds.lower(), GridPath::constant(inst.psi.grid(), INFINITY));
        const auto xi = xi_direct_path(inst.psi, one_sided);
        double sup = 0.0;
        for (std::size_t k = 0; k < inst.psi.size(); ++k) {
            sup = std::max(sup, inst.bounds.lower()[k] - inst.psi[k]);
            CHECK(xi[k] == -sup);
        }
        const auto sol = esm_solve(inst.psi, one_sided);
        const auto gl = gamma_lower(inst.psi, inst.bounds.lower());
        for (std::size_t k = 0; k < gl.size(); ++k) CHECK(sol.phi[k] == gl[k]);
    }
}

TEST_CASE("gamma_lower with a zero boundary is the classical map") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto psi = random_instance(seed).psi;
        const auto out = gamma_zero(psi);
        double sup = 0.0;
        for (std::size_t k = 0; k < psi.size(); ++k) {
            sup = std::max(sup, -psi[k]);
            CHECK(out[k] == psi[k] + sup);
            CHECK(out[k] >= 0.0);
        }
    }
    const TimeGrid g({0, 1, 2});
    const GridPath above(g, {1, 2, 0.5});
    const auto same = gamma_lower(above, GridPath::constant(g, 0.0));
    for (std::size_t k = 0; k < 3; ++k) CHECK(same[k] == above[k]);
}

TEST_CASE("recursive and direct evaluations agree on random instances") {
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const auto inst = random_instance(seed, oracle_options());
        const auto d = xi_direct_path(inst.psi, inst.bounds);
        const auto r = xi_recursive(inst.psi, inst.bounds);
        worst = std::max(worst, max_dev(d.values(), r.values()));
        const auto sol = esm_solve(inst.psi, inst.bounds);
        const auto oracle = projection_oracle(inst.psi, inst.bounds);
        CHECK(max_dev(sol.phi.values(), oracle) <= 1e-12);
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("pinched boundaries force the single admissible value") {
    const auto inst = random_instance(3);
    const BoundaryPair pinched(inst.bounds.lower(), inst.bounds.lower());
    const auto xi = xi_recursive(inst.psi, pinched);
    const auto sol = esm_solve(inst.psi, pinched);
    for (std::size_t k = 0; k < xi.size(); ++k) {
        CHECK(xi[k] == inst.psi[k] - inst.bounds.lower()[k]);
        CHECK(sol.phi[k] == inst.bounds.lower()[k]);
    }
}

TEST_CASE("constant interval matches the two-sided map on [0, a]") {
    for (std::uint64_t seed = 10; seed < 40; ++seed) {
        const auto psi = random_instance(seed).psi;
        const auto b = BoundaryPair::constant(psi.grid(), 0.0, 1.5);
        const auto d = xi_direct_path(psi, b);
        const auto sol = esm_solve(psi, b);
        for (std::size_t k = 0; k < psi.size(); ++k) {
            CHECK(sol.phi[k] == doctest::Approx(psi[k] - d[k]).epsilon(1e-14));
            CHECK(sol.phi[k] >= 0.0);
            CHECK(sol.phi[k] <= 1.5);
        }
    }
}

TEST_CASE("esm_solve worked examples") {
    SUBCASE("no constraint") {
        const auto psi = random_instance(99).psi;
        const auto sol = esm_solve(psi, BoundaryPair::constant(psi.grid(), -INFINITY, INFINITY));
        for (std::size_t k = 0; k < psi.size(); ++k) {
            CHECK(sol.phi[k] == psi[k]);
            CHECK(sol.eta[k] == 0.0);
        }
    }
    SUBCASE("initial jump onto the lower boundary") {
        const TimeGrid g({0, 1, 2, 3});
        const auto sol = esm_solve(GridPath::constant(g, -1.0), BoundaryPair::constant(g, 0.0, INFINITY));
        for (std::size_t k = 0; k < g.size(); ++k) {
            CHECK(sol.phi[k] == 0.0);
            CHECK(sol.eta_l[k] == 1.0);
            CHECK(sol.eta_r[k] == 0.0);
        }
    }
    SUBCASE("NaN and mismatched grids are rejected") {
        const TimeGrid g({0, 1});
        CHECK_THROWS_AS(esm_solve(GridPath(g, {0, INFINITY}), BoundaryPair::constant(g, 0, 1)), DomainError);
        CHECK_THROWS_AS(esm_solve(GridPath(TimeGrid({0, 2}), {0, 0}), BoundaryPair::constant(g, 0, 1)), UsageError);
    }
}

TEST_CASE("range and decomposition invariants") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const auto inst = random_instance(seed, oracle_options());
        const auto sol = esm_solve(inst.psi, inst.bounds);
        double total = 0.0;
        for (std::size_t k = 0; k < sol.phi.size(); ++k) {
            CHECK(sol.phi[k] >= inst.bounds.lower()[k]);
            CHECK(sol.phi[k] <= inst.bounds.upper()[k]);
            if (k > 0) {
                CHECK(sol.eta_l[k] >= sol.eta_l[k - 1]);
                CHECK(sol.eta_r[k] >= sol.eta_r[k - 1]);
            }
            total = std::max(total, std::fabs(sol.eta_l[k] - sol.eta_r[k] - sol.eta[k]));
        }
        CHECK(total <= 1e-12 * std::max(1.0, sol.eta_l.back() + sol.eta_r.back()));
        const double expect = std::fabs(sol.eta[0]) + variation(sol.eta);
        CHECK(sol.eta_l.back() + sol.eta_r.back() == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("shift equivariance and negation symmetry are exact") {
    InstanceOptions o = separated();
    o.dyadic = true;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto inst = random_instance(seed, o);
        const auto base = esm_solve(inst.psi, inst.bounds);
        const double c = to_dyadic(3.0 * std::sin(static_cast<double>(seed)));
        const auto shifted = esm_solve(inst.psi + c, BoundaryPair(inst.bounds.lower() + c, inst.bounds.upper() + c));
        const auto negated = esm_solve(-inst.psi, BoundaryPair(-inst.bounds.upper(), -inst.bounds.lower()));
        for (std::size_t k = 0; k < base.phi.size(); ++k) {
            CHECK(shifted.phi[k] == base.phi[k] + c);
            CHECK(negated.phi[k] == -base.phi[k]);
            CHECK(negated.eta_l[k] == base.eta_r[k]);
        }
    }
}

TEST_CASE("refining the inputs does not change the solution on the coarse grid") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto inst = random_instance(seed, oracle_options());
        const auto coarse = esm_solve(inst.psi, inst.bounds);
        const std::size_t factor = 2 + seed % 4;
        const auto fine = esm_solve(refine(inst.psi, factor),
                                    BoundaryPair(refine(inst.bounds.lower(), factor), refine(inst.bounds.upper(), factor)));
        for (std::size_t k = 0; k < coarse.phi.size(); ++k) {
            CHECK(fine.phi[k * factor] == coarse.phi[k]);
            CHECK(fine.eta[k * factor] == coarse.eta[k]);
        }
    }
}

TEST_CASE("batch solve is bit-identical to single solves") {
    const TimeGrid g = TimeGrid::uniform(1.0, 300);
    std::vector<GridPath> psis;
    std::vector<BoundaryPair> bounds;
    for (std::uint64_t seed = 0; seed < 7; ++seed) {
        const auto inst = random_instance(seed, InstanceOptions{301, 301});
        auto on_g = [&](const GridPath& p) { return GridPath(g, {p.values().begin(), p.values().end()}); };
        psis.push_back(on_g(inst.psi));
        bounds.emplace_back(on_g(inst.bounds.lower()), on_g(inst.bounds.upper()));
    }
    const auto batch = esm_solve_batch(psis, bounds);
    REQUIRE(batch.size() == psis.size());
    for (std::size_t i = 0; i < psis.size(); ++i) {
        const auto single = esm_solve(psis[i], bounds[i]);
        for (std::size_t k = 0; k < g.size(); ++k) {
            CHECK(batch[i].phi[k] == single.phi[k]);
            CHECK(batch[i].eta_r[k] == single.eta_r[k]);
        }
    }
}

TEST_CASE("ESP verifier") {
    SUBCASE("solver outputs pass") {
        double worst = 0.0;
        for (std::uint64_t seed = 0; seed < 500; ++seed) {
            const auto inst = random_instance(seed, separated());
            const auto rep = verify_esp(esm_solve(inst.psi, inst.bounds), inst.psi, inst.bounds, 1e-9);
            CHECK(rep.passed);
            worst = std::max(worst, rep.worst_violation);
        }
        CHECK(worst <= 1e-9);
    }
    SUBCASE("a planted bump where phi is interior fails") {
        const TimeGrid g({0, 1, 2, 3});
        const GridPath psi(g, {0.5, 0.5, 0.5, 0.5});
        const auto b = BoundaryPair::constant(g, 0.0, 1.0);
        auto sol = esm_solve(psi, b);
        sol.eta = GridPath(g, {0.0, 0.2, 0.0, 0.0});
        sol.phi = GridPath(g, {0.5, 0.7, 0.5, 0.5});
        const auto rep = verify_esp(sol, psi, b, 1e-9);
        CHECK_FALSE(rep.passed);
        CHECK(rep.worst_violation == doctest::Approx(0.2));
    }
    SUBCASE("unconstrained instance has zero violation") {
        const TimeGrid g({0, 1, 2});
        const GridPath psi(g, {0.2, 0.4, 0.6});
        const auto b = BoundaryPair::constant(g, 0.0, 1.0);
        const auto rep = verify_esp(esm_solve(psi, b), psi, b);
        CHECK(rep.passed);
        CHECK(rep.worst_violation == 0.0);
    }
}

TEST_CASE("SP complementarity verifier") {
    SUBCASE("separated solver outputs pass") {
        for (std::uint64_t seed = 0; seed < 500; ++seed) {
            const auto inst = random_instance(seed, separated());
            CHECK(inst.bounds.min_gap() > 0.0);
            const auto rep = verify_sp_complementarity(esm_solve(inst.psi, inst.bounds), inst.bounds, 1e-9);
            CHECK(rep.passed);
        }
    }
    SUBCASE("planted lower push at an interior point fails") {
        const TimeGrid g({0, 1, 2});
        const GridPath psi(g, {0.5, 0.5, 0.5});
        const auto b = BoundaryPair::constant(g, 0.0, 1.0);
        auto sol = esm_solve(psi, b);
        sol.eta_l = GridPath(g, {0.0, 0.3, 0.3});
        sol.eta_r = GridPath(g, {0.0, 0.3, 0.3});
        const auto rep = verify_sp_complementarity(sol, b);
        CHECK_FALSE(rep.passed);
    }
    SUBCASE("no pushing passes vacuously") {
        const TimeGrid g({0, 1});
        const GridPath psi(g, {0.5, 0.6});
        const auto b = BoundaryPair::constant(g, 0.0, 1.0);
        const auto sol = esm_solve(psi, b);
        CHECK(sol.eta_l.back() == 0.0);
        CHECK(sol.eta_r.back() == 0.0);
        CHECK(verify_sp_complementarity(sol, b).passed);
    }
}
