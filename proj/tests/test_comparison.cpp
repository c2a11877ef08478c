#include <doctest.h>

#include <cmath>

#include "skomap/comparison.hpp"
#include "skomap/instances.hpp"
#include "skomap/suites.hpp"

using namespace skomap;

namespace {

ComparisonInstance same_problem(std::uint64_t seed) {
    const auto base = random_instance(seed);
    return ComparisonInstance{base.psi, base.psi, 0.0, 0.0, std::nullopt, base.bounds, base.bounds};
}

BoundaryPair shifted_upper(const BoundaryPair& b, double by) { return BoundaryPair(b.lower(), b.upper() + by); }

}  // namespace

TEST_CASE("identical problems give zero violation") {
    const auto inst = same_problem(5);
    const auto d = check_domain_monotonicity(inst, 1e-9);
    CHECK(d.passed);
    CHECK(d.worst_violation == 0.0);
    const auto i = check_input_monotonicity(inst, 1e-9);
    CHECK(i.passed);
    const auto c = check_constraining_monotonicity(inst, 1e-9);
    CHECK(c.passed);
    CHECK(c.worst_violation == 0.0);
}

TEST_CASE("domain monotonicity on random inputs") {
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        const auto base = random_instance(seed);
        ComparisonInstance upper_only{base.psi, base.psi, 0, 0, std::nullopt, base.bounds, shifted_upper(base.bounds, 1.0)};
        const auto rep = check_domain_monotonicity(upper_only, 1e-9);
        CHECK(rep.passed);
        ComparisonInstance nested{base.psi, base.psi, 0, 0, std::nullopt, base.bounds,
                                  BoundaryPair(base.bounds.lower() + (-1.0), base.bounds.upper() + 1.0)};
        CHECK(check_domain_monotonicity(nested, 1e-9).passed);
        CHECK(check_domain_monotonicity(domain_instance(seed), 1e-9).passed);
    }
}

TEST_CASE("domain check hypotheses hard-fail") {
    const auto base = random_instance(1);
    ComparisonInstance swapped{base.psi, base.psi, 0, 0, std::nullopt, shifted_upper(base.bounds, 1.0), base.bounds};
    CHECK_THROWS_AS(check_domain_monotonicity(swapped), UsageError);
    const BoundaryPair touching(base.bounds.lower(), base.bounds.lower());
    ComparisonInstance pinched{base.psi, base.psi, 0, 0, std::nullopt, touching, base.bounds};
    CHECK_THROWS_AS(check_domain_monotonicity(pinched), UsageError);
    ComparisonInstance missing{base.psi, base.psi, 0, 0, std::nullopt, base.bounds, std::nullopt};
    CHECK_THROWS_AS(check_domain_monotonicity(missing), UsageError);
}

TEST_CASE("input monotonicity: offset only") {
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        const auto base = random_instance(seed, oracle_options());
        ComparisonInstance inst{base.psi, base.psi, 1.0, 0.0, std::nullopt, base.bounds, std::nullopt};
        CHECK(check_input_monotonicity(inst, 1e-9).passed);
        // Direct form of the first relation with nu = 0: 0 <= phi - phi' <= 1.
        const auto phi = esm_solve(base.psi + 1.0, base.bounds).phi;
        const auto phi_p = esm_solve(base.psi, base.bounds).phi;
        for (std::size_t k = 0; k < phi.size(); ++k) {
            CHECK(phi[k] - phi_p[k] >= -1e-12);
            CHECK(phi[k] - phi_p[k] <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("input monotonicity: nu(t) = t") {
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        const auto base = random_instance(seed, oracle_options());
        const auto& g = base.psi.grid();
        const GridPath nu(g, std::vector<double>(g.points().begin(), g.points().end()));
        ComparisonInstance inst{base.psi + nu, base.psi, 0, 0, nu, base.bounds, std::nullopt};
        CHECK(check_input_monotonicity(inst, 1e-9).passed);
        const auto eta = esm_solve(inst.psi, base.bounds).eta;
        const auto eta_p = esm_solve(inst.psi_prime, base.bounds).eta;
        for (std::size_t k = 0; k < eta.size(); ++k) {
            CHECK(eta_p[k] >= eta[k] - 1e-9);
            CHECK(eta_p[k] <= eta[k] + g[k] + 1e-9);
        }
    }
}

TEST_CASE("input check hypotheses hard-fail") {
    const auto base = random_instance(2);
    const auto& g = base.psi.grid();
    std::vector<double> dec(g.size(), 0.0);
    dec.back() = -1.0;
    ComparisonInstance bad_nu{base.psi + GridPath(g, dec), base.psi, 0, 0, GridPath(g, dec), base.bounds, std::nullopt};
    CHECK_THROWS_AS(check_input_monotonicity(bad_nu), UsageError);
    ComparisonInstance bad_start{base.psi + 1.0, base.psi, 0, 0, GridPath::constant(g, 1.0), base.bounds, std::nullopt};
    CHECK_THROWS_AS(check_input_monotonicity(bad_start), UsageError);
    ComparisonInstance mismatch{base.psi + 0.5, base.psi, 0, 0, GridPath::constant(g, 0.0), base.bounds, std::nullopt};
    CHECK_THROWS_AS(check_input_monotonicity(mismatch), UsageError);
}

TEST_CASE("constraining monotonicity") {
    SUBCASE("nu = t ramp") {
        for (std::uint64_t seed = 0; seed < 500; ++seed) {
            const auto base = random_instance(seed);
            const auto& g = base.psi.grid();
            const GridPath nu(g, std::vector<double>(g.points().begin(), g.points().end()));
            ComparisonInstance inst{base.psi + nu, base.psi, 0, 0, nu, base.bounds, std::nullopt};
            CHECK(check_constraining_monotonicity(inst, 1e-9).passed);
        }
    }
    SUBCASE("c0' = c0 + 0.5") {
        for (std::uint64_t seed = 0; seed < 500; ++seed) {
            const auto base = random_instance(seed);
            ComparisonInstance inst{base.psi, base.psi, 0.0, 0.5, std::nullopt, base.bounds, std::nullopt};
            CHECK(check_constraining_monotonicity(inst, 1e-9).passed);
            const auto el = esm_solve(base.psi, base.bounds).eta_l;
            const auto el_p = esm_solve(base.psi + 0.5, base.bounds).eta_l;
            for (std::size_t k = 0; k < el.size(); ++k) {
                CHECK(el_p[k] >= el[k] - 0.5 - 1e-9);
                CHECK(el_p[k] <= el[k] + 1e-9);
            }
        }
    }
    SUBCASE("generated instances") {
        for (std::uint64_t seed = 0; seed < 500; ++seed) {
            CHECK(check_constraining_monotonicity(constraining_instance(seed), 1e-9).passed);
            CHECK(check_input_monotonicity(input_instance(seed), 1e-9).passed);
        }
    }
    SUBCASE("touching boundaries are rejected") {
        const auto base = random_instance(4);
        ComparisonInstance inst{base.psi, base.psi, 0, 0, std::nullopt,
                                BoundaryPair(base.bounds.lower(), base.bounds.lower()), std::nullopt};
        CHECK_THROWS_AS(check_constraining_monotonicity(inst), UsageError);
    }
}

TEST_CASE("a wrong inequality direction is caught") {
    // Swapping the roles of the two domains turns the domain check into the
    // reverse inequality, which random inputs violate.
    std::size_t caught = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto base = random_instance(seed);
        const auto tight = esm_solve(base.psi, base.bounds);
        const auto wide = esm_solve(base.psi, shifted_upper(base.bounds, 1.0));
        for (std::size_t k = 0; k < tight.eta_r.size(); ++k) {
            if (tight.eta_r[k] > wide.eta_r[k] + 1e-6) {
                ++caught;
                break;
            }
        }
    }
    CHECK(caught > 10);
}

TEST_CASE("checks are symmetric under negation") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto d = domain_instance(seed);
        CHECK(check_domain_monotonicity(negate(d)).worst_violation == check_domain_monotonicity(d).worst_violation);
        const auto i = input_instance(seed);
        CHECK(check_input_monotonicity(negate(i)).worst_violation ==
              doctest::Approx(check_input_monotonicity(i).worst_violation).epsilon(1e-12));
        const auto c = constraining_instance(seed);
        CHECK(check_constraining_monotonicity(negate(c)).passed);
    }
}

TEST_CASE("suite runner") {
    CHECK(parse_seed_range("0..999").count() == 1000);
    CHECK(parse_seed_range("7").first == 7);
    CHECK_THROWS_AS(parse_seed_range("5..2"), UsageError);
    CHECK_THROWS_AS(parse_seed_range("a..2"), UsageError);
    CHECK_THROWS_AS(parse_suite("bogus"), UsageError);
    CHECK(suite_name(parse_suite("mono-domain")) == "mono-domain");

    for (Suite s : {Suite::esp, Suite::sp, Suite::oracle, Suite::mono_domain, Suite::mono_input, Suite::mono_constraint,
                    Suite::symmetry, Suite::one_sided}) {
        const auto single = run_suite(s, {0, 39}, std::nullopt, 1);
        const auto multi = run_suite(s, {0, 39}, std::nullopt, 3);
        CHECK_MESSAGE(single.passed, suite_name(s));
        CHECK(single.worst_violation == multi.worst_violation);
        CHECK(single.worst_seed == multi.worst_seed);
    }
}

TEST_CASE("planted sign fault makes suites fail") {
    testing::inject_sign_fault(true);
    const auto oracle = run_suite(Suite::oracle, {0, 49});
    const auto esp = run_suite(Suite::esp, {0, 49});
    const auto dom = run_suite(Suite::mono_domain, {0, 49});
    testing::inject_sign_fault(false);
    CHECK_FALSE(oracle.passed);
    CHECK_FALSE(esp.passed);
    CHECK_FALSE(dom.passed);
    CHECK(run_suite(Suite::oracle, {0, 49}).passed);
}
