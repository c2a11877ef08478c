#include <doctest.h>

#include <cmath>

#include "skomap/brownian.hpp"
#include "skomap/cusp.hpp"
#include "skomap/thorn.hpp"

using namespace skomap;

namespace {

GridPath from_values(std::vector<double> v) {
    const std::size_t n = v.size() - 1;
    return GridPath(TimeGrid::uniform(1.0, n), std::move(v));
}

ThornExperiment small_experiment() {
    ThornExperiment e;
    ThornSpec a;
    a.gamma = 1.0;
    ThornSpec b;
    b.gamma = 2.0;
    ThornSpec c;
    c.gamma = 3.0;
    e.specs = {a, b, c};
    e.resolutions = {256, 1024};
    for (std::uint64_t s = 0; s < 10; ++s) e.seeds.push_back(s);
    return e;
}

}  // namespace

TEST_CASE("thorn profile") {
    ThornSpec s;
    s.gamma = 3.0;
    s.epsilon = 0.5;
    s.slope_cap = 0.25;
    CHECK(s.width(0.0) == 0.0);
    CHECK(s.width(0.5) == 0.125);
    CHECK(s.width(1.5) == doctest::Approx(0.125 + 0.25));
    CHECK(s.upper(0.5) == 0.0625);
    CHECK(s.lower(0.5) == -0.0625);
    s.slope_cap = 10.0;  // matched slope 3 * 0.25 is below the cap
    CHECK(s.width(1.0) == doctest::Approx(0.125 + 0.375));
    CHECK_THROWS_AS(s.width(-0.1), DomainError);

    ThornSpec rough;
    rough.gamma = 0.5;
    CHECK_THROWS_AS(rough.validate(), UsageError);
    rough.lipschitz = false;
    CHECK_NOTHROW(rough.validate());
    ThornSpec bad;
    bad.base_width = -1.0;
    CHECK_THROWS_AS(bad.validate(), UsageError);
}

TEST_CASE("thorn paths stay in the domain") {
    for (double gamma : {1.0, 3.0}) {
        ThornSpec spec;
        spec.gamma = gamma;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const auto p = simulate_thorn(spec, seed, 1.0, 4096);
            for (std::size_t k = 0; k < p.Z2.size(); ++k) {
                REQUIRE(p.Z2[k] >= 0.0);
                REQUIRE(p.Z1()[k] >= spec.lower(p.Z2[k]));
                REQUIRE(p.Z1()[k] <= spec.upper(p.Z2[k]));
                REQUIRE(p.Y()[k] == doctest::Approx(p.Z1()[k] - p.B1[k]).epsilon(1e-12));
            }
            const auto gz = gamma_zero(p.B2);
            for (std::size_t k = 0; k < gz.size(); ++k) REQUIRE(p.Z2[k] == gz[k]);
            const auto again = simulate_thorn(spec, seed, 1.0, 4096);
            for (std::size_t k = 0; k < gz.size(); ++k) REQUIRE(again.Y()[k] == p.Y()[k]);
        }
    }
}

TEST_CASE("driving motions are uncorrelated") {
    const int n = 10000;
    double s1 = 0, s2 = 0, s11 = 0, s22 = 0, s12 = 0;
    for (int seed = 0; seed < n; ++seed) {
        const BrownianHierarchy h1(static_cast<std::uint64_t>(seed), 1.0, 0, 1);
        const BrownianHierarchy h2(static_cast<std::uint64_t>(seed), 1.0, 0, 2);
        const double a = h1.finest().back(), b = h2.finest().back();
        s1 += a;
        s2 += b;
        s11 += a * a;
        s22 += b * b;
        s12 += a * b;
    }
    const double m1 = s1 / n, m2 = s2 / n;
    const double corr = (s12 / n - m1 * m2) / std::sqrt((s11 / n - m1 * m1) * (s22 / n - m2 * m2));
    CHECK(std::fabs(corr) < 0.05);
    // Same path as simulate_thorn uses.
    ThornSpec spec;
    const auto p = simulate_thorn(spec, 5, 1.0, 64);
    CHECK(p.B1.back() == BrownianHierarchy(5, 1.0, 6, 1).finest().back());
    CHECK(p.B2.back() == BrownianHierarchy(5, 1.0, 6, 2).finest().back());
}

TEST_CASE("constant width above epsilon reduces to the one-dimensional constant gap") {
    ThornSpec spec;
    spec.gamma = 1.0;
    spec.epsilon = 0.5;
    spec.slope_cap = 0.0;
    const auto gap = BoundarySpec::constant(0.5, 1.0);
    int used = 0;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const BrownianHierarchy h1(seed, 1.0, 12, 1);
        const BrownianHierarchy h2(seed, 1.0, 12, 2);
        const auto b2 = h2.level(12);
        double low = INFINITY;
        for (double v : b2.values()) low = std::min(low, 1.0 + v);
        if (low <= 0.5) continue;  // keep paths that stay above epsilon
        ++used;
        const auto p = thorn_from(h1.level(12), b2, spec, 1.0);
        const auto ref = rbm_from(h1.level(12), 0.0, gap);
        for (std::size_t k = 0; k < p.Y().size(); ++k) REQUIRE(p.Y()[k] == ref.Y()[k]);
        CHECK(variation(p.Y()) == variation(ref.Y()));
    }
    CHECK(used >= 10);
}

TEST_CASE("excursion detection on planted paths") {
    CHECK(detect_excursions(GridPath::constant(TimeGrid::uniform(1.0, 16), 0.0), 0.1).empty());

    const auto bump = from_values({0, 0, 1, 2, 1, 0, 0, 0, 0, 0});
    const auto y = from_values({0, 0, 0, 1, 3, 3, 3, 3, 3, 3});
    const auto one = detect_excursions(bump, y, 0.5);
    REQUIRE(one.size() == 1);
    CHECK(one[0].first == 1);
    CHECK(one[0].last == 5);
    CHECK(one[0].start == doctest::Approx(1.0 / 9.0));
    CHECK(one[0].end == doctest::Approx(5.0 / 9.0));
    CHECK(one[0].height == 2.0);
    CHECK(one[0].variation == 3.0);

    // A run reaching the end of the path is not a complete excursion.
    CHECK(detect_excursions(from_values({0, 1, 0, 0, 2, 2}), 0.5).size() == 1);
    CHECK_THROWS_AS(detect_excursions(bump, 0.0), UsageError);

    // Raising the threshold can split an excursion, so counts may grow.
    const auto dip = from_values({0, 2, 0.5, 2, 0});
    CHECK(detect_excursions(dip, 0.25).size() == 1);
    CHECK(detect_excursions(dip, 1.0).size() == 2);
}

TEST_CASE("excursions nest as the threshold rises") {
    ThornSpec spec;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto p = simulate_thorn(spec, seed, 1.0, 2048);
        const double total = variation(p.Y());
        double previous_cover = INFINITY;
        std::vector<ExcursionRecord> lower;
        double lower_thr = 0.0;
        for (double thr : {0.01, 0.03, 0.1, 0.3}) {
            const auto exc = detect_excursions(p.Z2, p.Y(), thr);
            double cover = 0.0, sum = 0.0;
            for (const auto& x : exc) {
                sum += x.variation;
                bool inside = false;
                for (const auto& l : lower) inside = inside || (l.first <= x.first && x.last <= l.last);
                // Otherwise it sits in the final run that the lower threshold never closed.
                bool terminal = true;
                for (std::size_t k = x.first + 1; k < p.Z2.size(); ++k) terminal = terminal && p.Z2[k] > lower_thr;
                if (!lower.empty()) CHECK((inside || terminal));
                if (inside) cover += x.end - x.start;
            }
            CHECK(total >= sum - 1e-9);
            CHECK(cover <= previous_cover + 1e-12);
            previous_cover = 0.0;
            for (const auto& x : exc) previous_cover += x.end - x.start;
            lower = exc;
            lower_thr = thr;
        }
    }
}

TEST_CASE("default threshold") {
    CHECK(excursion_threshold(TimeGrid::uniform(1.0, 1024)) == doctest::Approx(2.0 / 32.0));
    CHECK(excursion_threshold(TimeGrid::uniform(4.0, 4), 1.0) == 1.0);
}

TEST_CASE("thorn experiments") {
    auto e = small_experiment();
    const auto exc = excursion_variation_experiment(e, 1);
    REQUIRE(exc.series.size() == 3);
    CHECK(exc.series[1].verdict == Verdict::unclassified);
    CHECK(exc.series[0].verdict != Verdict::unclassified);
    for (const auto& s : exc.series) CHECK(s.included + s.skipped == 10);
    for (const auto& r : exc.rows) {
        CHECK(r.start < r.end);
        CHECK(r.height > 0.0);
    }
    // Same excursion window at every resolution, finest grid widest.
    for (std::size_t i = 0; i + 1 < exc.rows.size(); i += 2) {
        CHECK(exc.rows[i].seed == exc.rows[i + 1].seed);
        CHECK(exc.rows[i].start >= exc.rows[i + 1].start);
        CHECK(exc.rows[i].end <= exc.rows[i + 1].end);
    }
    const auto threaded = excursion_variation_experiment(e, 3);
    REQUIRE(threaded.rows.size() == exc.rows.size());
    for (std::size_t i = 0; i < exc.rows.size(); ++i) CHECK(threaded.rows[i].variation == exc.rows[i].variation);

    const auto full = semimartingale_experiment(e, 2);
    for (const auto& s : full.series) {
        CHECK(s.verdict != Verdict::unclassified);
        CHECK(s.included == 10);
    }
    // Whole-path variation dominates the single excursion.
    for (const auto& r : exc.rows) {
        for (const auto& f : full.rows) {
            if (f.parameter == r.parameter && f.seed == r.seed && f.resolution == r.resolution)
                CHECK(f.variation >= r.variation - 1e-9);
        }
    }

    auto dup = e;
    dup.specs[1].gamma = 1.0;
    CHECK_THROWS_AS(validate(dup), UsageError);
    auto few = e;
    few.seeds.resize(5);
    CHECK_THROWS_AS(excursion_variation_experiment(few), UsageError);
    auto odd = e;
    odd.resolutions = {256, 1000};
    CHECK_THROWS_AS(semimartingale_experiment(odd), UsageError);
}
