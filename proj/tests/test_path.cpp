#include <doctest.h>

#include <cmath>
#include <sstream>

#include "skomap/csv.hpp"
#include "skomap/errors.hpp"
#include "skomap/path.hpp"
#include "skomap/random.hpp"

using namespace skomap;

namespace {
GridPath make(std::vector<double> t, std::vector<double> v) { return GridPath(TimeGrid(std::move(t)), std::move(v)); }

GridPath random_walk(std::uint64_t seed, std::size_t n) {
    StreamRng rng(seed);
    std::vector<double> t(n), v(n);
    for (std::size_t k = 1; k < n; ++k) {
        t[k] = t[k - 1] + rng.uniform(0.1, 1.0);
        v[k] = v[k - 1] + rng.normal();
    }
    v[0] = rng.normal();
    return make(std::move(t), std::move(v));
}
}  // namespace

TEST_CASE("time grid invariants") {
    CHECK_THROWS_AS(TimeGrid({0.0}), DomainError);
    CHECK_THROWS_AS(TimeGrid({0.5, 1.0}), DomainError);
    CHECK_THROWS_AS(TimeGrid({0.0, 1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(TimeGrid({0.0, 2.0, 1.0}), DomainError);
    const TimeGrid g({0.0, 1.0, 2.0});
    CHECK(g.horizon() == 2.0);
    const auto u = TimeGrid::uniform(1.0, 4);
    CHECK(u.size() == 5);
    CHECK(u[2] == 0.5);
    CHECK(u.horizon() == 1.0);
}

TEST_CASE("eval uses cadlag step semantics") {
    const auto p = make({0, 1, 2}, {5, 7, 9});
    CHECK(eval(p, 1.5) == 7);
    CHECK(eval(p, 1.0) == 7);
    CHECK(eval(p, 0.0) == 5);
    CHECK(eval(p, 2.0) == 9);
    CHECK_THROWS_AS(eval(p, -0.1), DomainError);
    CHECK_THROWS_AS(eval(p, 2.5), DomainError);
}

TEST_CASE("NaN values are rejected at construction") {
    CHECK_THROWS_AS(make({0, 1}, {0, NAN}), DomainError);
    CHECK_THROWS_AS(GridPath(TimeGrid({0, 1}), {1.0}), UsageError);
}

TEST_CASE("variation of step paths") {
    CHECK(variation(make({0, 1, 2, 3}, {0, 1, 0, 1}), 0, 3) == 3);
    CHECK(variation(make({0, 1, 2, 3}, {0, 1, 2, 3}), 0, 3) == 3);
    CHECK(variation(GridPath::constant(TimeGrid({0, 1, 2}), 4.0), 0, 2) == 0);
    const auto p = make({0, 1, 2, 3}, {0, 1, 0, 1});
    CHECK(variation(p, 0.5, 2.5) == 2);  // jumps at t=1 and t=2
    CHECK(variation(p, 1, 1) == 0);
    CHECK_THROWS_AS(variation(p, 2, 1), DomainError);
    CHECK_THROWS_AS(variation(make({0, 1}, {0, INFINITY}), 0, 1), DomainError);
}

TEST_CASE("variation is additive and vanishes only on constant windows") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto p = random_walk(seed, 40);
        const auto pts = p.grid().points();
        StreamRng rng(seed + 1000);
        std::size_t a = static_cast<std::size_t>(rng.integer(0, 39));
        std::size_t b = static_cast<std::size_t>(rng.integer(0, 39));
        std::size_t c = static_cast<std::size_t>(rng.integer(0, 39));
        if (a > b) std::swap(a, b);
        if (b > c) std::swap(b, c);
        if (a > b) std::swap(a, b);
        const double whole = variation(p, pts[a], pts[c]);
        const double split = variation(p, pts[a], pts[b]) + variation(p, pts[b], pts[c]);
        CHECK(split == doctest::Approx(whole).epsilon(1e-14));
        CHECK(whole >= 0.0);
        if (a < c) CHECK(whole > 0.0);
    }
}

TEST_CASE("refine keeps evaluation and variation") {
    const auto p = make({0, 2}, {1, 4});
    const auto r = refine(p, 2);
    CHECK(r.grid().points().size() == 3);
    CHECK(r.grid()[1] == 1.0);
    CHECK(r[0] == 1);
    CHECK(r[1] == 1);
    CHECK(r[2] == 4);
    const auto same = refine(p, 1);
    CHECK(same.grid().same_as(p.grid()));
    CHECK_THROWS_AS(refine(p, 0), DomainError);

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto w = random_walk(seed, 30);
        for (std::size_t factor : {2u, 3u, 7u}) {
            const auto fine = refine(w, factor);
            StreamRng rng(seed * 31 + factor);
            for (int i = 0; i < 100; ++i) {
                const double t = rng.uniform(0.0, w.grid().horizon());
                CHECK(eval(fine, t) == eval(w, t));
            }
            CHECK(eval(fine, w.grid().horizon()) == w.back());
            CHECK(variation(fine) == doctest::Approx(variation(w)).epsilon(1e-14));
        }
    }
}

TEST_CASE("refine preserves variation exactly on dyadic values") {
    const auto p = make({0, 1, 2, 3, 4, 5}, {0.5, -1.25, 3.0, 2.75, -0.125, 8.0});
    CHECK(variation(refine(p, 5)) == variation(p));
}

TEST_CASE("sup distance") {
    const auto a = random_walk(7, 50);
    CHECK(sup_distance(a, a, a.grid().horizon()) == 0);
    CHECK(sup_distance(a, a + 2.5, a.grid().horizon()) == doctest::Approx(2.5).epsilon(1e-15));

    const auto other = random_walk(8, 50);
    const auto b = GridPath(a.grid(), std::vector<double>(other.values().begin(), other.values().end()));
    const double T = a.grid()[30];
    double brute = 0.0;
    for (std::size_t k = 0; k <= 30; ++k) brute = std::max(brute, std::fabs(a[k] - b[k]));
    CHECK(sup_distance(a, b, T) == brute);
    CHECK_THROWS_AS(sup_distance(a, random_walk(9, 50), T), UsageError);
}

TEST_CASE("merge and resample align grids") {
    const auto p = make({0, 1, 3}, {1, 2, 3});
    const auto q = make({0, 2, 3}, {5, 6, 7});
    const auto g = merge_grids(p.grid(), q.grid());
    CHECK(g.size() == 4);
    const auto pr = resample(p, g);
    const auto qr = resample(q, g);
    CHECK(std::vector<double>(pr.values().begin(), pr.values().end()) == std::vector<double>{1, 2, 2, 3});
    CHECK(std::vector<double>(qr.values().begin(), qr.values().end()) == std::vector<double>{5, 5, 6, 7});
    CHECK_THROWS_AS(merge_grids(p.grid(), TimeGrid({0, 4})), UsageError);
}

TEST_CASE("boundary pair validation") {
    const TimeGrid g({0, 1, 2});
    CHECK_NOTHROW(BoundaryPair::constant(g, -INFINITY, INFINITY));
    CHECK_THROWS_AS(BoundaryPair::constant(g, INFINITY, INFINITY), DomainError);
    CHECK_THROWS_AS(BoundaryPair::constant(g, -INFINITY, -INFINITY), DomainError);
    try {
        BoundaryPair(GridPath(g, {0, 0, 2}), GridPath(g, {1, 1, 1}));
        FAIL("expected BoundaryOrderError");
    } catch (const BoundaryOrderError& e) {
        CHECK(e.time() == 2.0);
    }
    CHECK(BoundaryPair(GridPath(g, {0, 0, 1}), GridPath(g, {1, 3, 1})).min_gap() == 0.0);
}

TEST_CASE("csv round trip is bit exact") {
    StreamRng rng(42);
    std::vector<double> t(20), v(20);
    for (std::size_t k = 1; k < 20; ++k) {
        t[k] = t[k - 1] + rng.uniform(1e-3, 1.0);
        v[k] = rng.normal() * std::pow(10.0, rng.uniform(-30, 30));
    }
    v[3] = INFINITY;
    v[4] = -INFINITY;
    v[5] = -0.0;
    const auto p = make(t, v);
    std::stringstream ss;
    write_path_csv(ss, p);
    const auto back = read_path_csv(ss);
    for (std::size_t k = 0; k < 20; ++k) {
        CHECK(back.grid()[k] == p.grid()[k]);
        CHECK(back[k] == p[k]);
        CHECK(std::signbit(back[k]) == std::signbit(p[k]));
    }
}

TEST_CASE("csv parse errors carry line numbers") {
    auto line_of = [](const std::string& text) -> std::size_t {
        std::istringstream in(text);
        try {
            read_path_csv(in);
        } catch (const CsvParseError& e) {
            return e.line();
        }
        return 0;
    };
    CHECK(line_of("x,y\n0,1\n1,2\n") == 1);
    CHECK(line_of("t,value\n0,1\n1,abc\n") == 3);
    CHECK(line_of("t,value\n0,1\n1,2,3\n") == 3);
    CHECK(line_of("t,value\n0,1\n0.5,2\n0.5,3\n") == 4);
    CHECK(line_of("t,value\n0.1,1\n1,2\n") == 2);
    CHECK(line_of("t,value\n0,nan\n1,2\n") == 2);
    CHECK(line_of("t,value\n0,1\n1,-inf\n") == 0);
}
