#include <doctest.h>

#include <cmath>

#include "drift/dtw.hpp"
#include "oracles.hpp"

using namespace drift;
using oracles::make_series;

TEST_CASE("identical series align on the pure diagonal at distance zero") {
    const Series s = make_series({1.0, 2.0, 3.0});
    const Alignment a = align(s, s);
    CHECK(a.distance == 0.0);
    REQUIRE(a.path.size() == 3);
    CHECK(a.path[0] == std::make_pair(1, 1));
    CHECK(a.path[1] == std::make_pair(2, 2));
    CHECK(a.path[2] == std::make_pair(3, 3));
}

TEST_CASE("small alignments match exhaustive enumeration") {
    // Q=[1,3] vs R=[1,2,3]: enumeration over the 2x3 grid gives 1.
    CHECK(oracles::dtw_enumerate_min({1, 3}, {1, 2, 3}) == 1);
    CHECK(align(make_series({1.0, 3.0}), make_series({1.0, 2.0, 3.0})).distance == 1.0);

    // Q=[5] vs R=[1,2]: the only path family is (1,1),(1,2).
    CHECK(oracles::dtw_enumerate_min({5}, {1, 2}) == 7);
    const Alignment a = align(make_series({5.0}), make_series({1.0, 2.0}));
    CHECK(a.distance == 7.0);
    REQUIRE(a.path.size() == 2);
    CHECK(a.path[0] == std::make_pair(1, 1));
    CHECK(a.path[1] == std::make_pair(1, 2));
}

TEST_CASE("dp equals enumeration on random small grids, both step patterns") {
    Rng rng(71);
    int done = 0;
    while (done < 80) {
        const std::size_t nq = 1 + static_cast<std::size_t>(rng.uniform(0.0, 8.0));
        const std::size_t nr = 1 + static_cast<std::size_t>(rng.uniform(0.0, 8.0));
        std::vector<long long> qi(nq), ri(nr);
        std::vector<double> qd(nq), rd(nr);
        for (std::size_t k = 0; k < nq; ++k) {
            qi[k] = static_cast<long long>(rng.uniform(0.0, 10.999));
            qd[k] = static_cast<double>(qi[k]);
        }
        for (std::size_t k = 0; k < nr; ++k) {
            ri[k] = static_cast<long long>(rng.uniform(0.0, 10.999));
            rd[k] = static_cast<double>(ri[k]);
        }
        const Series q = make_series(qd), r = make_series(rd);

        CHECK(align(q, r).distance ==
              static_cast<double>(oracles::dtw_enumerate_min(qi, ri, 1)));

        AlignConfig diag2;
        diag2.step_pattern = StepPattern::symmetric_diag2;
        CHECK(align(q, r, diag2).distance ==
              static_cast<double>(oracles::dtw_enumerate_min(qi, ri, 2)));
        ++done;
    }
}

TEST_CASE("uniform-step distance is symmetric in its arguments") {
    Rng rng(72);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t nq = 2 + static_cast<std::size_t>(rng.uniform(0.0, 30.0));
        const std::size_t nr = 2 + static_cast<std::size_t>(rng.uniform(0.0, 30.0));
        const Series q = make_series(oracles::random_vector(rng, nq, -3.0, 3.0));
        const Series r = make_series(oracles::random_vector(rng, nr, -3.0, 3.0));
        CHECK(align(q, r).distance == doctest::Approx(align(r, q).distance).epsilon(1e-12));
        CHECK(align(q, r).distance >= 0.0);
    }
}

TEST_CASE("band constraints") {
    const Series q = make_series({1.0, 2.0, 3.0, 4.0, 5.0, 6.0});
    const Series r = make_series({1.0, 6.0});
    AlignConfig config;
    config.band_radius = 2;
    CHECK_THROWS_WITH_AS(align(q, r, config), doctest::Contains("infeasible band"),
                         Error);

    // A band at least as wide as the grid changes nothing.
    Rng rng(73);
    for (int trial = 0; trial < 20; ++trial) {
        const Series a = make_series(oracles::random_vector(rng, 12, 0.0, 5.0));
        const Series b = make_series(oracles::random_vector(rng, 9, 0.0, 5.0));
        AlignConfig wide;
        wide.band_radius = 12;
        CHECK(align(a, b, wide).distance == align(a, b).distance);
    }
}

TEST_CASE("warp_to_reference repeats and averages per the path") {
    SUBCASE("one-to-many repeats the query value") {
        const Series q = make_series({1.0, 3.0});
        const Series r = make_series({1.0, 3.0, 3.0});
        Alignment a;
        a.path = {{1, 1}, {2, 2}, {2, 3}};
        a.distance = 0.0;
        const Series w = warp_to_reference(q, r, a);
        CHECK(w.values == std::vector<double>{1.0, 3.0, 3.0});
        CHECK(w.times == r.times);
    }
    SUBCASE("identity path returns the query") {
        const Series q = make_series({4.0, 5.0, 6.0});
        const Alignment a = align(q, q);
        CHECK(warp_to_reference(q, q, a).values == q.values);
    }
    SUBCASE("many-to-one averages") {
        const Series q = make_series({0.0, 10.0});
        const Series r = make_series({5.0});
        Alignment a;
        a.path = {{1, 1}, {2, 1}};
        const Series w = warp_to_reference(q, r, a);
        REQUIRE(w.size() == 1);
        CHECK(w.values[0] == 5.0);
    }
    SUBCASE("inconsistent paths are rejected") {
        const Series q = make_series({1.0, 2.0});
        const Series r = make_series({1.0, 2.0, 3.0});
        Alignment bad;
        bad.path = {{1, 1}, {2, 2}};  // does not cover the last reference index
        CHECK_THROWS_WITH_AS(warp_to_reference(q, r, bad),
                             doctest::Contains("inconsistent"), Error);
    }
}

TEST_CASE("warped output always has reference length") {
    Rng rng(74);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t nq = 2 + static_cast<std::size_t>(rng.uniform(0.0, 40.0));
        const std::size_t nr = 2 + static_cast<std::size_t>(rng.uniform(0.0, 40.0));
        const Series q = make_series(oracles::random_vector(rng, nq, -2.0, 2.0));
        const Series r = make_series(oracles::random_vector(rng, nr, -2.0, 2.0));
        const Alignment a = align(q, r);
        CHECK(warp_to_reference(q, r, a).size() == nr);
        CHECK(a.path.front() == std::make_pair(1, 1));
        CHECK(a.path.back() ==
              std::make_pair(static_cast<int>(nq), static_cast<int>(nr)));
    }
}
