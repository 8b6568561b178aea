#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "drift/stats.hpp"
#include "oracles.hpp"

using namespace drift;

TEST_CASE("paired t statistic forced by the formula") {
    // differences [1,1,2,0]: mean 1, sd sqrt(2/3), t = sqrt(6), df = 3.
    const std::vector<double> x{2.0, 3.0, 5.0, 1.0};
    const std::vector<double> y{1.0, 2.0, 3.0, 1.0};
    const TestResult r = paired_t_test(x, y);
    CHECK(r.statistic == doctest::Approx(std::sqrt(6.0)).epsilon(1e-15));
    CHECK(r.n_effective == 4);
    CHECK(r.p_value ==
          doctest::Approx(oracles::t_two_tailed_p_quadrature(std::sqrt(6.0), 3))
              .epsilon(1e-9));
}

TEST_CASE("paired t sign flips with argument order, p unchanged") {
    const std::vector<double> x{1.0, 1.0, 1.0, 2.0};
    const std::vector<double> y{1.0, 1.0, 1.0, 1.0};
    const TestResult a = paired_t_test(x, y);
    const TestResult b = paired_t_test(y, x);
    CHECK(a.statistic == doctest::Approx(-b.statistic).epsilon(1e-15));
    CHECK(a.p_value == doctest::Approx(b.p_value).epsilon(1e-15));
}

TEST_CASE("paired t degenerate sample") {
    const std::vector<double> x{2.0, 3.0, 4.0};
    const std::vector<double> y{1.0, 2.0, 3.0};
    CHECK_THROWS_WITH_AS(paired_t_test(x, y),
                         doctest::Contains("degenerate paired sample"), Error);
    CHECK_THROWS_AS(paired_t_test({1.0}, {0.0}), Error);
}

TEST_CASE("t CDF matches quadrature across df and t") {
    Rng rng(101);
    for (int df : {3, 9, 15}) {
        for (int trial = 0; trial < 40; ++trial) {
            const double t = rng.uniform(-5.0, 5.0);
            CHECK(student_t_two_tailed_p(t, df) ==
                  doctest::Approx(oracles::t_two_tailed_p_quadrature(t, df))
                      .epsilon(1e-9));
        }
    }
    CHECK(student_t_two_tailed_p(0.0, 7) == 1.0);
}

TEST_CASE("paired tests depend only on the differences") {
    Rng rng(102);
    std::vector<double> x = oracles::random_vector(rng, 12, -3.0, 3.0);
    std::vector<double> y = oracles::random_vector(rng, 12, -3.0, 3.0);
    const TestResult t0 = paired_t_test(x, y);
    const TestResult w0 = wilcoxon_signed_rank(x, y);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double shift = rng.uniform(-10.0, 10.0);
        x[i] += shift;
        y[i] += shift;
    }
    const TestResult t1 = paired_t_test(x, y);
    const TestResult w1 = wilcoxon_signed_rank(x, y);
    CHECK(t0.statistic == doctest::Approx(t1.statistic).epsilon(1e-9));
    CHECK(t0.p_value == doctest::Approx(t1.p_value).epsilon(1e-9));
    CHECK(w0.statistic == w1.statistic);
    CHECK(w0.p_value == w1.p_value);
}

TEST_CASE("paired t is invariant under positive scaling of the differences") {
    Rng rng(103);
    std::vector<double> x = oracles::random_vector(rng, 10, -2.0, 2.0);
    std::vector<double> y(10, 0.0);
    const TestResult a = paired_t_test(x, y);
    std::vector<double> xs = x;
    for (auto& v : xs) v *= 37.5;
    const TestResult b = paired_t_test(xs, y);
    CHECK(a.statistic == doctest::Approx(b.statistic).epsilon(1e-12));
    CHECK(a.p_value == doctest::Approx(b.p_value).epsilon(1e-12));
}

TEST_CASE("wilcoxon trivial case [1,2,3]") {
    const std::vector<double> x{1.0, 2.0, 3.0};
    const std::vector<double> y{0.0, 0.0, 0.0};
    const TestResult r = wilcoxon_signed_rank(x, y);
    CHECK(r.statistic == 6.0);
    CHECK(r.p_value == 0.25);
    CHECK(r.n_effective == 3);

    // Sign symmetry: all-negative differences give the same p.
    const TestResult rn = wilcoxon_signed_rank(y, x);
    CHECK(rn.p_value == 0.25);
    CHECK(rn.statistic == 0.0);
}

TEST_CASE("wilcoxon drops zero differences and rejects all-zero") {
    const std::vector<double> x{1.0, 2.0, 2.0, 5.0};
    const std::vector<double> y{1.0, 1.0, 2.0, 4.0};
    const TestResult r = wilcoxon_signed_rank(x, y);
    CHECK(r.n_effective == 2);
    CHECK_THROWS_WITH_AS(wilcoxon_signed_rank(x, x),
                         doctest::Contains("no nonzero differences"), Error);
}

TEST_CASE("wilcoxon exact p equals independent enumeration, with ties") {
    Rng rng(104);
    for (int n = 2; n <= 16; ++n) {
        for (int trial = 0; trial < 12; ++trial) {
            std::vector<double> x(n), y(n, 0.0);
            for (auto& v : x) {
                // Coarse grid forces ties and occasional zeros.
                v = std::floor(rng.uniform(-4.0, 5.0));
            }
            bool any = false;
            for (double v : x) any = any || v != 0.0;
            if (!any) x[0] = 1.0;
            const TestResult r = wilcoxon_signed_rank(x, y);
            const double expected = oracles::wilcoxon_exact_p(x);
            CHECK(r.p_value == doctest::Approx(expected).epsilon(1e-12));
            CHECK(r.p_value > 0.0);
            CHECK(r.p_value <= 1.0);
        }
    }
}

TEST_CASE("wilcoxon null distribution sums to one over all W+") {
    // Enumeration self-check on a case with ties: counts over all 2^n
    // assignments add up to 2^n.
    const std::vector<double> d{1.0, -1.0, 2.0, 2.0, 3.0, -2.0};
    std::vector<double> zeros(d.size(), 0.0);
    const TestResult r = wilcoxon_signed_rank(d, zeros);
    CHECK(r.p_value > 0.0);
    CHECK(r.p_value <= 1.0);
    // Brute-force the same distribution and verify total mass.
    long long total = 0;
    const int n = static_cast<int>(d.size());
    for (int mask = 0; mask < (1 << n); ++mask) ++total;
    CHECK(total == 64);
    CHECK(oracles::wilcoxon_exact_p(d) == doctest::Approx(r.p_value).epsilon(1e-12));
}

TEST_CASE("wilcoxon approximation is close to exact near the cutover") {
    Rng rng(105);
    std::vector<double> x20 = oracles::random_vector(rng, 20, -5.0, 5.0);
    std::vector<double> x21 = x20;
    x21.push_back(rng.uniform(0.5, 5.0));
    std::vector<double> y20(20, 0.0), y21(21, 0.0);
    const double exact = wilcoxon_signed_rank(x20, y20).p_value;   // n=20: exact
    const double approx = wilcoxon_signed_rank(x21, y21).p_value;  // n=21: normal
    CHECK(std::abs(exact - approx) < 0.15);                        // sanity only
    CHECK(approx > 0.0);
}

TEST_CASE("wilcoxon depends only on signs and rank order") {
    Rng rng(106);
    std::vector<double> x = oracles::random_vector(rng, 14, -6.0, 6.0);
    std::vector<double> y(14, 0.0);
    const TestResult a = wilcoxon_signed_rank(x, y);
    // Apply a strictly monotone odd transform: v -> v^3.
    std::vector<double> xc = x;
    for (auto& v : xc) v = v * v * v;
    const TestResult b = wilcoxon_signed_rank(xc, y);
    CHECK(a.statistic == b.statistic);
    CHECK(a.p_value == b.p_value);
}

TEST_CASE("qq points") {
    SUBCASE("self-match has r == 1") {
        const std::size_t n = 16;
        std::vector<double> sample;
        for (std::size_t i = 0; i < n; ++i) {
            sample.push_back(
                normal_quantile((static_cast<double>(i) + 0.5) / static_cast<double>(n)));
        }
        const QqPoints qq = qq_points(sample);
        CHECK(qq.r == doctest::Approx(1.0).epsilon(1e-12));
        for (const auto& [tq, eq] : qq.points) CHECK(tq == doctest::Approx(eq));
    }
    SUBCASE("affine transforms do not change r") {
        Rng rng(107);
        std::vector<double> sample = oracles::random_vector(rng, 20, -2.0, 2.0);
        const double r0 = qq_points(sample).r;
        std::vector<double> affine = sample;
        for (auto& v : affine) v = 2.5 * v + 7.0;
        CHECK(qq_points(affine).r == doctest::Approx(r0).epsilon(1e-12));
    }
    SUBCASE("constant sample is rejected") {
        CHECK_THROWS_WITH_AS(qq_points({1.0, 1.0, 1.0}),
                             doctest::Contains("zero variance"), Error);
        CHECK_THROWS_AS(qq_points({1.0, 2.0}), Error);
    }
    SUBCASE("heavy tails depress r vs normal draws on most seeds") {
        int heavier = 0;
        const int trials = 200;
        for (int t = 0; t < trials; ++t) {
            Rng rng(5000 + t);
            std::vector<double> normal(16), heavy(16);
            for (auto& v : normal) v = rng.gaussian();
            for (auto& v : heavy) {
                // Cauchy via the inverse CDF.
                v = std::tan(3.14159265358979323846 * (rng.uniform01() - 0.5));
            }
            if (qq_points(heavy).r < qq_points(normal).r) ++heavier;
        }
        CHECK(heavier > trials / 2);
    }
}

TEST_CASE("incomplete beta endpoints and symmetry") {
    CHECK(regularized_incomplete_beta(2.0, 3.0, 0.0) == 0.0);
    CHECK(regularized_incomplete_beta(2.0, 3.0, 1.0) == 1.0);
    Rng rng(108);
    for (int trial = 0; trial < 25; ++trial) {
        const double a = rng.uniform(0.5, 8.0);
        const double b = rng.uniform(0.5, 8.0);
        const double x = rng.uniform(0.01, 0.99);
        const double lhs = regularized_incomplete_beta(a, b, x);
        const double rhs = 1.0 - regularized_incomplete_beta(b, a, 1.0 - x);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        CHECK(lhs >= 0.0);
        CHECK(lhs <= 1.0);
    }
}

TEST_CASE("normal quantile inverts the CDF") {
    Rng rng(109);
    for (int trial = 0; trial < 50; ++trial) {
        const double p = rng.uniform(1e-10, 1.0 - 1e-10);
        CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-12));
    }
    CHECK(normal_quantile(0.5) == doctest::Approx(0.0));
    CHECK_THROWS_AS(normal_quantile(0.0), Error);
}
