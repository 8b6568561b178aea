#include "drift/stats.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

namespace drift {

namespace {

constexpr double kFpMin = 1e-300;

// Lentz continued fraction for the incomplete beta function.
double ibeta_cf(double a, double b, double x) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 400; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return h;
}

double sample_mean(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

std::string to_string(TestKind t) {
    return t == TestKind::paired_t ? "paired_t" : "wilcoxon_signed_rank";
}

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw Error("incomplete beta requires positive parameters");
    }
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * ibeta_cf(a, b, x) / a;
    }
    return 1.0 - front * ibeta_cf(b, a, 1.0 - x) / b;
}

double student_t_two_tailed_p(double t, int df) {
    if (df < 1) {
        throw Error("t distribution requires df >= 1");
    }
    const double v = static_cast<double>(df);
    const double p = regularized_incomplete_beta(v / 2.0, 0.5, v / (v + t * t));
    return std::min(1.0, std::max(p, std::numeric_limits<double>::min()));
}

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

double normal_quantile(double p) {
    if (!(p > 0.0) || !(p < 1.0)) {
        throw Error("normal quantile requires p in (0,1)");
    }
    // Acklam's rational approximation, then one Halley refinement step.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    constexpr double kSqrt2Pi = 2.5066282746310005024;
    const double e = normal_cdf(x) - p;
    const double u = e * kSqrt2Pi * std::exp(x * x / 2.0);
    return x - u / (1.0 + x * u / 2.0);
}

TestResult paired_t_test(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) {
        throw Error("paired test requires equal-length samples");
    }
    const std::size_t n = x.size();
    if (n < 2) {
        throw Error("paired t-test requires at least 2 pairs");
    }
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = x[i] - y[i];
    const double mean = sample_mean(d);
    double ss = 0.0;
    for (double v : d) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (sd == 0.0) {
        throw Error("degenerate paired sample: all differences identical");
    }
    TestResult out;
    out.test = TestKind::paired_t;
    out.statistic = mean / (sd / std::sqrt(static_cast<double>(n)));
    out.p_value = student_t_two_tailed_p(out.statistic, static_cast<int>(n) - 1);
    out.n_effective = static_cast<int>(n);
    return out;
}

TestResult wilcoxon_signed_rank(const std::vector<double>& x,
                                const std::vector<double>& y) {
    if (x.size() != y.size()) {
        throw Error("paired test requires equal-length samples");
    }
    std::vector<double> d;
    d.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double v = x[i] - y[i];
        if (v != 0.0) d.push_back(v);
    }
    const int n = static_cast<int>(d.size());
    if (n == 0) {
        throw Error("no nonzero differences");
    }

    // Average ranks of |d|, kept as doubled integers so tie handling and
    // enumeration stay exact.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        return std::abs(d[i]) < std::abs(d[j]);
    });
    std::vector<std::int64_t> rank2(n, 0);
    std::vector<int> tie_sizes;
    for (int i = 0; i < n;) {
        int j = i;
        while (j < n && std::abs(d[order[j]]) == std::abs(d[order[i]])) ++j;
        const std::int64_t avg2 = (i + 1) + j;  // 2 * average of ranks i+1 .. j
        for (int k = i; k < j; ++k) rank2[order[k]] = avg2;
        tie_sizes.push_back(j - i);
        i = j;
    }

    std::int64_t w2_plus = 0;
    std::int64_t total2 = 0;
    for (int i = 0; i < n; ++i) {
        total2 += rank2[i];
        if (d[i] > 0.0) w2_plus += rank2[i];
    }

    TestResult out;
    out.test = TestKind::wilcoxon_signed_rank;
    out.statistic = static_cast<double>(w2_plus) / 2.0;
    out.n_effective = n;

    if (n <= 20) {
        // Gray-code walk over all 2^n sign assignments; the running sum of
        // doubled ranks changes by one flip per step.
        const std::uint64_t count = std::uint64_t{1} << n;
        std::uint64_t ge = 0, le = 0;
        std::int64_t sum2 = 0;  // start from the all-negative assignment
        std::uint64_t mask = 0;
        if (sum2 >= w2_plus) ++ge;
        if (sum2 <= w2_plus) ++le;
        for (std::uint64_t s = 1; s < count; ++s) {
            const int k = std::countr_zero(s);
            const std::uint64_t bit = std::uint64_t{1} << k;
            mask ^= bit;
            sum2 += (mask & bit) ? rank2[k] : -rank2[k];
            if (sum2 >= w2_plus) ++ge;
            if (sum2 <= w2_plus) ++le;
        }
        const double tail = static_cast<double>(std::min(ge, le)) /
                            static_cast<double>(count);
        out.p_value = std::min(1.0, 2.0 * tail);
    } else {
        const double nn = static_cast<double>(n);
        const double mean = nn * (nn + 1.0) / 4.0;
        double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0;
        for (int t : tie_sizes) {
            const double tt = static_cast<double>(t);
            var -= (tt * tt * tt - tt) / 48.0;
        }
        const double w = static_cast<double>(w2_plus) / 2.0;
        const double delta = w - mean;
        if (delta == 0.0 || var <= 0.0) {
            out.p_value = 1.0;
        } else {
            const double cc = delta > 0.0 ? -0.5 : 0.5;
            const double z = (delta + cc) / std::sqrt(var);
            const double p = std::erfc(std::abs(z) / std::sqrt(2.0));
            out.p_value =
                std::min(1.0, std::max(p, std::numeric_limits<double>::min()));
        }
    }
    return out;
}

QqPoints qq_points(const std::vector<double>& sample) {
    const std::size_t n = sample.size();
    if (n < 3) {
        throw Error("QQ points require at least 3 observations");
    }
    std::vector<double> sorted = sample;
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() == sorted.back()) {
        throw Error("zero variance: constant sample");
    }
    QqPoints out;
    out.points.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        out.points.emplace_back(normal_quantile(p), sorted[i]);
    }
    double mx = 0.0, my = 0.0;
    for (const auto& [tq, eq] : out.points) {
        mx += tq;
        my += eq;
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (const auto& [tq, eq] : out.points) {
        sxy += (tq - mx) * (eq - my);
        sxx += (tq - mx) * (tq - mx);
        syy += (eq - my) * (eq - my);
    }
    out.r = sxy / std::sqrt(sxx * syy);
    return out;
}

}  // namespace drift
