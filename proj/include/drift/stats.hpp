#pragma once

#include <string>
#include <utility>
#include <vector>

#include "drift/model.hpp"

namespace drift {

enum class TestKind { paired_t, wilcoxon_signed_rank };

std::string to_string(TestKind t);

/// Outcome of one paired test. n_effective counts the pairs actually used
/// (Wilcoxon drops zero differences).
struct TestResult {
    TestKind test = TestKind::paired_t;
    double statistic = 0.0;
    double p_value = 1.0;
    int n_effective = 0;
    std::string design;
};

/// Two-tailed paired t-test on H0: mean(x - y) == 0. The statistic is
/// t = mean(d) / (sd(d) / sqrt(n)) with df = n - 1.
TestResult paired_t_test(const std::vector<double>& x, const std::vector<double>& y);

/// Two-tailed Wilcoxon signed-rank test. Zero differences are dropped,
/// tied |d| get average ranks; exact p by sign enumeration when the
/// effective n is at most 20, else a normal approximation with continuity
/// correction and tie-corrected variance. The statistic is W+ (sum of
/// ranks of positive differences).
TestResult wilcoxon_signed_rank(const std::vector<double>& x,
                                const std::vector<double>& y);

/// QQ-plot points against the standard normal at probability points
/// (i - 0.5) / n, plus the Pearson correlation of the point set.
struct QqPoints {
    std::vector<std::pair<double, double>> points;  // (theoretical, empirical)
    double r = 0.0;
};

QqPoints qq_points(const std::vector<double>& sample);

// Numeric kernels, exposed for verification against quadrature.
double regularized_incomplete_beta(double a, double b, double x);
double student_t_two_tailed_p(double t, int df);
double normal_cdf(double z);
double normal_quantile(double p);

}  // namespace drift
