#pragma once

#include <vector>

#include "drift/model.hpp"

namespace drift {

/// How the coarse distance aggregates per-point deviations. abs_sum is the
/// default (sum of |r_j - q_j|); euclidean (sqrt of the summed squares) is
/// available for sensitivity studies only.
enum class CoarseMode { abs_sum, euclidean };

/// Sliding-window deviation series: values[i] = 1 - sum of |r - q| over the
/// window starting at i. Lower values mean larger deviation; values below
/// zero occur for large windows and are preserved.
struct FineDistanceSeries {
    int window = 0;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
};

/// Coarse-grained distance between equal-length aligned segments.
double coarse_distance(const Series& q, const Series& r,
                       CoarseMode mode = CoarseMode::abs_sum);

/// Fine-grained distance: one value per window position, length n - w + 1.
FineDistanceSeries fine_distance(const Series& q, const Series& r, int w);

}  // namespace drift
