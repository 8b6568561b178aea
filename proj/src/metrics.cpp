#include "drift/metrics.hpp"

#include <cmath>
#include <cstddef>

namespace drift {

namespace {

void require_equal_length(const Series& q, const Series& r) {
    if (q.size() != r.size() || q.empty()) {
        throw Error("segments must be aligned to equal length (got " +
                    std::to_string(q.size()) + " vs " + std::to_string(r.size()) +
                    ")");
    }
}

}  // namespace

double coarse_distance(const Series& q, const Series& r, CoarseMode mode) {
    require_equal_length(q, r);
    const std::size_t n = q.size();
    double sum = 0.0;
    if (mode == CoarseMode::abs_sum) {
        for (std::size_t j = 0; j < n; ++j) {
            sum += std::abs(r.values[j] - q.values[j]);
        }
        return sum;
    }
    for (std::size_t j = 0; j < n; ++j) {
        const double d = r.values[j] - q.values[j];
        sum += d * d;
    }
    return std::sqrt(sum);
}

FineDistanceSeries fine_distance(const Series& q, const Series& r, int w) {
    require_equal_length(q, r);
    const std::size_t n = q.size();
    if (w < 1) {
        throw Error("window must be positive");
    }
    if (static_cast<std::size_t>(w) > n) {
        throw Error("window exceeds segment length (w=" + std::to_string(w) +
                    ", n=" + std::to_string(n) + ")");
    }

    FineDistanceSeries out;
    out.window = w;
    out.values.resize(n - static_cast<std::size_t>(w) + 1);

    // Rolling window sum with Neumaier compensation so long segments stay
    // within 1e-12 of a fresh per-window recomputation.
    double sum = 0.0, comp = 0.0;
    auto add = [&](double x) {
        const double t = sum + x;
        comp += (std::abs(sum) >= std::abs(x)) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    };
    for (int j = 0; j < w; ++j) {
        add(std::abs(r.values[j] - q.values[j]));
    }
    out.values[0] = 1.0 - (sum + comp);
    for (std::size_t i = 1; i < out.values.size(); ++i) {
        add(-std::abs(r.values[i - 1] - q.values[i - 1]));
        add(std::abs(r.values[i + w - 1] - q.values[i + w - 1]));
        out.values[i] = 1.0 - (sum + comp);
    }
    return out;
}

}  // namespace drift
