#include "drift/dtw.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

namespace drift {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Backtrack directions, encoded per cell. kNone marks unreachable cells.
enum Step : std::uint8_t { kNone = 0, kDiag = 1, kVert = 2, kHorz = 3 };

}  // namespace

Alignment align(const Series& query, const Series& reference,
                const AlignConfig& config) {
    const std::size_t nq = query.size();
    const std::size_t nr = reference.size();
    if (nq == 0 || nr == 0) {
        throw Error("cannot align empty series");
    }
    const long length_gap =
        std::labs(static_cast<long>(nq) - static_cast<long>(nr));
    if (config.band_radius && *config.band_radius < length_gap) {
        throw Error("infeasible band: radius " + std::to_string(*config.band_radius) +
                    " < length difference " + std::to_string(length_gap));
    }
    const long band = config.band_radius ? *config.band_radius
                                         : static_cast<long>(std::max(nq, nr));
    const double diag_w =
        config.step_pattern == StepPattern::symmetric_diag2 ? 2.0 : 1.0;

    const double* q = query.values.data();
    const double* r = reference.values.data();

    // Rolling-row DP for costs plus a full step matrix for backtracking.
    std::vector<double> prev(nr + 1, kInf), curr(nr + 1, kInf);
    std::vector<std::uint8_t> steps(nq * nr, kNone);

    for (std::size_t i = 1; i <= nq; ++i) {
        std::fill(curr.begin(), curr.end(), kInf);
        const double qi = q[i - 1];
        const long jlo = std::max<long>(1, static_cast<long>(i) - band);
        const long jhi = std::min<long>(static_cast<long>(nr),
                                        static_cast<long>(i) + band);
        std::uint8_t* step_row = steps.data() + (i - 1) * nr;
        for (long j = jlo; j <= jhi; ++j) {
            const double cost = std::abs(qi - r[j - 1]);
            double best;
            std::uint8_t dir;
            if (i == 1 && j == 1) {
                // First cell always contributes its local cost with weight 1.
                curr[1] = cost;
                step_row[0] = kNone;
                continue;
            }
            const double diag = prev[j - 1] + diag_w * cost;
            const double vert = prev[j] + cost;
            const double horz = curr[j - 1] + cost;
            // Tie-break: diagonal, then vertical, then horizontal.
            best = diag;
            dir = kDiag;
            if (vert < best) {
                best = vert;
                dir = kVert;
            }
            if (horz < best) {
                best = horz;
                dir = kHorz;
            }
            curr[j] = best;
            step_row[j - 1] = dir;
        }
        std::swap(prev, curr);
    }

    const double total = prev[nr];
    if (!std::isfinite(total)) {
        throw Error("infeasible band: no monotone path fits the band");
    }

    Alignment out;
    out.distance = total;
    std::size_t i = nq, j = nr;
    out.path.reserve(nq + nr);
    while (true) {
        out.path.emplace_back(static_cast<int>(i), static_cast<int>(j));
        if (i == 1 && j == 1) break;
        switch (steps[(i - 1) * nr + (j - 1)]) {
            case kDiag: --i; --j; break;
            case kVert: --i; break;
            case kHorz: --j; break;
            default:
                throw Error("internal: broken backtrack chain");
        }
    }
    std::reverse(out.path.begin(), out.path.end());
    return out;
}

Series warp_to_reference(const Series& query, const Series& reference,
                         const Alignment& alignment) {
    const std::size_t nq = query.size();
    const std::size_t nr = reference.size();
    const auto& path = alignment.path;
    if (path.empty() || path.front() != std::make_pair(1, 1) ||
        path.back() != std::make_pair(static_cast<int>(nq), static_cast<int>(nr))) {
        throw Error("alignment path inconsistent with series lengths");
    }

    Series out;
    out.channel = query.channel;
    out.times = reference.times;
    out.values.assign(nr, 0.0);
    std::vector<int> hits(nr, 0);

    int last_q = 0, last_r = 0;
    for (const auto& [qi, rj] : path) {
        if (qi < 1 || rj < 1 || qi > static_cast<int>(nq) ||
            rj > static_cast<int>(nr) || qi < last_q || rj < last_r ||
            (qi == last_q && rj == last_r)) {
            throw Error("alignment path inconsistent with series lengths");
        }
        out.values[rj - 1] += query.values[qi - 1];
        hits[rj - 1] += 1;
        last_q = qi;
        last_r = rj;
    }
    for (std::size_t j = 0; j < nr; ++j) {
        if (hits[j] == 0) {
            throw Error("alignment path inconsistent with series lengths");
        }
        out.values[j] /= hits[j];
    }
    return out;
}

}  // namespace drift
