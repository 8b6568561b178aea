#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "drift/model.hpp"

namespace drift {

/// Step weighting for the DTW recurrence. symmetric_uniform charges every
/// visited cell its local cost once; symmetric_diag2 charges cells entered
/// diagonally twice (the common "symmetric2" pattern of DTW toolkits).
enum class StepPattern { symmetric_uniform, symmetric_diag2 };

struct AlignConfig {
    StepPattern step_pattern = StepPattern::symmetric_uniform;
    /// Sakoe-Chiba half-width in samples: only cells with |i - j| <= band
    /// are explored. Must be >= |n_q - n_r| or no path exists.
    std::optional<int> band_radius;
};

/// Optimal warping path and its accumulated cost. Indices are 1-based;
/// the path runs from (1,1) to (n_q, n_r) with steps (1,1), (1,0), (0,1).
struct Alignment {
    std::vector<std::pair<int, int>> path;  // (query_index, reference_index)
    double distance = 0.0;
};

/// Minimum-cost monotone alignment of query onto reference with local cost
/// |q_i - r_j|. Backtracking ties prefer diagonal, then vertical (query
/// advance), then horizontal, so paths are deterministic.
Alignment align(const Series& query, const Series& reference,
                const AlignConfig& config = {});

/// Project the query onto the reference timeline: output carries the
/// reference timestamps; each reference index receives the mean of all
/// query values its path pairs contain. Output length == reference length.
Series warp_to_reference(const Series& query, const Series& reference,
                         const Alignment& alignment);

}  // namespace drift
