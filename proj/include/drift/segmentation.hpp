#pragma once

#include "drift/model.hpp"

namespace drift {

/// Partition a series around the distraction window. A sample at time t
/// falls in `during` iff start <= t < end, in `before` iff t < start, and
/// in `after` otherwise; the three parts cover every sample exactly once.
SegmentedSeries split_segments(const Series& series, const SegmentMarkers& markers);

/// The samples of one annotated route feature (half-open interval).
Series extract_feature(const Series& series, const SegmentMarkers& markers,
                       FeatureLabel label);

}  // namespace drift
