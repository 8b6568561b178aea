#include "drift/segmentation.hpp"

#include <algorithm>

namespace drift {

namespace {

Series slice(const Series& s, std::size_t begin, std::size_t end) {
    Series out;
    out.channel = s.channel;
    out.times.assign(s.times.begin() + begin, s.times.begin() + end);
    out.values.assign(s.values.begin() + begin, s.values.begin() + end);
    return out;
}

std::size_t lower_index(const Series& s, double t) {
    return static_cast<std::size_t>(
        std::lower_bound(s.times.begin(), s.times.end(), t) - s.times.begin());
}

}  // namespace

SegmentedSeries split_segments(const Series& series, const SegmentMarkers& markers) {
    const std::size_t n = series.size();
    const std::size_t i_start = lower_index(series, markers.distraction_start);
    const std::size_t i_end = lower_index(series, markers.distraction_end);
    if (i_start == 0 || i_end <= i_start || i_end >= n) {
        throw Error("degenerate segment: markers " +
                    std::to_string(markers.distraction_start) + ".." +
                    std::to_string(markers.distraction_end) +
                    " leave an empty before/during/after split");
    }
    SegmentedSeries out;
    out.before = slice(series, 0, i_start);
    out.during = slice(series, i_start, i_end);
    out.after = slice(series, i_end, n);
    return out;
}

Series extract_feature(const Series& series, const SegmentMarkers& markers,
                       FeatureLabel label) {
    const RouteFeature* found = nullptr;
    for (const auto& f : markers.features) {
        if (f.label == label) {
            found = &f;
            break;
        }
    }
    if (!found) {
        throw Error("feature not annotated: " + to_string(label));
    }
    const std::size_t i_start = lower_index(series, found->start_s);
    const std::size_t i_end = lower_index(series, found->end_s);
    if (i_end <= i_start) {
        throw Error("degenerate segment: feature " + to_string(label) +
                    " contains no samples");
    }
    return slice(series, i_start, i_end);
}

}  // namespace drift
