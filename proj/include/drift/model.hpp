#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace drift {

/// Library-level error. The CLI maps these to exit code 2 (data/validation
/// errors); anything else is a usage or internal error.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// One uniformly sampled sensor channel: timestamps in seconds plus values
/// in channel units (km/h, bpm, pedal fraction, degrees, m/s^2, ...).
struct Series {
    std::string channel;
    std::vector<double> times;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    bool empty() const { return values.empty(); }
    double start_time() const { return times.front(); }
    double end_time() const { return times.back(); }
};

// times strictly increasing, |times| == |values| >= 1, step uniform within
// 1e-9 relative tolerance. Throws drift::Error on violation; `where` names
// the offending input in the message.
void validate_series(const Series& s, const std::string& where = {});

enum class SessionType { DS1, DS2, DS3, DS4, DS5 };

std::string to_string(SessionType t);
SessionType session_type_from_string(std::string_view s);

/// The session types that carry a distraction (everything except the
/// DS4 baseline).
inline constexpr SessionType kDistractionTypes[] = {
    SessionType::DS1, SessionType::DS2, SessionType::DS3, SessionType::DS5};

enum class FeatureLabel { straight, curve };

std::string to_string(FeatureLabel l);
FeatureLabel feature_label_from_string(std::string_view s);

/// A stretch of road inside the distraction window (straight vs curve).
struct RouteFeature {
    FeatureLabel label = FeatureLabel::straight;
    double start_s = 0.0;
    double end_s = 0.0;
};

/// Distraction start/end timestamps plus optional route-feature annotations.
struct SegmentMarkers {
    double distraction_start = 0.0;
    double distraction_end = 0.0;
    std::vector<RouteFeature> features;
};

// session_start < distraction_start < distraction_end < session_end;
// feature intervals lie within the distraction window and do not overlap.
void validate_markers(const SegmentMarkers& m, double session_start,
                      double session_end, const std::string& where = {});

/// A full driving session: all channels share one clock. DS4 (the baseline)
/// carries no markers; every other session type must have them.
struct Session {
    std::string participant_id;
    SessionType session_type = SessionType::DS4;
    std::map<std::string, Series> channels;
    std::optional<SegmentMarkers> markers;

    const Series& channel(const std::string& name) const;
    bool has_channel(const std::string& name) const {
        return channels.count(name) != 0;
    }
};

void validate_session(const Session& s, const std::string& where = {});

/// A series split around the distraction window. Concatenating the three
/// parts reproduces the original samples exactly, in order.
struct SegmentedSeries {
    Series before;
    Series during;
    Series after;
};

enum class Segment { before, during, after };

std::string to_string(Segment s);

/// The sensor channels reported by default, in canonical table order.
/// Unknown channels are carried through untouched but excluded from
/// default reports.
inline const std::vector<std::string>& channel_registry() {
    static const std::vector<std::string> kRegistry = {
        "HR",     "Gear",   "Brake",   "Accelerator", "Clutch", "Steering",
        "AccLat", "AccLong", "LanePos", "VS",          "RPM"};
    return kRegistry;
}

bool is_registered_channel(const std::string& name);

}  // namespace drift
