#include "drift/model.hpp"

#include <algorithm>
#include <cmath>

namespace drift {

namespace {

std::string prefix(const std::string& where) {
    return where.empty() ? std::string{} : where + ": ";
}

}  // namespace

void validate_series(const Series& s, const std::string& where) {
    if (s.values.empty() || s.times.empty()) {
        throw Error(prefix(where) + "empty series for channel '" + s.channel + "'");
    }
    if (s.times.size() != s.values.size()) {
        throw Error(prefix(where) + "times/values size mismatch for channel '" +
                    s.channel + "'");
    }
    for (std::size_t i = 1; i < s.times.size(); ++i) {
        if (!(s.times[i] > s.times[i - 1])) {
            throw Error(prefix(where) + "non-monotonic timestamps in channel '" +
                        s.channel + "'");
        }
    }
    if (s.times.size() >= 3) {
        const double step0 =
            (s.times.back() - s.times.front()) / static_cast<double>(s.times.size() - 1);
        for (std::size_t i = 1; i < s.times.size(); ++i) {
            const double step = s.times[i] - s.times[i - 1];
            if (std::abs(step - step0) > 1e-9 * std::max(std::abs(step0), 1e-300)) {
                throw Error(prefix(where) + "non-uniform time step in channel '" +
                            s.channel + "'");
            }
        }
    }
}

std::string to_string(SessionType t) {
    switch (t) {
        case SessionType::DS1: return "DS1";
        case SessionType::DS2: return "DS2";
        case SessionType::DS3: return "DS3";
        case SessionType::DS4: return "DS4";
        case SessionType::DS5: return "DS5";
    }
    throw Error("invalid session type");
}

SessionType session_type_from_string(std::string_view s) {
    if (s == "DS1") return SessionType::DS1;
    if (s == "DS2") return SessionType::DS2;
    if (s == "DS3") return SessionType::DS3;
    if (s == "DS4") return SessionType::DS4;
    if (s == "DS5") return SessionType::DS5;
    throw Error("invalid session type '" + std::string(s) + "'");
}

std::string to_string(FeatureLabel l) {
    return l == FeatureLabel::straight ? "straight" : "curve";
}

FeatureLabel feature_label_from_string(std::string_view s) {
    if (s == "straight") return FeatureLabel::straight;
    if (s == "curve") return FeatureLabel::curve;
    throw Error("invalid feature label '" + std::string(s) + "'");
}

void validate_markers(const SegmentMarkers& m, double session_start,
                      double session_end, const std::string& where) {
    if (!(session_start < m.distraction_start &&
          m.distraction_start < m.distraction_end &&
          m.distraction_end < session_end)) {
        throw Error(prefix(where) + "markers outside session");
    }
    std::vector<RouteFeature> sorted = m.features;
    std::sort(sorted.begin(), sorted.end(),
              [](const RouteFeature& a, const RouteFeature& b) {
                  return a.start_s < b.start_s;
              });
    double prev_end = m.distraction_start;
    for (const auto& f : sorted) {
        if (!(f.start_s < f.end_s)) {
            throw Error(prefix(where) + "empty route feature interval");
        }
        if (f.start_s < m.distraction_start || f.end_s > m.distraction_end) {
            throw Error(prefix(where) + "route feature outside distraction window");
        }
        if (f.start_s < prev_end) {
            throw Error(prefix(where) + "overlapping route features");
        }
        prev_end = f.end_s;
    }
}

const Series& Session::channel(const std::string& name) const {
    auto it = channels.find(name);
    if (it == channels.end()) {
        throw Error("channel missing: " + name);
    }
    return it->second;
}

void validate_session(const Session& s, const std::string& where) {
    if (s.channels.empty()) {
        throw Error(prefix(where) + "session has no channels");
    }
    const Series* first = nullptr;
    for (const auto& [name, series] : s.channels) {
        if (series.channel != name) {
            throw Error(prefix(where) + "channel key/name mismatch for '" + name + "'");
        }
        validate_series(series, where);
        if (!first) {
            first = &series;
        } else if (series.times != first->times) {
            throw Error(prefix(where) + "channels do not share a common clock");
        }
    }
    if (s.session_type == SessionType::DS4) {
        if (s.markers.has_value()) {
            throw Error(prefix(where) + "baseline session DS4 must not carry markers");
        }
    } else {
        if (!s.markers.has_value()) {
            throw Error(prefix(where) + "missing markers for session type " +
                        to_string(s.session_type));
        }
        validate_markers(*s.markers, first->start_time(), first->end_time(), where);
    }
}

std::string to_string(Segment s) {
    switch (s) {
        case Segment::before: return "before";
        case Segment::during: return "during";
        case Segment::after: return "after";
    }
    throw Error("invalid segment");
}

bool is_registered_channel(const std::string& name) {
    const auto& reg = channel_registry();
    return std::find(reg.begin(), reg.end(), name) != reg.end();
}

}  // namespace drift
