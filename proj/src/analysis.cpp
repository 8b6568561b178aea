#include "drift/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "drift/segmentation.hpp"

namespace drift {

namespace {

// First sample index (1-based) at or after time t.
int index_at_or_after(const Series& s, double t) {
    const auto it = std::lower_bound(s.times.begin(), s.times.end(), t);
    return static_cast<int>(it - s.times.begin()) + 1;
}

// Reference index paired with the given query index; the earliest pair wins.
int map_query_index(const Alignment& alignment, int query_index) {
    const auto& path = alignment.path;
    const auto it = std::lower_bound(
        path.begin(), path.end(), query_index,
        [](const std::pair<int, int>& pair, int q) { return pair.first < q; });
    if (it == path.end() || it->first != query_index) {
        throw Error("internal: query index " + std::to_string(query_index) +
                    " not covered by alignment path");
    }
    return it->second;
}

void zscore_pair(Series& q, Series& r) {
    const std::size_t n = r.size();
    double mean = 0.0;
    for (double v : r.values) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : r.values) ss += (v - mean) * (v - mean);
    const double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
    if (sd == 0.0) {
        throw Error("zero variance: constant baseline segment");
    }
    for (double& v : q.values) v = (v - mean) / sd;
    for (double& v : r.values) v = (v - mean) / sd;
}

double segment_mean(const Series& s) {
    double sum = 0.0;
    for (double v : s.values) sum += v;
    return sum / static_cast<double>(s.size());
}

double segment_variance(const Series& s, double mean) {
    if (s.size() < 2) return 0.0;
    double ss = 0.0;
    for (double v : s.values) ss += (v - mean) * (v - mean);
    return ss / static_cast<double>(s.size() - 1);
}

void warn(std::vector<std::string>* warnings, const std::string& message) {
    if (warnings) warnings->push_back(message);
}

TestResult run_paired(TestKind test, const std::vector<double>& x,
                      const std::vector<double>& y, const std::string& design) {
    TestResult result = test == TestKind::paired_t ? paired_t_test(x, y)
                                                   : wilcoxon_signed_rank(x, y);
    result.design = design;
    return result;
}

}  // namespace

SegmentDistanceReport segment_distances(const Session& session, const Session& baseline,
                                        const std::string& channel,
                                        const AnalysisConfig& config) {
    if (baseline.session_type != SessionType::DS4) {
        throw Error("baseline session must be DS4, got " +
                    to_string(baseline.session_type));
    }
    if (!session.markers) {
        throw Error("session " + to_string(session.session_type) +
                    " has no distraction markers");
    }
    const Series& query = session.channel(channel);
    const Series& reference = baseline.channel(channel);

    // 1. Whole-series alignment, then projection onto the baseline clock.
    const Alignment alignment = align(query, reference, config.align);
    const Series warped = warp_to_reference(query, reference, alignment);

    // 2. The session's markers land on the baseline timeline through the
    //    warping path, then both series split at the mapped markers.
    const auto map_time = [&](double t) {
        const int q_index = index_at_or_after(query, t);
        const int r_index = map_query_index(alignment, q_index);
        return reference.times[r_index - 1];
    };
    SegmentMarkers mapped;
    mapped.distraction_start = map_time(session.markers->distraction_start);
    mapped.distraction_end = map_time(session.markers->distraction_end);
    for (const auto& f : session.markers->features) {
        mapped.features.push_back({f.label, map_time(f.start_s), map_time(f.end_s)});
    }

    SegmentedSeries q_seg = split_segments(warped, mapped);
    SegmentedSeries r_seg = split_segments(reference, mapped);

    if (config.zscore_against_baseline) {
        zscore_pair(q_seg.before, r_seg.before);
        zscore_pair(q_seg.during, r_seg.during);
        zscore_pair(q_seg.after, r_seg.after);
    }

    // 3. Coarse and fine distances per segment pair.
    SegmentDistanceReport report;
    report.participant_id = session.participant_id;
    report.distraction_type = session.session_type;
    report.channel = channel;
    report.window = config.window;
    report.delta_before =
        coarse_distance(q_seg.before, r_seg.before, config.coarse_mode);
    report.delta_during =
        coarse_distance(q_seg.during, r_seg.during, config.coarse_mode);
    report.delta_after = coarse_distance(q_seg.after, r_seg.after, config.coarse_mode);
    report.fine_before = fine_distance(q_seg.before, r_seg.before, config.window);
    report.fine_during = fine_distance(q_seg.during, r_seg.during, config.window);
    report.fine_after = fine_distance(q_seg.after, r_seg.after, config.window);
    return report;
}

double relative_difference(double delta_before, double delta_during) {
    if (!(delta_before > 0.0)) {
        throw Error("degenerate baseline-before distance");
    }
    return 100.0 * std::abs(delta_before - delta_during) / delta_before;
}

PanelSummary panel_summary(std::vector<std::pair<std::string, double>> values,
                           SessionType distraction_type, const std::string& channel) {
    if (values.size() < 2) {
        throw Error("panel summary requires at least 2 values");
    }
    PanelSummary out;
    out.distraction_type = distraction_type;
    out.channel = channel;
    out.values = std::move(values);
    double sum = 0.0;
    for (const auto& [pid, v] : out.values) sum += v;
    out.mean = sum / static_cast<double>(out.values.size());
    double ss = 0.0;
    for (const auto& [pid, v] : out.values) ss += (v - out.mean) * (v - out.mean);
    out.stddev = std::sqrt(ss / static_cast<double>(out.values.size() - 1));
    return out;
}

std::vector<SegmentStats> segment_stats(const Session& session,
                                        const std::string& channel) {
    if (!session.markers) {
        throw Error("session " + to_string(session.session_type) +
                    " has no distraction markers");
    }
    const SegmentedSeries segs =
        split_segments(session.channel(channel), *session.markers);
    std::vector<SegmentStats> out;
    const std::pair<Segment, const Series*> parts[] = {
        {Segment::before, &segs.before},
        {Segment::during, &segs.during},
        {Segment::after, &segs.after},
    };
    for (const auto& [segment, series] : parts) {
        SegmentStats stats;
        stats.participant_id = session.participant_id;
        stats.session = session.session_type;
        stats.channel = channel;
        stats.segment = segment;
        stats.mean = segment_mean(*series);
        stats.variance = segment_variance(*series, stats.mean);
        out.push_back(stats);
    }
    return out;
}

Panel Panel::from_sessions(std::vector<Session> sessions) {
    Panel panel;
    panel.sessions = std::move(sessions);
    std::set<std::pair<std::string, SessionType>> seen;
    for (const auto& s : panel.sessions) {
        if (!seen.insert({s.participant_id, s.session_type}).second) {
            throw Error("duplicate session " + s.participant_id + " " +
                        to_string(s.session_type));
        }
    }
    return panel;
}

const Session* Panel::find(const std::string& participant_id, SessionType type) const {
    for (const auto& s : sessions) {
        if (s.participant_id == participant_id && s.session_type == type) return &s;
    }
    return nullptr;
}

std::vector<std::string> Panel::participants() const {
    std::set<std::string> ids;
    for (const auto& s : sessions) ids.insert(s.participant_id);
    return {ids.begin(), ids.end()};
}

TestResult paired_design_means(const Panel& panel, SessionType distraction,
                               const std::string& channel, TestKind test,
                               std::vector<std::string>* warnings) {
    std::vector<double> before_means, during_means;
    for (const auto& pid : panel.participants()) {
        const Session* session = panel.find(pid, distraction);
        if (!session) {
            throw Error("session " + to_string(distraction) +
                        " missing for participant " + pid);
        }
        if (!session->has_channel(channel)) {
            warn(warnings, "participant " + pid + " lacks channel " + channel +
                               "; excluded from means design");
            continue;
        }
        const auto stats = segment_stats(*session, channel);
        before_means.push_back(stats[0].mean);
        during_means.push_back(stats[1].mean);
    }
    return run_paired(test, before_means, during_means, "means");
}

TestResult paired_design_distances(const Panel& panel, SessionType distraction,
                                   const std::string& channel,
                                   const AnalysisConfig& config, TestKind test,
                                   bool allow_partial,
                                   std::vector<std::string>* warnings) {
    std::vector<double> delta_before, delta_during;
    for (const auto& pid : panel.participants()) {
        const Session* session = panel.find(pid, distraction);
        if (!session) {
            throw Error("session " + to_string(distraction) +
                        " missing for participant " + pid);
        }
        const Session* baseline = panel.find(pid, SessionType::DS4);
        if (!baseline) {
            throw Error("baseline DS4 missing for participant " + pid);
        }
        if (!session->has_channel(channel) || !baseline->has_channel(channel)) {
            warn(warnings, "participant " + pid + " lacks channel " + channel +
                               "; excluded from distances design");
            continue;
        }
        try {
            const auto report = segment_distances(*session, *baseline, channel, config);
            delta_before.push_back(report.delta_before);
            delta_during.push_back(report.delta_during);
        } catch (const Error& e) {
            if (!allow_partial) {
                throw Error("participant " + pid + ", channel " + channel + ": " +
                            e.what());
            }
            warn(warnings, "participant " + pid + " excluded from distances design: " +
                               e.what());
        }
    }
    return run_paired(test, delta_before, delta_during, "distances");
}

}  // namespace drift
