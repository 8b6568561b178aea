#pragma once

#include <string>
#include <utility>
#include <vector>

#include "drift/dtw.hpp"
#include "drift/metrics.hpp"
#include "drift/model.hpp"
#include "drift/stats.hpp"

namespace drift {

struct AnalysisConfig {
    int window = 10;
    AlignConfig align;
    CoarseMode coarse_mode = CoarseMode::abs_sum;
    /// Z-score each segment pair by the baseline segment's mean/sd before
    /// computing distances. Off by default: the relative difference is
    /// already scale-free.
    bool zscore_against_baseline = false;
};

/// Per-channel coarse and fine distances from the baseline for the three
/// segments of one session.
struct SegmentDistanceReport {
    std::string participant_id;
    SessionType distraction_type = SessionType::DS1;
    std::string channel;
    int window = 0;
    double delta_before = 0.0;
    double delta_during = 0.0;
    double delta_after = 0.0;
    FineDistanceSeries fine_before;
    FineDistanceSeries fine_during;
    FineDistanceSeries fine_after;
};

/// The full per-sequence procedure: DTW-align the session channel to the
/// baseline channel, project it onto the baseline timeline, split both at
/// the session markers mapped through the warping path, then compute the
/// coarse and fine distances per segment pair.
SegmentDistanceReport segment_distances(const Session& session, const Session& baseline,
                                        const std::string& channel,
                                        const AnalysisConfig& config = {});

/// 100 * |delta_before - delta_during| / delta_before.
double relative_difference(double delta_before, double delta_during);

/// Cross-participant spread of relative differences for one distraction
/// type and channel.
struct PanelSummary {
    SessionType distraction_type = SessionType::DS1;
    std::string channel;
    std::vector<std::pair<std::string, double>> values;  // participant, percent
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation, n-1 denominator
};

PanelSummary panel_summary(std::vector<std::pair<std::string, double>> values,
                           SessionType distraction_type, const std::string& channel);

struct SegmentStats {
    std::string participant_id;
    SessionType session = SessionType::DS1;
    std::string channel;
    Segment segment = Segment::before;
    double mean = 0.0;
    double variance = 0.0;  // sample variance, n-1 denominator
};

/// Mean and variance of the channel per before/during/after segment, on
/// the session's own (unaligned) clock.
std::vector<SegmentStats> segment_stats(const Session& session,
                                        const std::string& channel);

/// A loaded collection of sessions, usually one panel directory.
struct Panel {
    std::vector<Session> sessions;

    static Panel from_sessions(std::vector<Session> sessions);
    const Session* find(const std::string& participant_id, SessionType type) const;
    std::vector<std::string> participants() const;
};

/// Paired design on segment means: each participant contributes the
/// before/during means of the (unaligned) distraction session. Baselines
/// are never touched, so the design runs on panels without any DS4.
TestResult paired_design_means(const Panel& panel, SessionType distraction,
                               const std::string& channel,
                               TestKind test = TestKind::paired_t,
                               std::vector<std::string>* warnings = nullptr);

/// Paired design on baseline distances: each participant contributes the
/// (delta_before, delta_during) pair from segment_distances against their
/// own DS4 baseline. Participants failing the distance computation abort
/// the run unless allow_partial is set.
TestResult paired_design_distances(const Panel& panel, SessionType distraction,
                                   const std::string& channel,
                                   const AnalysisConfig& config = {},
                                   TestKind test = TestKind::wilcoxon_signed_rank,
                                   bool allow_partial = false,
                                   std::vector<std::string>* warnings = nullptr);

}  // namespace drift
