#pragma once

#include <map>
#include <string>
#include <vector>

#include "drift/analysis.hpp"

namespace drift {

inline constexpr const char* kToolVersion = "drift 0.1.0";

/// One cell of a p-value table: a paired test for a (distraction, channel)
/// combination.
struct PanelTestCell {
    SessionType distraction = SessionType::DS1;
    std::string channel;
    TestResult result;
};

/// The channels tested in the means design (segment-mean table).
const std::vector<std::string>& means_design_channels();
/// The channels summarised in the relative-distance tables.
const std::vector<std::string>& relative_table_channels();

/// Full means-design run: every distraction type x means_design_channels().
std::vector<PanelTestCell> run_means_design(const Panel& panel, TestKind test,
                                            std::vector<std::string>* warnings = nullptr);

struct DistancesDesignOutput {
    std::vector<PanelTestCell> cells;              // distraction x registry channel
    std::vector<SegmentDistanceReport> reports;    // per participant cell
    std::vector<PanelSummary> summaries;           // relative_table_channels()
};

/// Full distances-design run: per-participant segment distances against the
/// DS4 baselines (parallelised per participant/channel), paired tests per
/// cell, and relative-difference summaries.
DistancesDesignOutput run_distances_design(const Panel& panel,
                                           const AnalysisConfig& config, TestKind test,
                                           bool allow_partial = false,
                                           std::vector<std::string>* warnings = nullptr);

// CSV table renderers. Percent values are rounded half-up to integers at
// render time only; p-values keep three significant digits.
std::string render_relative_table(const std::vector<SegmentDistanceReport>& reports,
                                  SessionType distraction);
std::string render_summary_table(const std::vector<PanelSummary>& summaries);
std::string render_pvalue_table(const std::vector<PanelTestCell>& cells,
                                const std::vector<std::string>& channels);

// JSON reports (stable key order, version-stamped).
std::string panel_report_json(const std::string& design, TestKind test, int window,
                              const std::vector<PanelTestCell>& cells,
                              const std::vector<PanelSummary>& summaries,
                              const std::vector<SegmentDistanceReport>& reports);
std::string segment_reports_json(const std::vector<SegmentDistanceReport>& reports);

/// Significance tier for a p-value: "p<0.05", "p<0.10", or "ns".
std::string significance_tier(double p);

}  // namespace drift
