#include "drift/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "drift/parallel.hpp"

namespace drift {

namespace {

using nlohmann::ordered_json;

std::string fmt_pvalue(double p) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", p);
    return buf;
}

std::string fmt_percent(double v) {
    return std::to_string(static_cast<long long>(std::llround(v)));
}

const SegmentDistanceReport* find_report(
    const std::vector<SegmentDistanceReport>& reports, const std::string& pid,
    SessionType distraction, const std::string& channel) {
    for (const auto& r : reports) {
        if (r.participant_id == pid && r.distraction_type == distraction &&
            r.channel == channel) {
            return &r;
        }
    }
    return nullptr;
}

ordered_json test_cell_json(const PanelTestCell& cell) {
    return ordered_json{{"distraction_type", to_string(cell.distraction)},
                        {"channel", cell.channel},
                        {"test", to_string(cell.result.test)},
                        {"design", cell.result.design},
                        {"statistic", cell.result.statistic},
                        {"p_value", cell.result.p_value},
                        {"n_effective", cell.result.n_effective},
                        {"significance", significance_tier(cell.result.p_value)}};
}

}  // namespace

const std::vector<std::string>& means_design_channels() {
    static const std::vector<std::string> kChannels = {"HR", "Brake", "VS", "RPM"};
    return kChannels;
}

const std::vector<std::string>& relative_table_channels() {
    static const std::vector<std::string> kChannels = {"HR", "VS", "Brake"};
    return kChannels;
}

std::string significance_tier(double p) {
    if (p < 0.05) return "p<0.05";
    if (p < 0.10) return "p<0.10";
    return "ns";
}

std::vector<PanelTestCell> run_means_design(const Panel& panel, TestKind test,
                                            std::vector<std::string>* warnings) {
    std::vector<PanelTestCell> cells;
    for (SessionType distraction : kDistractionTypes) {
        for (const auto& channel : means_design_channels()) {
            PanelTestCell cell;
            cell.distraction = distraction;
            cell.channel = channel;
            cell.result = paired_design_means(panel, distraction, channel, test, warnings);
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

DistancesDesignOutput run_distances_design(const Panel& panel,
                                           const AnalysisConfig& config, TestKind test,
                                           bool allow_partial,
                                           std::vector<std::string>* warnings) {
    const auto participants = panel.participants();
    const auto& channels = channel_registry();

    // Flatten (distraction, channel, participant) so the expensive DTW work
    // parallelises; slots keep the merge deterministic.
    struct Task {
        SessionType distraction;
        std::string channel;
        std::string participant;
    };
    std::vector<Task> tasks;
    for (SessionType distraction : kDistractionTypes) {
        for (const auto& channel : channels) {
            for (const auto& pid : participants) {
                tasks.push_back({distraction, channel, pid});
            }
        }
    }

    // Preflight: session/baseline presence errors should surface with the
    // CLI's message regardless of scheduling.
    for (const auto& pid : participants) {
        for (SessionType distraction : kDistractionTypes) {
            if (!panel.find(pid, distraction)) {
                throw Error("session " + to_string(distraction) +
                            " missing for participant " + pid);
            }
        }
        if (!panel.find(pid, SessionType::DS4)) {
            throw Error("baseline DS4 missing for participant " + pid);
        }
    }

    std::vector<std::optional<SegmentDistanceReport>> slots(tasks.size());
    std::vector<std::string> slot_errors(tasks.size());
    std::mutex warn_mutex;
    parallel_for(tasks.size(), [&](std::size_t i) {
        const Task& task = tasks[i];
        const Session* session = panel.find(task.participant, task.distraction);
        const Session* baseline = panel.find(task.participant, SessionType::DS4);
        if (!session->has_channel(task.channel) ||
            !baseline->has_channel(task.channel)) {
            std::lock_guard<std::mutex> lock(warn_mutex);
            if (warnings) {
                warnings->push_back("participant " + task.participant +
                                    " lacks channel " + task.channel +
                                    "; excluded from distances design");
            }
            return;
        }
        try {
            slots[i] = segment_distances(*session, *baseline, task.channel, config);
        } catch (const Error& e) {
            slot_errors[i] = "participant " + task.participant + ", channel " +
                             task.channel + ": " + e.what();
        }
    });

    DistancesDesignOutput out;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (!slot_errors[i].empty()) {
            if (!allow_partial) {
                throw Error(slot_errors[i]);
            }
            if (warnings) {
                warnings->push_back("excluded from distances design: " + slot_errors[i]);
            }
            continue;
        }
        if (slots[i]) out.reports.push_back(std::move(*slots[i]));
    }

    for (SessionType distraction : kDistractionTypes) {
        for (const auto& channel : channels) {
            std::vector<double> delta_before, delta_during;
            for (const auto& pid : participants) {
                const auto* r = find_report(out.reports, pid, distraction, channel);
                if (!r) continue;
                delta_before.push_back(r->delta_before);
                delta_during.push_back(r->delta_during);
            }
            PanelTestCell cell;
            cell.distraction = distraction;
            cell.channel = channel;
            cell.result = test == TestKind::paired_t
                              ? paired_t_test(delta_before, delta_during)
                              : wilcoxon_signed_rank(delta_before, delta_during);
            cell.result.design = "distances";
            out.cells.push_back(std::move(cell));
        }
    }

    for (SessionType distraction : kDistractionTypes) {
        for (const auto& channel : relative_table_channels()) {
            std::vector<std::pair<std::string, double>> values;
            for (const auto& pid : participants) {
                const auto* r = find_report(out.reports, pid, distraction, channel);
                if (!r) continue;
                values.emplace_back(pid,
                                    relative_difference(r->delta_before, r->delta_during));
            }
            out.summaries.push_back(panel_summary(std::move(values), distraction, channel));
        }
    }
    return out;
}

std::string render_relative_table(const std::vector<SegmentDistanceReport>& reports,
                                  SessionType distraction) {
    const auto& channels = relative_table_channels();
    std::set<std::string> pid_set;
    for (const auto& r : reports) {
        if (r.distraction_type == distraction) pid_set.insert(r.participant_id);
    }

    std::ostringstream out;
    out << "participant";
    for (const auto& c : channels) out << ',' << c;
    out << '\n';

    std::map<std::string, std::vector<double>> column_values;
    for (const auto& pid : pid_set) {
        out << pid;
        for (const auto& c : channels) {
            const auto* r = find_report(reports, pid, distraction, c);
            if (!r) {
                out << ',';
                continue;
            }
            const double pct = relative_difference(r->delta_before, r->delta_during);
            column_values[c].push_back(pct);
            out << ',' << fmt_percent(pct);
        }
        out << '\n';
    }
    out << "avg";
    for (const auto& c : channels) {
        const auto& vals = column_values[c];
        double sum = 0.0;
        for (double v : vals) sum += v;
        out << ',' << fmt_percent(sum / static_cast<double>(vals.size()));
    }
    out << '\n';
    out << "stddev";
    for (const auto& c : channels) {
        const auto summary = panel_summary(
            [&] {
                std::vector<std::pair<std::string, double>> vals;
                for (const auto& pid : pid_set) {
                    const auto* r = find_report(reports, pid, distraction, c);
                    if (r) {
                        vals.emplace_back(
                            pid, relative_difference(r->delta_before, r->delta_during));
                    }
                }
                return vals;
            }(),
            distraction, c);
        out << ',' << fmt_percent(summary.stddev);
    }
    out << '\n';
    return out.str();
}

std::string render_summary_table(const std::vector<PanelSummary>& summaries) {
    const auto& channels = relative_table_channels();
    std::ostringstream out;
    out << "distraction_type";
    for (const auto& c : channels) out << ',' << c << "_mean," << c << "_stddev";
    out << '\n';
    for (SessionType distraction : kDistractionTypes) {
        out << to_string(distraction);
        for (const auto& c : channels) {
            const PanelSummary* found = nullptr;
            for (const auto& s : summaries) {
                if (s.distraction_type == distraction && s.channel == c) {
                    found = &s;
                    break;
                }
            }
            if (found) {
                out << ',' << fmt_percent(found->mean) << ',' << fmt_percent(found->stddev);
            } else {
                out << ",,";
            }
        }
        out << '\n';
    }
    return out.str();
}

std::string render_pvalue_table(const std::vector<PanelTestCell>& cells,
                                const std::vector<std::string>& channels) {
    std::ostringstream out;
    out << "distraction_type";
    for (const auto& c : channels) out << ',' << c;
    out << '\n';
    for (SessionType distraction : kDistractionTypes) {
        out << to_string(distraction);
        for (const auto& c : channels) {
            const PanelTestCell* found = nullptr;
            for (const auto& cell : cells) {
                if (cell.distraction == distraction && cell.channel == c) {
                    found = &cell;
                    break;
                }
            }
            out << ',';
            if (found) out << fmt_pvalue(found->result.p_value);
        }
        out << '\n';
    }
    return out.str();
}

std::string panel_report_json(const std::string& design, TestKind test, int window,
                              const std::vector<PanelTestCell>& cells,
                              const std::vector<PanelSummary>& summaries,
                              const std::vector<SegmentDistanceReport>& reports) {
    ordered_json j;
    j["version"] = kToolVersion;
    j["design"] = design;
    j["test"] = to_string(test);
    j["window"] = window;
    j["test_results"] = ordered_json::array();
    for (const auto& cell : cells) j["test_results"].push_back(test_cell_json(cell));
    j["panel_summaries"] = ordered_json::array();
    for (const auto& s : summaries) {
        ordered_json values = ordered_json::object();
        for (const auto& [pid, v] : s.values) values[pid] = v;
        j["panel_summaries"].push_back(
            ordered_json{{"distraction_type", to_string(s.distraction_type)},
                         {"channel", s.channel},
                         {"relative_differences_pct", values},
                         {"mean", s.mean},
                         {"stddev", s.stddev}});
    }
    j["segment_reports"] = ordered_json::array();
    for (const auto& r : reports) {
        ordered_json entry{{"participant_id", r.participant_id},
                           {"distraction_type", to_string(r.distraction_type)},
                           {"channel", r.channel},
                           {"window", r.window},
                           {"delta", ordered_json{{"before", r.delta_before},
                                                  {"during", r.delta_during},
                                                  {"after", r.delta_after}}}};
        if (r.delta_before > 0.0) {
            entry["relative_difference_pct"] =
                relative_difference(r.delta_before, r.delta_during);
        } else {
            entry["relative_difference_pct"] = nullptr;
        }
        j["segment_reports"].push_back(std::move(entry));
    }
    return j.dump(2) + "\n";
}

std::string segment_reports_json(const std::vector<SegmentDistanceReport>& reports) {
    ordered_json j;
    j["version"] = kToolVersion;
    j["reports"] = ordered_json::array();
    for (const auto& r : reports) {
        ordered_json entry{{"participant_id", r.participant_id},
                           {"distraction_type", to_string(r.distraction_type)},
                           {"channel", r.channel},
                           {"window", r.window},
                           {"delta", ordered_json{{"before", r.delta_before},
                                                  {"during", r.delta_during},
                                                  {"after", r.delta_after}}},
                           {"fine", ordered_json{{"before", r.fine_before.values},
                                                 {"during", r.fine_during.values},
                                                 {"after", r.fine_after.values}}}};
        if (r.delta_before > 0.0) {
            entry["relative_difference_pct"] =
                relative_difference(r.delta_before, r.delta_during);
        } else {
            entry["relative_difference_pct"] = nullptr;
        }
        j["reports"].push_back(std::move(entry));
    }
    return j.dump(2) + "\n";
}

}  // namespace drift
