// drift: quantify how far driving behaviour under cognitive distraction
// deviates from the same driver's distraction-free baseline.
//
// Subcommands: simulate, align, distances, analyze, qq.
// Exit codes: 0 success, 1 usage error, 2 data/validation error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "drift/analysis.hpp"
#include "drift/dtw.hpp"
#include "drift/io.hpp"
#include "drift/model.hpp"
#include "drift/report.hpp"
#include "drift/simgen.hpp"

namespace fs = std::filesystem;

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw drift::Error("cannot write " + path.string());
    out << text;
}

drift::Session load_session_auto(const std::string& data,
                                 const std::string& meta_override) {
    const fs::path data_path(data);
    const fs::path meta_path =
        meta_override.empty() ? drift::meta_path_for(data_path) : fs::path(meta_override);
    return drift::load_session(data_path, meta_path);
}

// "VS:-0.2,HR:+10,Steering:x1.5,ramp:5" -> effect fields.
drift::DistractionEffect parse_effect(const std::string& spec) {
    drift::DistractionEffect effect;
    if (spec.empty()) return effect;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            throw CLI::ValidationError("--effect", "expected '<channel>:<value>' items");
        }
        const std::string key = item.substr(0, colon);
        std::string value = item.substr(colon + 1);
        try {
            if (key == "VS") {
                effect.speed_shift = std::stod(value);
            } else if (key == "HR") {
                effect.hr_shift_bpm = std::stod(value);
            } else if (key == "Steering") {
                if (!value.empty() && value.front() == 'x') value.erase(0, 1);
                effect.steering_noise_multiplier = std::stod(value);
            } else if (key == "ramp") {
                effect.onset_ramp_s = std::stod(value);
            } else {
                throw CLI::ValidationError("--effect", "unknown effect key '" + key +
                                                           "' (use VS, HR, Steering, ramp)");
            }
        } catch (const std::invalid_argument&) {
            throw CLI::ValidationError("--effect", "bad number in '" + item + "'");
        }
    }
    return effect;
}

drift::TestKind parse_test(const std::string& name) {
    if (name == "ttest") return drift::TestKind::paired_t;
    if (name == "wilcoxon") return drift::TestKind::wilcoxon_signed_rank;
    throw CLI::ValidationError("--test", "expected ttest or wilcoxon");
}

std::string path_csv_of(const drift::Alignment& alignment) {
    std::string out = "query_index,reference_index\n";
    for (const auto& [q, r] : alignment.path) {
        out += std::to_string(q);
        out += ',';
        out += std::to_string(r);
        out += '\n';
    }
    return out;
}

std::string series_csv_of(const drift::Series& series) {
    std::string out = "t," + series.channel + "\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        out += fmt17(series.times[i]);
        out += ',';
        out += fmt17(series.values[i]);
        out += '\n';
    }
    return out;
}

std::string fine_csv_of(const drift::FineDistanceSeries& fine) {
    std::string out = "i,s_i\n";
    for (std::size_t i = 0; i < fine.values.size(); ++i) {
        out += std::to_string(i + 1);
        out += ',';
        out += fmt17(fine.values[i]);
        out += '\n';
    }
    return out;
}

fs::path with_suffix(const fs::path& base, const std::string& suffix) {
    fs::path p = base;
    const std::string ext = p.extension().string();
    p.replace_extension();
    p += suffix;
    p += ext.empty() ? std::string(".csv") : ext;
    return p;
}

struct CliOptions {
    // simulate
    int participants = 16;
    std::uint64_t seed = 42;
    std::string effect_spec;
    std::string out_dir;
    double before_s = 120.0, during_s = 180.0, after_s = 120.0, rate_hz = 10.0;
    // align / distances
    std::string baseline_file, session_file, baseline_meta, session_meta;
    std::string channel;
    bool all_channels = false;
    int band = -1;
    std::string step = "symmetric_uniform";
    int window = 10;
    std::string out_file;
    // analyze / qq
    std::string panel_dir;
    std::string design = "distances";
    std::string test_name;
    bool allow_partial = false;
    std::string segment = "before";
    std::string distraction = "DS1";
};

int run_simulate(const CliOptions& opt) {
    std::map<drift::SessionType, drift::DistractionEffect> effects;
    const drift::DistractionEffect effect = parse_effect(opt.effect_spec);
    for (drift::SessionType t : drift::kDistractionTypes) effects[t] = effect;
    drift::SessionDurations durations{opt.before_s, opt.during_s, opt.after_s,
                                      opt.rate_hz};
    const auto panel =
        drift::generate_panel(opt.participants, effects, opt.seed, durations);
    drift::write_panel(panel, opt.out_dir);
    std::cout << "wrote " << panel.sessions.size() << " sessions to " << opt.out_dir
              << "\n";
    return 0;
}

drift::AlignConfig align_config_from(const CliOptions& opt) {
    drift::AlignConfig config;
    if (opt.step == "symmetric_diag2") {
        config.step_pattern = drift::StepPattern::symmetric_diag2;
    } else if (opt.step != "symmetric_uniform") {
        throw CLI::ValidationError("--step",
                                   "expected symmetric_uniform or symmetric_diag2");
    }
    if (opt.band >= 0) config.band_radius = opt.band;
    return config;
}

int run_align(const CliOptions& opt) {
    const auto baseline = load_session_auto(opt.baseline_file, opt.baseline_meta);
    const auto session = load_session_auto(opt.session_file, opt.session_meta);
    const auto& query = session.channel(opt.channel);
    const auto& reference = baseline.channel(opt.channel);
    const auto alignment = drift::align(query, reference, align_config_from(opt));
    const auto warped = drift::warp_to_reference(query, reference, alignment);

    const fs::path out(opt.out_file);
    write_text(with_suffix(out, ".path"), path_csv_of(alignment));
    write_text(with_suffix(out, ".warped"), series_csv_of(warped));
    std::cout << "distance " << fmt17(alignment.distance) << ", path length "
              << alignment.path.size() << "\n";
    return 0;
}

int run_distances(const CliOptions& opt) {
    const auto baseline = load_session_auto(opt.baseline_file, opt.baseline_meta);
    const auto session = load_session_auto(opt.session_file, opt.session_meta);

    drift::AnalysisConfig config;
    config.window = opt.window;
    config.align = align_config_from(opt);

    std::vector<std::string> channels;
    if (opt.all_channels) {
        for (const auto& name : drift::channel_registry()) {
            if (session.has_channel(name) && baseline.has_channel(name)) {
                channels.push_back(name);
            }
        }
    } else if (!opt.channel.empty()) {
        channels.push_back(opt.channel);
    } else {
        throw CLI::ValidationError("--channel", "give --channel NAME or --all");
    }

    std::vector<drift::SegmentDistanceReport> reports;
    for (const auto& name : channels) {
        reports.push_back(drift::segment_distances(session, baseline, name, config));
    }

    const fs::path out(opt.out_file);
    write_text(out, drift::segment_reports_json(reports));
    for (const auto& r : reports) {
        fs::path base = out;
        base.replace_extension();
        const std::string stem = base.string() + "_fine_" + r.channel + "_";
        write_text(stem + "before.csv", fine_csv_of(r.fine_before));
        write_text(stem + "during.csv", fine_csv_of(r.fine_during));
        write_text(stem + "after.csv", fine_csv_of(r.fine_after));
    }
    return 0;
}

int run_analyze(const CliOptions& opt) {
    const auto panel =
        drift::Panel::from_sessions(drift::load_session_dir(opt.panel_dir));

    drift::AnalysisConfig config;
    config.window = opt.window;

    std::vector<std::string> warnings;
    const fs::path out(opt.out_file);
    fs::path base = out;
    base.replace_extension();

    if (opt.design == "means") {
        const drift::TestKind test =
            opt.test_name.empty() ? drift::TestKind::paired_t : parse_test(opt.test_name);
        const auto cells = drift::run_means_design(panel, test, &warnings);
        write_text(out, drift::panel_report_json("means", test, opt.window, cells, {}, {}));
        write_text(base.string() + "_pvalues.csv",
                   drift::render_pvalue_table(cells, drift::means_design_channels()));
    } else if (opt.design == "distances") {
        const drift::TestKind test = opt.test_name.empty()
                                         ? drift::TestKind::wilcoxon_signed_rank
                                         : parse_test(opt.test_name);
        const auto result = drift::run_distances_design(panel, config, test,
                                                        opt.allow_partial, &warnings);
        write_text(out, drift::panel_report_json("distances", test, opt.window,
                                                 result.cells, result.summaries,
                                                 result.reports));
        write_text(base.string() + "_pvalues.csv",
                   drift::render_pvalue_table(result.cells, drift::channel_registry()));
        write_text(base.string() + "_summary.csv",
                   drift::render_summary_table(result.summaries));
        for (drift::SessionType distraction : drift::kDistractionTypes) {
            write_text(base.string() + "_relative_" + to_string(distraction) + ".csv",
                       drift::render_relative_table(result.reports, distraction));
        }
    } else {
        throw CLI::ValidationError("--design", "expected means or distances");
    }

    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    return 0;
}

int run_qq(const CliOptions& opt) {
    const auto panel =
        drift::Panel::from_sessions(drift::load_session_dir(opt.panel_dir));
    if (opt.design != "means") {
        throw CLI::ValidationError("--design", "qq supports the means design only");
    }
    const drift::SessionType distraction =
        drift::session_type_from_string(opt.distraction);

    const int seg_index = [&] {
        if (opt.segment == "before") return 0;
        if (opt.segment == "during") return 1;
        if (opt.segment == "after") return 2;
        throw CLI::ValidationError("--segment", "expected before, during or after");
    }();

    std::vector<double> sample;
    for (const auto& pid : panel.participants()) {
        const drift::Session* session = panel.find(pid, distraction);
        if (!session) {
            throw drift::Error("session " + to_string(distraction) +
                               " missing for participant " + pid);
        }
        if (!session->has_channel(opt.channel)) continue;
        sample.push_back(drift::segment_stats(*session, opt.channel)[seg_index].mean);
    }
    const auto qq = drift::qq_points(sample);

    std::string csv = "theoretical,empirical\n";
    for (const auto& [tq, eq] : qq.points) {
        csv += fmt17(tq);
        csv += ',';
        csv += fmt17(eq);
        csv += '\n';
    }
    write_text(opt.out_file, csv);
    std::cout << "r " << fmt17(qq.r) << " over " << qq.points.size() << " points\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"baseline-referenced driving deviation analysis"};
    app.require_subcommand(1);
    CliOptions opt;

    auto* simulate = app.add_subcommand("simulate", "generate a synthetic panel");
    simulate->add_option("--participants", opt.participants, "panel size")
        ->default_val(16);
    simulate->add_option("--seed", opt.seed, "master seed")->default_val(42);
    simulate->add_option("--effect", opt.effect_spec,
                         "distraction effect, e.g. VS:-0.2,HR:+10");
    simulate->add_option("--before-s", opt.before_s)->default_val(120.0);
    simulate->add_option("--during-s", opt.during_s)->default_val(180.0);
    simulate->add_option("--after-s", opt.after_s)->default_val(120.0);
    simulate->add_option("--rate-hz", opt.rate_hz)->default_val(10.0);
    simulate->add_option("--out", opt.out_dir, "output directory")->required();

    auto* align_cmd = app.add_subcommand("align", "DTW-align one channel");
    align_cmd->add_option("--baseline", opt.baseline_file, "baseline session CSV")
        ->required();
    align_cmd->add_option("--session", opt.session_file, "query session CSV")
        ->required();
    align_cmd->add_option("--baseline-meta", opt.baseline_meta);
    align_cmd->add_option("--session-meta", opt.session_meta);
    align_cmd->add_option("--channel", opt.channel)->required();
    align_cmd->add_option("--band", opt.band, "Sakoe-Chiba half-width in samples");
    align_cmd->add_option("--step", opt.step,
                          "symmetric_uniform or symmetric_diag2");
    align_cmd->add_option("--out", opt.out_file, "output basename")->required();

    auto* distances = app.add_subcommand("distances",
                                         "segment distances against a baseline");
    distances->add_option("--baseline", opt.baseline_file)->required();
    distances->add_option("--session", opt.session_file)->required();
    distances->add_option("--baseline-meta", opt.baseline_meta);
    distances->add_option("--session-meta", opt.session_meta);
    distances->add_option("--channel", opt.channel);
    distances->add_flag("--all", opt.all_channels, "all registry channels");
    distances->add_option("--window", opt.window)->default_val(10);
    distances->add_option("--band", opt.band);
    distances->add_option("--step", opt.step);
    distances->add_option("--out", opt.out_file, "report JSON path")->required();

    auto* analyze = app.add_subcommand("analyze", "panel-wide paired designs");
    analyze->add_option("--panel", opt.panel_dir, "panel directory")->required();
    analyze->add_option("--design", opt.design, "means or distances")->required();
    analyze->add_option("--test", opt.test_name, "ttest or wilcoxon");
    analyze->add_option("--window", opt.window)->default_val(10);
    analyze->add_flag("--allow-partial", opt.allow_partial,
                      "exclude failing participants instead of aborting");
    analyze->add_option("--out", opt.out_file, "report JSON path")->required();

    auto* qq = app.add_subcommand("qq", "QQ normality points for the means design");
    qq->add_option("--panel", opt.panel_dir)->required();
    qq->add_option("--design", opt.design)->default_val(std::string("means"));
    qq->add_option("--segment", opt.segment, "before, during or after")
        ->default_val(std::string("before"));
    qq->add_option("--channel", opt.channel)->required();
    qq->add_option("--distraction", opt.distraction, "session type, default DS1")
        ->default_val(std::string("DS1"));
    qq->add_option("--out", opt.out_file, "points CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (simulate->parsed()) return run_simulate(opt);
        if (align_cmd->parsed()) return run_align(opt);
        if (distances->parsed()) return run_distances(opt);
        if (analyze->parsed()) return run_analyze(opt);
        if (qq->parsed()) return run_qq(opt);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const drift::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
