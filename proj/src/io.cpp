#include "drift/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace drift {

namespace {

using nlohmann::json;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(std::string_view field, const std::filesystem::path& file,
                    std::size_t line) {
    double out = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last) {
        throw Error(file.string() + ": malformed row at line " + std::to_string(line) +
                    ": bad number '" + std::string(field) + "'");
    }
    return out;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error(path.string() + ": invalid JSON: " + e.what());
    }
    return j;
}

}  // namespace

ChannelLimits default_channel_limits() {
    ChannelLimits out;
    out.bounds = {
        {"HR", {30.0, 220.0}},     {"Gear", {-1.0, 8.0}},
        {"Brake", {0.0, 1.0}},     {"Accelerator", {0.0, 1.0}},
        {"Clutch", {0.0, 1.0}},    {"Steering", {-720.0, 720.0}},
        {"AccLat", {-20.0, 20.0}}, {"AccLong", {-20.0, 20.0}},
        {"LanePos", {-10.0, 10.0}}, {"VS", {0.0, 300.0}},
        {"RPM", {0.0, 10000.0}},
    };
    return out;
}

ChannelLimits load_channel_limits(const std::filesystem::path& path) {
    const json j = read_json_file(path);
    if (!j.is_object()) {
        throw Error(path.string() + ": channel limits must be a JSON object");
    }
    ChannelLimits out;
    for (const auto& [channel, entry] : j.items()) {
        if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
            !entry[1].is_number()) {
            throw Error(path.string() + ": limits for '" + channel +
                        "' must be [min, max]");
        }
        const double lo = entry[0].get<double>();
        const double hi = entry[1].get<double>();
        if (!(lo < hi)) {
            throw Error(path.string() + ": limits for '" + channel +
                        "' must satisfy min < max");
        }
        out.bounds[channel] = {lo, hi};
    }
    return out;
}

Session load_session(const std::filesystem::path& data_path,
                     const std::filesystem::path& meta_path) {
    std::ifstream in(data_path);
    if (!in) {
        throw Error("cannot open " + data_path.string());
    }

    std::string line;
    if (!std::getline(in, line)) {
        throw Error(data_path.string() + ": empty file");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_fields(line);
    if (header.size() < 2 || header[0] != "t") {
        throw Error(data_path.string() +
                    ": header must be 't,<channel>,...' (got '" + line + "')");
    }
    std::vector<std::string> channel_names;
    for (std::size_t c = 1; c < header.size(); ++c) {
        channel_names.emplace_back(header[c]);
    }

    std::vector<double> times;
    std::vector<std::vector<double>> columns(channel_names.size());
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != header.size()) {
            throw Error(data_path.string() + ": malformed row at line " +
                        std::to_string(line_no) + ": expected " +
                        std::to_string(header.size()) + " fields, got " +
                        std::to_string(fields.size()));
        }
        const double t = parse_double(fields[0], data_path, line_no);
        if (!times.empty() && !(t > times.back())) {
            throw Error(data_path.string() + ": non-monotonic timestamps at line " +
                        std::to_string(line_no));
        }
        times.push_back(t);
        for (std::size_t c = 0; c < channel_names.size(); ++c) {
            columns[c].push_back(parse_double(fields[c + 1], data_path, line_no));
        }
    }
    if (times.empty()) {
        throw Error(data_path.string() + ": no samples");
    }

    const json meta = read_json_file(meta_path);
    Session session;
    session.participant_id = meta.at("participant_id").get<std::string>();
    session.session_type =
        session_type_from_string(meta.at("session_type").get<std::string>());

    for (std::size_t c = 0; c < channel_names.size(); ++c) {
        Series s;
        s.channel = channel_names[c];
        s.times = times;
        s.values = std::move(columns[c]);
        session.channels.emplace(channel_names[c], std::move(s));
    }

    if (meta.contains("channels")) {
        for (const auto& ch : meta.at("channels")) {
            const auto name = ch.get<std::string>();
            if (!session.has_channel(name)) {
                throw Error(data_path.string() +
                            ": channel declared in meta but missing in CSV: " + name);
            }
        }
    }

    const bool has_start =
        meta.contains("distraction_start_s") && !meta.at("distraction_start_s").is_null();
    const bool has_end =
        meta.contains("distraction_end_s") && !meta.at("distraction_end_s").is_null();
    if (has_start != has_end) {
        throw Error(meta_path.string() +
                    ": distraction_start_s/distraction_end_s must both be set or both null");
    }
    if (has_start) {
        SegmentMarkers markers;
        markers.distraction_start = meta.at("distraction_start_s").get<double>();
        markers.distraction_end = meta.at("distraction_end_s").get<double>();
        if (meta.contains("features")) {
            for (const auto& f : meta.at("features")) {
                RouteFeature feature;
                feature.label =
                    feature_label_from_string(f.at("label").get<std::string>());
                feature.start_s = f.at("start_s").get<double>();
                feature.end_s = f.at("end_s").get<double>();
                markers.features.push_back(feature);
            }
        }
        session.markers = markers;
    }

    validate_session(session, data_path.string());
    return session;
}

void write_session(const Session& session, const std::filesystem::path& data_path,
                   const std::filesystem::path& meta_path) {
    validate_session(session, "write_session");

    // Registry channels first (table order), then any extras alphabetically.
    std::vector<std::string> names;
    for (const auto& name : channel_registry()) {
        if (session.has_channel(name)) names.push_back(name);
    }
    for (const auto& [name, series] : session.channels) {
        if (!is_registered_channel(name)) names.push_back(name);
    }

    std::ofstream out(data_path);
    if (!out) {
        throw Error("cannot write " + data_path.string());
    }
    out << "t";
    for (const auto& name : names) out << ',' << name;
    out << '\n';
    const auto& times = session.channels.begin()->second.times;
    std::string row;
    for (std::size_t i = 0; i < times.size(); ++i) {
        row.clear();
        row += fmt17(times[i]);
        for (const auto& name : names) {
            row += ',';
            row += fmt17(session.channels.at(name).values[i]);
        }
        row += '\n';
        out << row;
    }

    json meta;
    meta["participant_id"] = session.participant_id;
    meta["session_type"] = to_string(session.session_type);
    if (session.markers) {
        meta["distraction_start_s"] = session.markers->distraction_start;
        meta["distraction_end_s"] = session.markers->distraction_end;
    } else {
        meta["distraction_start_s"] = nullptr;
        meta["distraction_end_s"] = nullptr;
    }
    meta["features"] = json::array();
    if (session.markers) {
        for (const auto& f : session.markers->features) {
            meta["features"].push_back({{"label", to_string(f.label)},
                                        {"start_s", f.start_s},
                                        {"end_s", f.end_s}});
        }
    }
    std::ofstream mout(meta_path);
    if (!mout) {
        throw Error("cannot write " + meta_path.string());
    }
    mout << meta.dump(2) << '\n';
}

std::filesystem::path meta_path_for(const std::filesystem::path& data_path) {
    std::filesystem::path p = data_path;
    p.replace_extension();
    p += ".meta.json";
    return p;
}

std::vector<Session> load_session_dir(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) {
        throw Error("not a directory: " + dir.string());
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".csv") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<Session> sessions;
    sessions.reserve(files.size());
    for (const auto& f : files) {
        sessions.push_back(load_session(f, meta_path_for(f)));
    }
    return sessions;
}

Series resample_to_clock(const Series& series, const std::vector<double>& target_times) {
    if (series.size() < 2) {
        throw Error("cannot interpolate singleton series");
    }
    for (std::size_t i = 1; i < target_times.size(); ++i) {
        if (!(target_times[i] > target_times[i - 1])) {
            throw Error("target times must be strictly increasing");
        }
    }
    Series out;
    out.channel = series.channel;
    out.times = target_times;
    out.values.reserve(target_times.size());
    const auto& st = series.times;
    const auto& sv = series.values;
    for (const double t : target_times) {
        if (t <= st.front()) {
            out.values.push_back(sv.front());
        } else if (t >= st.back()) {
            out.values.push_back(sv.back());
        } else {
            const auto it = std::upper_bound(st.begin(), st.end(), t);
            const std::size_t hi = static_cast<std::size_t>(it - st.begin());
            const std::size_t lo = hi - 1;
            const double frac = (t - st[lo]) / (st[hi] - st[lo]);
            out.values.push_back(sv[lo] + frac * (sv[hi] - sv[lo]));
        }
    }
    return out;
}

std::pair<Series, int> clean_outliers(const Series& series, const ChannelLimits& limits) {
    if (!limits.has(series.channel)) {
        return {series, 0};
    }
    const auto [lo, hi] = limits.get(series.channel);
    const std::size_t n = series.size();
    std::vector<std::size_t> good;
    good.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double v = series.values[i];
        if (v >= lo && v <= hi) good.push_back(i);
    }
    if (good.empty()) {
        throw Error("channel entirely out of range: " + series.channel);
    }
    if (good.size() == n) {
        return {series, 0};
    }

    Series out = series;
    std::size_t g = 0;  // index into `good` of the next in-range sample
    for (std::size_t i = 0; i < n; ++i) {
        const double v = series.values[i];
        if (v >= lo && v <= hi) continue;
        while (g < good.size() && good[g] < i) ++g;
        if (g == 0) {
            out.values[i] = series.values[good.front()];
        } else if (g == good.size()) {
            out.values[i] = series.values[good.back()];
        } else {
            const std::size_t a = good[g - 1];
            const std::size_t b = good[g];
            const double frac =
                (series.times[i] - series.times[a]) / (series.times[b] - series.times[a]);
            out.values[i] =
                series.values[a] + frac * (series.values[b] - series.values[a]);
        }
    }
    return {out, static_cast<int>(n - good.size())};
}

}  // namespace drift
