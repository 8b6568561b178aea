#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "drift/model.hpp"

namespace drift {

/// Physically plausible [min, max] bounds per channel, used for outlier
/// elimination. Channels without an entry pass through untouched.
struct ChannelLimits {
    std::map<std::string, std::pair<double, double>> bounds;

    bool has(const std::string& channel) const { return bounds.count(channel) != 0; }
    std::pair<double, double> get(const std::string& channel) const {
        return bounds.at(channel);
    }
};

/// Default bounds for the built-in channel registry.
ChannelLimits default_channel_limits();

/// JSON map channel -> [min, max].
ChannelLimits load_channel_limits(const std::filesystem::path& path);

/// Load a session from a CSV data file (header `t,<channel>,...`) plus its
/// JSON meta sidecar. The returned session passes all model invariants.
Session load_session(const std::filesystem::path& data_path,
                     const std::filesystem::path& meta_path);

/// Write a session as CSV + meta sidecar, 17 significant digits so that a
/// load round-trips times and values bit-exact.
void write_session(const Session& session, const std::filesystem::path& data_path,
                   const std::filesystem::path& meta_path);

/// Meta sidecar path convention: `<base>.csv` -> `<base>.meta.json`.
std::filesystem::path meta_path_for(const std::filesystem::path& data_path);

/// All sessions found in a directory (every *.csv with a meta sidecar),
/// in sorted filename order.
std::vector<Session> load_session_dir(const std::filesystem::path& dir);

/// Linear interpolation of the series onto target times; targets outside
/// the source range clamp to the nearest source value.
Series resample_to_clock(const Series& series, const std::vector<double>& target_times);

/// Replace samples outside the channel's bounds by linear interpolation of
/// the nearest in-range neighbours (clamped at the ends). Returns the
/// cleaned series and the number of replaced samples.
std::pair<Series, int> clean_outliers(const Series& series, const ChannelLimits& limits);

}  // namespace drift
