#include "drift/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "drift/io.hpp"
#include "drift/stats.hpp"

namespace drift {

namespace {

constexpr double kTwoPi = 6.2831853071795864769;

// Fixed stream ids per channel component; session type never enters the
// derivation, so a zero effect reproduces the baseline exactly.
enum Stream : std::uint64_t {
    kStreamSpeed = 1,
    kStreamHrNoise = 2,
    kStreamHrDrift = 3,
    kStreamBrake = 4,
    kStreamSteering = 5,
    kStreamLanePos = 6,
    kStreamAccel = 7,
    kStreamRpm = 8,
    kStreamAccLat = 9,
    kStreamAccLong = 10,
};

struct RouteTemplate {
    // Curvature (1/m) as a pure function of session time; the single curve
    // sits inside the distraction window, mirroring a fixed route driven by
    // everyone.
    double curve_start;
    double curve_end;
    double straight_start;
    double straight_end;
    double peak_curvature;

    explicit RouteTemplate(const SessionDurations& d) {
        const double start = d.before_s;
        straight_start = start + 0.05 * d.during_s;
        straight_end = start + 0.35 * d.during_s;
        curve_start = start + 0.40 * d.during_s;
        curve_end = start + 0.70 * d.during_s;
        peak_curvature = 0.010;
    }

    double curvature(double t) const {
        if (t < curve_start || t >= curve_end) return 0.0;
        const double u = (t - curve_start) / (curve_end - curve_start);
        return peak_curvature * 0.5 * (1.0 - std::cos(kTwoPi * u));
    }
};

// Mean-reverting (OU) step with exact discretization: the stationary
// standard deviation equals sigma regardless of dt.
class OuProcess {
public:
    OuProcess(double rate, double sigma, double dt, Rng& rng)
        : alpha_(std::exp(-rate * dt)),
          scale_(std::sqrt(1.0 - alpha_ * alpha_)),
          sigma_(sigma),
          rng_(rng) {
        deviation_ = sigma_ * rng_.gaussian();
    }

    // Advance one step around the current mean; sigma_mult scales the
    // innovation only, so a multiplier of 1 leaves the stream unchanged.
    double step(double sigma_mult = 1.0) {
        deviation_ = alpha_ * deviation_ +
                     scale_ * sigma_ * sigma_mult * rng_.gaussian();
        return deviation_;
    }

    double deviation() const { return deviation_; }

private:
    double alpha_;
    double scale_;
    double sigma_;
    double deviation_;
    Rng& rng_;
};

int gear_for_speed(double kmh, int current) {
    // 15 km/h per gear with 1.5 km/h hysteresis.
    const double up = 15.0 * current + 1.5;
    const double down = 15.0 * (current - 1) - 1.5;
    int g = current;
    if (kmh > up) {
        g = current + 1;
    } else if (kmh < down) {
        g = current - 1;
    }
    return std::clamp(g, 1, 6);
}

}  // namespace

std::uint64_t Rng::next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double Rng::uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

double Rng::gaussian() { return normal_quantile(uniform01()); }

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    Rng mixer(seed ^ (0xD1B54A32D192ED03ULL * (stream + 1)));
    mixer.next_u64();
    return mixer.next_u64();
}

DriverProfile draw_profile(std::uint64_t profile_seed,
                           const std::string& participant_id) {
    Rng rng(derive_seed(profile_seed, 0));
    DriverProfile p;
    p.participant_id = participant_id;
    p.target_speed_kmh = rng.uniform(55.0, 75.0);
    p.speed_reversion_rate = rng.uniform(0.25, 0.5);
    p.speed_noise_kmh = rng.uniform(1.5, 3.0);
    p.hr_baseline_bpm = rng.uniform(62.0, 88.0);
    p.hr_noise_bpm = rng.uniform(1.5, 3.0);
    p.steering_noise_deg = rng.uniform(1.0, 2.5);
    p.brake_event_rate_per_min = rng.uniform(2.0, 5.0);
    p.rng_seed = derive_seed(profile_seed, 1);
    return p;
}

Session generate_session(const DriverProfile& profile, SessionType type,
                         const DistractionEffect& effect, std::uint64_t seed,
                         const SessionDurations& d) {
    const double dt = 1.0 / d.rate_hz;
    const auto seg_samples = [&](double dur) {
        return static_cast<std::size_t>(std::llround(dur * d.rate_hz));
    };
    const std::size_t n_before = seg_samples(d.before_s);
    const std::size_t n_during = seg_samples(d.during_s);
    const std::size_t n_after = seg_samples(d.after_s);
    if (n_before < 10 || n_during < 10 || n_after < 10) {
        throw Error("invalid durations: every segment needs at least 10 samples");
    }
    const std::size_t n = n_before + n_during + n_after;
    const double t_start = d.before_s;
    const double t_end = d.before_s + d.during_s;

    const DistractionEffect applied =
        type == SessionType::DS4 ? DistractionEffect{0.0, 0.0, 1.0, effect.onset_ramp_s}
                                 : effect;
    if (applied.steering_noise_multiplier < 0.0 || applied.onset_ramp_s < 0.0) {
        throw Error("invalid distraction effect parameters");
    }

    std::vector<double> times(n);
    for (std::size_t i = 0; i < n; ++i) times[i] = static_cast<double>(i) * dt;

    const auto ramp = [&](double t) {
        if (t < t_start || t >= t_end) return 0.0;
        if (applied.onset_ramp_s <= 0.0) return 1.0;
        return std::min(1.0, (t - t_start) / applied.onset_ramp_s);
    };

    const RouteTemplate route(d);

    Rng speed_rng(derive_seed(seed, kStreamSpeed));
    Rng hr_rng(derive_seed(seed, kStreamHrNoise));
    Rng drift_rng(derive_seed(seed, kStreamHrDrift));
    Rng brake_rng(derive_seed(seed, kStreamBrake));
    Rng steer_rng(derive_seed(seed, kStreamSteering));
    Rng lane_rng(derive_seed(seed, kStreamLanePos));
    Rng accel_rng(derive_seed(seed, kStreamAccel));
    Rng rpm_rng(derive_seed(seed, kStreamRpm));
    Rng acclat_rng(derive_seed(seed, kStreamAccLat));
    Rng acclong_rng(derive_seed(seed, kStreamAccLong));

    std::vector<double> vs(n), hr(n), brake(n), accel(n), clutch(n), steering(n),
        acclat(n), acclong(n), lanepos(n), gear(n), rpm(n);

    // Vehicle speed: mean reversion toward the (possibly shifted) target,
    // so the effect shows up with the process's own lag rather than as a
    // sample overwrite.
    {
        const double alpha = std::exp(-profile.speed_reversion_rate * dt);
        const double innov = profile.speed_noise_kmh * std::sqrt(1.0 - alpha * alpha);
        double x = profile.target_speed_kmh +
                   profile.speed_noise_kmh * speed_rng.gaussian();
        for (std::size_t i = 0; i < n; ++i) {
            vs[i] = std::max(0.0, x);
            const double target =
                profile.target_speed_kmh * (1.0 + ramp(times[i]) * applied.speed_shift);
            x = target + (x - target) * alpha + innov * speed_rng.gaussian();
        }
    }

    // Heart rate: baseline + slow sinusoidal drift + noise + shift.
    {
        const double drift_amp = drift_rng.uniform(1.0, 3.0);
        const double drift_period = drift_rng.uniform(200.0, 400.0);
        const double drift_phase = drift_rng.uniform(0.0, kTwoPi);
        OuProcess ou(1.0 / 3.0, profile.hr_noise_bpm, dt, hr_rng);
        for (std::size_t i = 0; i < n; ++i) {
            const double t = times[i];
            const double drift =
                drift_amp * std::sin(kTwoPi * t / drift_period + drift_phase);
            const double v = profile.hr_baseline_bpm + drift + ou.deviation() +
                             ramp(t) * applied.hr_shift_bpm;
            hr[i] = std::max(35.0, v);
            ou.step();
        }
    }

    // Brake: event-driven half-sine pulses.
    {
        const double p_event = profile.brake_event_rate_per_min * dt / 60.0;
        std::size_t pulse_end = 0;
        std::size_t pulse_start = 0;
        double pulse_amp = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (i >= pulse_end && brake_rng.uniform01() < p_event) {
                pulse_start = i;
                const double dur_s = brake_rng.uniform(0.5, 2.0);
                pulse_amp = brake_rng.uniform(0.2, 0.9);
                pulse_end = i + std::max<std::size_t>(
                                    1, static_cast<std::size_t>(dur_s * d.rate_hz));
            }
            if (i < pulse_end) {
                const double u = static_cast<double>(i - pulse_start) /
                                 static_cast<double>(pulse_end - pulse_start);
                brake[i] = pulse_amp * std::sin(kTwoPi / 2.0 * u);
            } else {
                brake[i] = 0.0;
            }
        }
    }

    // Gear from speed with hysteresis; clutch pressed across each change.
    {
        int g = gear_for_speed(vs[0], std::clamp(1 + static_cast<int>(vs[0] / 15.0), 1, 6));
        const std::size_t clutch_len =
            std::max<std::size_t>(1, static_cast<std::size_t>(0.8 * d.rate_hz));
        std::size_t clutch_until = 0;
        std::size_t clutch_from = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const int next = gear_for_speed(vs[i], g);
            if (next != g && i >= clutch_until) {
                g = next;
                clutch_from = i;
                clutch_until = i + clutch_len;
            }
            gear[i] = static_cast<double>(g);
            if (i < clutch_until) {
                const double u = static_cast<double>(i - clutch_from) /
                                 static_cast<double>(clutch_len);
                clutch[i] = std::sin(kTwoPi / 2.0 * u);
            } else {
                clutch[i] = 0.0;
            }
        }
    }

    // Accelerator: demand toward the current target plus slow noise, cut
    // while braking or declutching.
    {
        OuProcess ou(1.0, 0.05, dt, accel_rng);
        for (std::size_t i = 0; i < n; ++i) {
            const double target =
                profile.target_speed_kmh * (1.0 + ramp(times[i]) * applied.speed_shift);
            const double demand = 0.35 + 0.02 * (target - vs[i]) + ou.deviation();
            const double cut = 1.0 - std::max(brake[i], clutch[i]);
            accel[i] = std::clamp(demand * cut, 0.0, 1.0);
            ou.step();
        }
    }

    // Steering: route curvature through the linkage plus driver noise; the
    // distraction multiplies the noise scale inside the window.
    {
        constexpr double kWheelbaseM = 2.7;
        constexpr double kSteerRatio = 15.0;
        constexpr double kRad2Deg = 57.295779513082320877;
        OuProcess ou(2.0, profile.steering_noise_deg, dt, steer_rng);
        for (std::size_t i = 0; i < n; ++i) {
            const double t = times[i];
            const double geometric =
                route.curvature(t) * kWheelbaseM * kSteerRatio * kRad2Deg;
            steering[i] = geometric + ou.deviation();
            const double mult =
                1.0 + ramp(t) * (applied.steering_noise_multiplier - 1.0);
            ou.step(mult);
        }
    }

    // Lateral acceleration: curvature * v^2 plus noise.
    {
        OuProcess ou(2.0, 0.15, dt, acclat_rng);
        for (std::size_t i = 0; i < n; ++i) {
            const double v_ms = vs[i] / 3.6;
            acclat[i] = route.curvature(times[i]) * v_ms * v_ms + ou.deviation();
            ou.step();
        }
    }

    // Longitudinal acceleration: speed derivative plus noise.
    {
        OuProcess ou(2.0, 0.10, dt, acclong_rng);
        for (std::size_t i = 0; i < n; ++i) {
            const double dv =
                i == 0 ? 0.0 : (vs[i] - vs[i - 1]) / dt / 3.6;
            acclong[i] = dv + ou.deviation();
            ou.step();
        }
    }

    // Lane position: slow wander around the lane centre.
    {
        OuProcess ou(0.5, 0.15, dt, lane_rng);
        for (std::size_t i = 0; i < n; ++i) {
            lanepos[i] = ou.deviation();
            ou.step();
        }
    }

    // Engine speed from vehicle speed and gear.
    {
        OuProcess ou(1.0, 30.0, dt, rpm_rng);
        for (std::size_t i = 0; i < n; ++i) {
            const double v = 800.0 + vs[i] * 160.0 / gear[i] + ou.deviation();
            rpm[i] = std::clamp(v, 700.0, 6500.0);
            ou.step();
        }
    }

    Session session;
    session.participant_id = profile.participant_id;
    session.session_type = type;
    const auto put = [&](const std::string& name, std::vector<double> values) {
        Series s;
        s.channel = name;
        s.times = times;
        s.values = std::move(values);
        session.channels.emplace(name, std::move(s));
    };
    put("HR", std::move(hr));
    put("Gear", std::move(gear));
    put("Brake", std::move(brake));
    put("Accelerator", std::move(accel));
    put("Clutch", std::move(clutch));
    put("Steering", std::move(steering));
    put("AccLat", std::move(acclat));
    put("AccLong", std::move(acclong));
    put("LanePos", std::move(lanepos));
    put("VS", std::move(vs));
    put("RPM", std::move(rpm));

    if (type != SessionType::DS4) {
        SegmentMarkers markers;
        markers.distraction_start = t_start;
        markers.distraction_end = t_end;
        markers.features = {
            {FeatureLabel::straight, route.straight_start, route.straight_end},
            {FeatureLabel::curve, route.curve_start, route.curve_end},
        };
        session.markers = markers;
    }

    validate_session(session, "generate_session");
    return session;
}

GeneratedPanel generate_panel(int n_participants,
                              const std::map<SessionType, DistractionEffect>& effect_map,
                              std::uint64_t master_seed,
                              const SessionDurations& durations) {
    if (n_participants < 2) {
        throw Error("panel needs at least 2 participants");
    }
    GeneratedPanel panel;
    panel.master_seed = master_seed;
    panel.n_participants = n_participants;
    panel.durations = durations;

    const int width = n_participants < 100 ? 2 : 3;
    const SessionType all_types[] = {SessionType::DS1, SessionType::DS2,
                                     SessionType::DS3, SessionType::DS4,
                                     SessionType::DS5};
    for (int p = 1; p <= n_participants; ++p) {
        char pid[16];
        std::snprintf(pid, sizeof(pid), "P%0*d", width, p);
        const std::uint64_t prof_seed =
            derive_seed(master_seed, 100 + static_cast<std::uint64_t>(p));
        const DriverProfile profile = draw_profile(prof_seed, pid);
        for (std::size_t si = 0; si < 5; ++si) {
            const SessionType type = all_types[si];
            const std::uint64_t session_seed = derive_seed(prof_seed, 10 + si);
            DistractionEffect effect;
            if (auto it = effect_map.find(type); it != effect_map.end()) {
                effect = it->second;
            }
            panel.sessions.push_back(
                {generate_session(profile, type, effect, session_seed, durations),
                 session_seed});
        }
    }
    return panel;
}

void write_panel(const GeneratedPanel& panel, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    nlohmann::json manifest;
    manifest["generator_version"] = kGeneratorVersion;
    manifest["master_seed"] = panel.master_seed;
    manifest["n_participants"] = panel.n_participants;
    manifest["durations"] = {{"before_s", panel.durations.before_s},
                             {"during_s", panel.durations.during_s},
                             {"after_s", panel.durations.after_s},
                             {"rate_hz", panel.durations.rate_hz}};
    manifest["sessions"] = nlohmann::json::array();
    for (const auto& gs : panel.sessions) {
        const std::string base =
            gs.session.participant_id + "_" + to_string(gs.session.session_type);
        const auto data_path = dir / (base + ".csv");
        const auto meta_path = dir / (base + ".meta.json");
        write_session(gs.session, data_path, meta_path);
        manifest["sessions"].push_back({{"participant_id", gs.session.participant_id},
                                        {"session_type", to_string(gs.session.session_type)},
                                        {"data", base + ".csv"},
                                        {"meta", base + ".meta.json"},
                                        {"seed", gs.seed}});
    }
    std::ofstream out(dir / "manifest.json");
    if (!out) {
        throw Error("cannot write " + (dir / "manifest.json").string());
    }
    out << manifest.dump(2) << '\n';
}

}  // namespace drift
