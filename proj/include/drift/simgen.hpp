#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "drift/model.hpp"

namespace drift {

/// Bumped whenever generator output changes for the same seeds, so golden
/// files can pin the stream they were produced with.
inline constexpr int kGeneratorVersion = 1;

/// Deterministic counter-based generator (splitmix64). Streams for
/// sub-components are derived with derive_seed, never by sharing state.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();
    /// Uniform in the open interval (0, 1).
    double uniform01();
    double uniform(double lo, double hi);
    /// Standard normal via the inverse CDF, so the stream is a pure
    /// function of the seed.
    double gaussian();

private:
    std::uint64_t state_;
};

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Per-driver variability knobs. speed_noise is the stationary standard
/// deviation of the speed process, not the per-step innovation.
struct DriverProfile {
    std::string participant_id;
    double target_speed_kmh = 65.0;
    double speed_reversion_rate = 0.35;  // 1/s
    double speed_noise_kmh = 2.0;
    double hr_baseline_bpm = 72.0;
    double hr_noise_bpm = 2.0;
    double steering_noise_deg = 1.5;
    double brake_event_rate_per_min = 3.0;
    std::uint64_t rng_seed = 0;
};

/// Injectable ground-truth distraction response. Zero shifts with the same
/// seed reproduce the baseline session sample for sample.
struct DistractionEffect {
    double speed_shift = 0.0;               // fraction, e.g. -0.2 = 20% slower
    double hr_shift_bpm = 0.0;
    double steering_noise_multiplier = 1.0;
    double onset_ramp_s = 5.0;
};

struct SessionDurations {
    double before_s = 120.0;
    double during_s = 180.0;
    double after_s = 120.0;
    double rate_hz = 10.0;
};

/// One synthetic driving session with every registry channel. The effect
/// applies only inside the distraction window, ramping in linearly over
/// onset_ramp_s; DS4 ignores the effect and carries no markers.
Session generate_session(const DriverProfile& profile, SessionType type,
                         const DistractionEffect& effect, std::uint64_t seed,
                         const SessionDurations& durations = {});

DriverProfile draw_profile(std::uint64_t profile_seed, const std::string& participant_id);

struct GeneratedSession {
    Session session;
    std::uint64_t seed = 0;
};

struct GeneratedPanel {
    std::vector<GeneratedSession> sessions;
    std::uint64_t master_seed = 0;
    int n_participants = 0;
    SessionDurations durations;
};

/// n participants x five sessions (DS1..DS5), with per-participant and
/// per-session seeds derived deterministically from the master seed.
GeneratedPanel generate_panel(int n_participants,
                              const std::map<SessionType, DistractionEffect>& effect_map,
                              std::uint64_t master_seed,
                              const SessionDurations& durations = {});

/// Write a panel as session CSV + meta sidecars plus a manifest.json
/// listing files and seeds.
void write_panel(const GeneratedPanel& panel, const std::filesystem::path& dir);

}  // namespace drift
