#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "drift/analysis.hpp"
#include "drift/simgen.hpp"
#include "oracles.hpp"

using namespace drift;

namespace {

double mean_of(const std::vector<double>& v, std::size_t from, std::size_t to) {
    double s = 0.0;
    for (std::size_t i = from; i < to; ++i) s += v[i];
    return s / static_cast<double>(to - from);
}

}  // namespace

TEST_CASE("generation is a pure function of profile, type, effect and seed") {
    const DriverProfile profile = draw_profile(42, "P01");
    const DistractionEffect effect{-0.15, 8.0, 1.5, 4.0};
    const Session a = generate_session(profile, SessionType::DS2, effect, 7);
    const Session b = generate_session(profile, SessionType::DS2, effect, 7);
    REQUIRE(a.channels.size() == b.channels.size());
    for (const auto& [name, series] : a.channels) {
        CHECK(series.values == b.channels.at(name).values);
        CHECK(series.times == b.channels.at(name).times);
    }
}

TEST_CASE("zero effect with a shared seed reproduces the baseline exactly") {
    const DriverProfile profile = draw_profile(43, "P02");
    const Session ds1 =
        generate_session(profile, SessionType::DS1, DistractionEffect{}, 99);
    const Session ds4 =
        generate_session(profile, SessionType::DS4,
                         DistractionEffect{-0.5, 20.0, 3.0, 1.0}, 99);
    REQUIRE(ds1.channels.size() == 11);
    for (const auto& [name, series] : ds1.channels) {
        CHECK(series.values == ds4.channels.at(name).values);
    }
    CHECK(ds1.markers.has_value());
    CHECK_FALSE(ds4.markers.has_value());

    // ... and segment distances against that baseline vanish identically.
    const auto report = segment_distances(ds1, ds4, "VS");
    CHECK(report.delta_during == 0.0);
}

TEST_CASE("different seeds change the sample path but not the clock") {
    const DriverProfile profile = draw_profile(44, "P03");
    const Session a = generate_session(profile, SessionType::DS4, {}, 1);
    const Session b = generate_session(profile, SessionType::DS4, {}, 2);
    CHECK(a.channel("VS").times == b.channel("VS").times);
    CHECK(a.channel("VS").values != b.channel("VS").values);
    CHECK(a.channel("HR").values != b.channel("HR").values);
}

TEST_CASE("session structure") {
    const DriverProfile profile = draw_profile(45, "P04");
    const Session s = generate_session(profile, SessionType::DS5, {}, 3);
    CHECK(s.channels.size() == channel_registry().size());
    for (const auto& name : channel_registry()) CHECK(s.has_channel(name));
    REQUIRE(s.markers.has_value());
    CHECK(s.markers->distraction_start == doctest::Approx(120.0));
    CHECK(s.markers->distraction_end == doctest::Approx(300.0));
    REQUIRE(s.markers->features.size() == 2);
    CHECK(s.markers->features[0].label == FeatureLabel::straight);
    CHECK(s.markers->features[1].label == FeatureLabel::curve);

    SUBCASE("segments shorter than 10 samples are rejected") {
        CHECK_THROWS_WITH_AS(
            generate_session(profile, SessionType::DS1, {}, 3,
                             SessionDurations{0.5, 30.0, 30.0, 10.0}),
            doctest::Contains("invalid durations"), Error);
    }
}

TEST_CASE("speed shift moves the during-window mean by the requested fraction") {
    // Same-seed DS1/DS4 pairs cancel the noise; the ratio averaged over
    // 100 seeds must sit within 2% of the injected 0.8 factor.
    const DriverProfile profile = draw_profile(46, "P05");
    DistractionEffect effect;
    effect.speed_shift = -0.2;
    double ratio_sum = 0.0;
    const int seeds = 100;
    for (int s = 0; s < seeds; ++s) {
        const Session shifted = generate_session(profile, SessionType::DS1, effect,
                                                 1000 + static_cast<std::uint64_t>(s));
        const Session base = generate_session(profile, SessionType::DS4, {},
                                              1000 + static_cast<std::uint64_t>(s));
        const auto& sv = shifted.channel("VS").values;
        const auto& bv = base.channel("VS").values;
        // during window at default durations: samples [1200, 3000)
        ratio_sum += mean_of(sv, 1200, 3000) / mean_of(bv, 1200, 3000);
    }
    const double avg_ratio = ratio_sum / seeds;
    CHECK(std::abs(avg_ratio / 0.8 - 1.0) < 0.02);
}

TEST_CASE("hr shift raises the during-window mean by the requested amount") {
    const DriverProfile profile = draw_profile(47, "P06");
    DistractionEffect effect;
    effect.hr_shift_bpm = 10.0;
    double diff_sum = 0.0;
    const int seeds = 60;
    for (int s = 0; s < seeds; ++s) {
        const Session shifted = generate_session(profile, SessionType::DS1, effect,
                                                 2000 + static_cast<std::uint64_t>(s));
        const Session base = generate_session(profile, SessionType::DS4, {},
                                              2000 + static_cast<std::uint64_t>(s));
        diff_sum += mean_of(shifted.channel("HR").values, 1200, 3000) -
                    mean_of(base.channel("HR").values, 1200, 3000);
    }
    const double avg_diff = diff_sum / seeds;
    // Linear onset ramp over the default 5 s shaves a little off the mean.
    CHECK(avg_diff == doctest::Approx(10.0).epsilon(0.02));
}

TEST_CASE("panel generation") {
    std::map<SessionType, DistractionEffect> effects;
    const auto a = generate_panel(16, effects, 12345);
    CHECK(a.sessions.size() == 80);
    int ds4 = 0;
    for (const auto& gs : a.sessions) {
        if (gs.session.session_type == SessionType::DS4) ++ds4;
    }
    CHECK(ds4 == 16);

    const auto b = generate_panel(16, effects, 12345);
    REQUIRE(b.sessions.size() == a.sessions.size());
    for (std::size_t i = 0; i < a.sessions.size(); ++i) {
        CHECK(a.sessions[i].seed == b.sessions[i].seed);
        CHECK(a.sessions[i].session.participant_id ==
              b.sessions[i].session.participant_id);
        CHECK(a.sessions[i].session.channel("VS").values ==
              b.sessions[i].session.channel("VS").values);
    }

    CHECK_THROWS_AS(generate_panel(1, effects, 1), Error);
}

TEST_CASE("larger speed shifts produce larger median during-distances") {
    const SessionDurations durations{40.0, 40.0, 40.0, 10.0};
    const DriverProfile profile = draw_profile(48, "P07");
    std::vector<double> medians;
    for (const double shift : {-0.05, -0.10, -0.20}) {
        DistractionEffect effect;
        effect.speed_shift = shift;
        std::vector<double> deltas;
        for (int s = 0; s < 50; ++s) {
            const std::uint64_t seed = 3000 + static_cast<std::uint64_t>(s);
            const Session session =
                generate_session(profile, SessionType::DS1, effect, seed, durations);
            const Session baseline = generate_session(
                profile, SessionType::DS4, {}, derive_seed(seed, 555), durations);
            deltas.push_back(segment_distances(session, baseline, "VS").delta_during);
        }
        std::sort(deltas.begin(), deltas.end());
        medians.push_back(deltas[deltas.size() / 2]);
    }
    CHECK(medians[0] < medians[1]);
    CHECK(medians[1] < medians[2]);
}
