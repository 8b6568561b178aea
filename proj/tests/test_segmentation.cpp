#include <doctest.h>

#include "drift/segmentation.hpp"
#include "oracles.hpp"

using namespace drift;
using oracles::make_series;

TEST_CASE("split at 1 Hz with start=3 end=7") {
    Series s = make_series({0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
    const SegmentMarkers m{3.0, 7.0, {}};
    const auto segs = split_segments(s, m);
    CHECK(segs.before.size() == 3);
    CHECK(segs.during.size() == 4);
    CHECK(segs.after.size() == 3);
    CHECK(segs.before.values == std::vector<double>{0, 1, 2});
    CHECK(segs.during.values == std::vector<double>{3, 4, 5, 6});
    CHECK(segs.after.values == std::vector<double>{7, 8, 9});
}

TEST_CASE("markers at the edge leave an empty segment") {
    Series s = make_series({0, 1, 2, 3, 4});
    CHECK_THROWS_WITH_AS(split_segments(s, {0.0, 2.0, {}}),
                         doctest::Contains("degenerate segment"), Error);
    CHECK_THROWS_AS(split_segments(s, {1.0, 1.0, {}}), Error);
    CHECK_THROWS_AS(split_segments(s, {1.0, 9.0, {}}), Error);
}

TEST_CASE("splitting all channels of one session gives equal lengths") {
    Rng rng(91);
    Series a = make_series(oracles::random_vector(rng, 50, 0.0, 1.0), 0.1, "VS");
    Series b = make_series(oracles::random_vector(rng, 50, 60.0, 80.0), 0.1, "HR");
    const SegmentMarkers m{1.0, 3.5, {}};
    const auto sa = split_segments(a, m);
    const auto sb = split_segments(b, m);
    CHECK(sa.before.size() == sb.before.size());
    CHECK(sa.during.size() == sb.during.size());
    CHECK(sa.after.size() == sb.after.size());

    // Segment lengths depend only on times, not values.
    for (auto& v : a.values) v = v * 3.0 - 17.0;
    const auto sa2 = split_segments(a, m);
    CHECK(sa2.before.size() == sa.before.size());
    CHECK(sa2.during.size() == sa.during.size());
    CHECK(sa2.after.size() == sa.after.size());
}

TEST_CASE("extract_feature pulls the annotated half-open interval") {
    // 10 Hz, feature (curve, 100, 130) -> exactly 300 samples.
    const std::size_t n = 3000;
    std::vector<double> values(n, 1.0);
    Series s = make_series(values, 0.1);
    SegmentMarkers m{50.0, 250.0, {}};
    m.features = {{FeatureLabel::straight, 60.0, 90.0},
                  {FeatureLabel::curve, 100.0, 130.0}};
    const Series curve = extract_feature(s, m, FeatureLabel::curve);
    CHECK(curve.size() == 300);
    CHECK(curve.times.front() == doctest::Approx(100.0));
    CHECK(curve.times.back() < 130.0);

    SUBCASE("equal annotations on a shared clock give equal durations") {
        Rng rng(92);
        Series other = make_series(oracles::random_vector(rng, n, 0.0, 1.0), 0.1);
        const Series c2 = extract_feature(other, m, FeatureLabel::curve);
        CHECK(c2.size() == curve.size());
    }
    SUBCASE("missing label") {
        m.features.pop_back();
        CHECK_THROWS_WITH_AS(extract_feature(s, m, FeatureLabel::curve),
                             doctest::Contains("feature not annotated"), Error);
    }
    SUBCASE("interval without samples") {
        Series coarse = make_series({0.0, 1.0, 2.0}, 100.0);
        SegmentMarkers cm{100.0, 250.0, {{FeatureLabel::curve, 110.0, 120.0}}};
        CHECK_THROWS_WITH_AS(extract_feature(coarse, cm, FeatureLabel::curve),
                             doctest::Contains("degenerate segment"), Error);
    }
}
