#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "crowd/geometry.hpp"
#include "crowd/rng.hpp"
#include "crowd/validation.hpp"

using namespace crowd;
using Catch::Matchers::WithinAbs;

namespace {

// Dense sampling of both segments; an approximation from above.
double sampled_segment_gap(const Vec2& p0, const Vec2& p1, const Vec2& q0, const Vec2& q1) {
    double best = 1e300;
    constexpr int n = 2000;
    for (int i = 0; i <= n; ++i) {
        const Vec2 p = p0 + (p1 - p0) * (static_cast<double>(i) / n);
        best = std::min(best, validation::segment_point_gap(q0, q1, p));
    }
    return best;
}

}  // namespace

TEST_CASE("atan2_paper examples") {
    CHECK_THAT(atan2_paper(1, 0), WithinAbs(kPi / 2, 1e-15));
    CHECK(atan2_paper(0, 1) == 0.0);
    CHECK(atan2_paper(0, -1) == kPi);
    CHECK_THAT(atan2_paper(1, 1), WithinAbs(validation::oracle_bearing(1, 1), 1e-15));
    CHECK_THAT(atan2_paper(1, 1), WithinAbs(kPi / 4, 1e-15));
    CHECK_THROWS_AS(atan2_paper(0, 0), std::domain_error);
}

TEST_CASE("atan2_paper left half and near the seam") {
    CHECK_THAT(atan2_paper(-1, 0), WithinAbs(-kPi / 2, 1e-15));
    CHECK_THAT(atan2_paper(-1, -1), WithinAbs(-3 * kPi / 4, 1e-15));
    CHECK_THAT(atan2_paper(1e-300, -1), WithinAbs(kPi, 1e-15));
    CHECK_THAT(atan2_paper(-1e-300, -1), WithinAbs(-kPi, 1e-15));
}

TEST_CASE("atan2_paper matches the bearing oracle on random inputs") {
    RandomStream rng = rng_stream(1, 2, 3);
    for (int k = 0; k < 10000; ++k) {
        const double scale = std::pow(10.0, -3.0 + 6.0 * rng.uniform());
        const double x = scale * (2 * rng.uniform() - 1);
        const double y = scale * (2 * rng.uniform() - 1);
        const double got = atan2_paper(x, y);
        const double want = validation::oracle_bearing(x, y);
        CHECK(got > -kPi);
        CHECK(got <= kPi);
        REQUIRE_THAT(got, WithinAbs(want, 1e-12));
        const Vec2 h = heading_vector(got);
        REQUIRE(std::abs(h.cross(Vec2{x, y})) < 1e-9 * Vec2{x, y}.norm());
    }
}

TEST_CASE("heading_vector examples") {
    CHECK(heading_vector(0).x == 0.0);
    CHECK(heading_vector(0).y == 1.0);
    CHECK(heading_vector(kPi / 2).x == 1.0);
    CHECK_THAT(heading_vector(kPi / 2).y, WithinAbs(0, 1e-15));
    CHECK_THAT(heading_vector(kPi).x, WithinAbs(0, 1e-15));
    CHECK(heading_vector(kPi).y == -1.0);
}

TEST_CASE("wrap_angle examples and invariance") {
    CHECK(wrap_angle(0) == 0.0);
    CHECK_THAT(wrap_angle(3 * kPi), WithinAbs(kPi, 1e-12));
    CHECK_THAT(wrap_angle(-3 * kPi / 2), WithinAbs(kPi / 2, 1e-12));
    CHECK(wrap_angle(kPi) == kPi);
    CHECK(wrap_angle(-kPi) == kPi);

    RandomStream rng = rng_stream(9, 0, 0);
    for (int n = 0; n < 10000; ++n) {
        const double a = 20.0 * (rng.uniform() - 0.5);
        const int k = static_cast<int>(rng.below(21)) - 10;
        const double w = wrap_angle(a);
        REQUIRE(w > -kPi);
        REQUIRE(w <= kPi);
        const double shifted = wrap_angle(a + 2 * kPi * k);
        // Congruent representatives; compare on the circle to survive the seam.
        REQUIRE(std::abs(std::remainder(shifted - w, 2 * kPi)) < 1e-9);
    }
}

TEST_CASE("distance examples") {
    CHECK(distance({0, 0}, {3, 4}) == 5.0);
    CHECK(distance({1.5, -2}, {1.5, -2}) == 0.0);
    CHECK_THAT(distance({0, 0}, {1, 1}), WithinAbs(std::numbers::sqrt2, 1e-15));
}

TEST_CASE("point_segment_distance examples") {
    const Segment seg{{-1, 0}, {1, 0}};
    CHECK(point_segment_distance({0, 1}, seg) == 1.0);
    CHECK(point_segment_distance({2, 0}, seg) == 1.0);
    CHECK(point_segment_distance({0.25, 0}, seg) == 0.0);
}

TEST_CASE("path_clear examples") {
    const Segment stub{{1, -1}, {1, 0.9}};
    CHECK_FALSE(path_clear({0, 1}, {2, 1}, stub, 0.2));
    const double gap = segment_segment_distance(Segment{{0, 1}, {2, 1}}, stub);
    CHECK_THAT(gap, WithinAbs(sampled_segment_gap({0, 1}, {2, 1}, stub.a, stub.b), 1e-6));
    CHECK_THAT(gap, WithinAbs(0.1, 1e-12));
    CHECK(path_clear({0, 1}, {2, 1}, Segment{{0, 0}, {2, 0}}, 0.5));
    CHECK(path_clear({5, 5}, {5, 5}, Segment{{0, 0}, {2, 0}}, 0.5));
}

TEST_CASE("path_clear is symmetric and agrees with the segment oracle") {
    RandomStream rng = rng_stream(5, 5, 5);
    const auto pt = [&] { return Vec2{4 * rng.uniform(), 4 * rng.uniform()}; };
    for (int k = 0; k < 5000; ++k) {
        const Vec2 a = pt(), b = pt();
        const Segment s{pt(), pt()};
        const double c = rng.uniform();
        REQUIRE(path_clear(a, b, s, c) == path_clear(b, a, s, c));
        const double want = validation::segment_segment_gap(a, b, s.a, s.b);
        REQUIRE_THAT(segment_segment_distance(Segment{a, b}, s), WithinAbs(want, 1e-12));
    }
}

TEST_CASE("segments_intersect handles touching and collinear cases") {
    CHECK(segments_intersect({{0, 0}, {2, 0}}, {{1, 0}, {1, 1}}));
    CHECK(segments_intersect({{0, 0}, {2, 0}}, {{1, 0}, {3, 0}}));
    CHECK_FALSE(segments_intersect({{0, 0}, {1, 0}}, {{2, 0}, {3, 0}}));
    CHECK_FALSE(segments_intersect({{0, 0}, {1, 1}}, {{0, 1}, {0.4, 0.6000001}}));
}
