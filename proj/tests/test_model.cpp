#include <catch_amalgamated.hpp>

#include <cmath>

#include "crowd/model.hpp"

using namespace crowd;
using Catch::Matchers::WithinAbs;

namespace {

AgentState agent_at(Vec2 pos, Goal goal) {
    AgentState a;
    a.position = pos;
    a.goal = goal;
    return a;
}

}  // namespace

TEST_CASE("parameter validation names the field") {
    GaitParams g;
    CHECK_NOTHROW(g.validate());
    g.mu_step = 0.0;
    CHECK_THROWS_WITH(g.validate(), Catch::Matchers::ContainsSubstring("gait.mu_step"));
    g = GaitParams{};
    g.p_walk = 1.5;
    CHECK_THROWS_WITH(g.validate(), Catch::Matchers::ContainsSubstring("gait.p_walk"));

    ModelParams p;
    CHECK_NOTHROW(p.validate());
    p.phi_tau = kPi / 2;
    CHECK_THROWS_WITH(p.validate(), Catch::Matchers::ContainsSubstring("model.phi_tau"));
    p = ModelParams{};
    p.w_alpha = 0.7;
    CHECK_THROWS_WITH(p.validate(), Catch::Matchers::ContainsSubstring("w_phi"));
    p = ModelParams{};
    p.n_phi = 20;
    CHECK_THROWS_WITH(p.validate(), Catch::Matchers::ContainsSubstring("model.n_phi"));
    p = ModelParams{};
    p.n_alpha = 1;
    CHECK_THROWS_WITH(p.validate(), Catch::Matchers::ContainsSubstring("model.n_alpha"));
}

TEST_CASE("sample_desired_step") {
    GaitParams g;
    g.sigma_step = 0.0;
    RandomStream r = rng_stream(1, 0, 0);
    CHECK(sample_desired_step(g, r) == g.mu_step);

    g.mu_step = 0.67;
    g.sigma_step = 0.1;
    double sum = 0;
    constexpr int n = 100000;
    for (int k = 0; k < n; ++k) {
        const double l = sample_desired_step(g, r);
        REQUIRE(l >= 0.37 - 1e-12);
        REQUIRE(l <= 0.97 + 1e-12);
        sum += l;
    }
    CHECK(std::abs(sum / n - g.mu_step) < 0.01 * g.mu_step);

    // Truncation never goes negative.
    g.mu_step = 0.1;
    g.sigma_step = 0.2;
    for (int k = 0; k < 1000; ++k) REQUIRE(sample_desired_step(g, r) >= 0.0);
}

TEST_CASE("sample_desired_heading") {
    RandomStream r = rng_stream(2, 0, 0);
    AgentState a = agent_at({0, 0}, Vec2{0, 5});
    a.gait.sigma_heading = 0.0;
    CHECK(sample_desired_heading(a, r) == 0.0);
    a.goal = Vec2{5, 0};
    CHECK_THAT(sample_desired_heading(a, r), WithinAbs(kPi / 2, 1e-15));
    a.goal = FixedBearing{1.0};
    CHECK(sample_desired_heading(a, r) == 1.0);

    // At the goal the previous heading is kept.
    a.goal = Vec2{0, 0};
    a.desired_heading = 0.3;
    CHECK(sample_desired_heading(a, r) == 0.3);

    // Output stays in (-pi, pi] even around the seam; circular mean converges.
    a.goal = Vec2{0, -5};
    a.gait.sigma_heading = 0.5;
    double sx = 0, sy = 0;
    constexpr int n = 100000;
    for (int k = 0; k < n; ++k) {
        const double h = sample_desired_heading(a, r);
        REQUIRE(h > -kPi);
        REQUIRE(h <= kPi);
        sx += std::sin(h);
        sy += std::cos(h);
    }
    const double mean = std::atan2(sx, sy);
    CHECK(std::abs(std::remainder(mean - kPi, 2 * kPi)) < 0.01);
}

TEST_CASE("exit goals aim at the passable part of the door") {
    AgentState a = agent_at({9, 1}, Segment{{10, 4.5}, {10, 5.5}});
    a.gait.body_diameter = 0.4;
    const AimPoint below = aim_point(a);
    CHECK(below.has_point);
    CHECK(below.point.x == 10.0);
    CHECK_THAT(below.point.y, WithinAbs(4.7, 1e-12));
    a.position = {9, 5.1};
    CHECK_THAT(aim_point(a).point.y, WithinAbs(5.1, 1e-12));
    // A door narrower than the body: aim at its midpoint.
    a.goal = Segment{{10, 4.9}, {10, 5.2}};
    CHECK_THAT(aim_point(a).point.y, WithinAbs(5.05, 1e-12));
}

TEST_CASE("sample_walking_state") {
    RandomStream r = rng_stream(3, 0, 0);
    for (int k = 0; k < 1000; ++k) {
        REQUIRE(sample_walking_state(1.0, r) == 1);
        REQUIRE(sample_walking_state(0.0, r) == 0);
    }
    int sum = 0;
    constexpr int n = 100000;
    for (int k = 0; k < n; ++k) sum += sample_walking_state(0.5, r);
    CHECK(sum >= 49000);
    CHECK(sum <= 51000);
}

TEST_CASE("displacement examples") {
    const Vec2 a = displacement(1, 0, 0.7, 0, 1);
    CHECK(a.x == 0.0);
    CHECK(a.y == 0.7);
    const Vec2 b = displacement(0.8, 0.4, 0.9, -1.2, 0);
    CHECK(b.x == 0.0);
    CHECK(b.y == 0.0);
    const Vec2 c = displacement(0.5, kPi / 6, 0.6, kPi / 3, 1);
    CHECK_THAT(c.x, WithinAbs(0.3, 1e-15));
    CHECK_THAT(c.y, WithinAbs(0.0, 1e-15));

    RandomStream r = rng_stream(4, 0, 0);
    for (int k = 0; k < 1000; ++k) {
        const double alpha = r.uniform(), l = r.uniform();
        const Vec2 d = displacement(alpha, r.uniform() - 0.5, l, 6 * r.uniform() - 3, 1);
        REQUIRE_THAT(d.norm(), WithinAbs(alpha * l, 1e-12));
    }
}

TEST_CASE("candidate_grid") {
    ModelParams p;
    AgentState a = agent_at({1, 2}, FixedBearing{0.5});
    a.desired_step = 0.7;
    a.desired_heading = 0.5;
    a.walking = 1;
    const auto grid = candidate_grid(a, p);
    CHECK(grid.size() == 441);
    bool has_origin = false;
    for (const auto& c : grid) {
        REQUIRE(std::abs(c.phi) <= p.phi_tau);
        REQUIRE(distance(c.target, a.position) <= a.desired_step + 1e-12);
        if (c.alpha == 0.0) {
            REQUIRE(c.target == a.position);
            has_origin = true;
        }
    }
    CHECK(has_origin);
    CHECK(alpha_at(p, 0) == 0.0);
    CHECK(alpha_at(p, p.n_alpha - 1) == 1.0);
    CHECK(phi_at(p, 0) == -p.phi_tau);
    CHECK(phi_at(p, p.n_phi - 1) == p.phi_tau);
    CHECK(phi_at(p, (p.n_phi - 1) / 2) == 0.0);
    for (int k = 0; k < p.n_phi; ++k) REQUIRE(phi_at(p, k) == -phi_at(p, p.n_phi - 1 - k));

    a.walking = 0;
    for (const auto& c : candidate_grid(a, p)) REQUIRE(c.target == a.position);
}
