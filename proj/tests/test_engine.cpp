#include <catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <sstream>

#include "crowd/engine.hpp"
#include "crowd/metrics.hpp"
#include "crowd/scenarios.hpp"
#include "crowd/validation.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace crowd;
using Catch::Matchers::WithinAbs;

namespace {

AgentState walker(AgentId id, Vec2 pos, double bearing) {
    AgentState a;
    a.id = id;
    a.position = pos;
    a.goal = FixedBearing{bearing};
    a.gait.sigma_step = 0.0;
    a.gait.sigma_heading = 0.0;
    return a;
}

World open_world(std::vector<AgentState> agents, std::uint64_t seed = 1) {
    World w;
    w.agents = std::move(agents);
    w.seed = seed;
    return w;
}

bool same_decisions(const std::vector<Decision>& a, const std::vector<Decision>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].alpha_hat != b[i].alpha_hat || a[i].phi_hat != b[i].phi_hat ||
            !(a[i].target == b[i].target) || a[i].step != b[i].step ||
            a[i].heading != b[i].heading || a[i].walking != b[i].walking) {
            return false;
        }
    }
    return true;
}

void set_threads(int n) {
#ifdef _OPENMP
    omp_set_num_threads(n);
#else
    (void)n;
#endif
}

}  // namespace

TEST_CASE("plan_all: lone agent takes the full desired step") {
    World w = open_world({walker(0, {0, 0}, 0.7)});
    w.agents[0].gait.sigma_step = 0.067;
    w.agents[0].gait.sigma_heading = 0.05;
    const auto d = plan_all(w, build_index(w));
    const AgentState drawn = sample_agent(w, w.agents[0]);
    CHECK(d[0].alpha_hat == 1.0);
    CHECK(d[0].phi_hat == 0.0);
    const Vec2 want = drawn.position + heading_vector(drawn.desired_heading) * drawn.desired_step;
    CHECK_THAT(d[0].target.x, WithinAbs(want.x, 1e-15));
    CHECK_THAT(d[0].target.y, WithinAbs(want.y, 1e-15));
}

TEST_CASE("plan_all: a standing agent stays put") {
    World w = open_world({walker(0, {1, 1}, 0.0)});
    w.agents[0].gait.p_walk = 0.0;
    const auto d = plan_all(w, build_index(w));
    CHECK(d[0].target == w.agents[0].position);
    CHECK(d[0].walking == 0);
}

TEST_CASE("plan_all equals the serial reference and ignores processing order") {
    ScenarioSpec spec = ScenarioSpec::corridor_defaults();
    spec.target_density = 3.0;
    World w = build_corridor(spec, 5);
    ScenarioSpec room = ScenarioSpec::room_defaults();
    World r = build_room(room, 5);
    for (World* world : {&w, &r}) {
        for (int t = 0; t < 15; ++t) {
            const SpatialIndex index = build_index(*world);
            const auto ref = plan_all_serial(*world, index);
            set_threads(4);
            const auto par = plan_all(*world, index);
            set_threads(1);
            const auto one = plan_all(*world, index);
            REQUIRE(same_decisions(ref, par));
            REQUIRE(same_decisions(ref, one));

            // Reverse the agent list; each id must get the same decision.
            World flipped = *world;
            std::reverse(flipped.agents.begin(), flipped.agents.end());
            const auto rev = plan_all(flipped, build_index(flipped));
            for (std::size_t i = 0; i < ref.size(); ++i) {
                const Decision& a = ref[i];
                const Decision& b = rev[ref.size() - 1 - i];
                REQUIRE(a.alpha_hat == b.alpha_hat);
                REQUIRE(a.phi_hat == b.phi_hat);
                REQUIRE(a.target == b.target);
            }
            step(*world);
        }
    }
}

TEST_CASE("commit: conflicting targets, first in priority wins") {
    World w = open_world({walker(0, {0, 0}, kPi / 2), walker(1, {2, 0}, -kPi / 2)});
    std::vector<Decision> d(2);
    d[0].target = {0.85, 0};
    d[1].target = {1.15, 0};
    const CommitResult c = commit(w, d);
    const std::size_t first = c.priority[0], second = c.priority[1];
    CHECK(c.accepted[first]);
    CHECK_FALSE(c.accepted[second]);
    CHECK(w.agents[first].position == d[first].target);
    CHECK(w.agents[second].position == (second == 0 ? Vec2{0, 0} : Vec2{2, 0}));
    CHECK(w.min_clearance() > 0.0);
}

TEST_CASE("commit: a mover may not land on someone who stays") {
    World w = open_world({walker(0, {0, 0}, kPi / 2), walker(1, {0.9, 0}, 0.0)});
    std::vector<Decision> d(2);
    d[0].target = {0.6, 0};
    d[1].target = {0.9, 0};
    const CommitResult c = commit(w, d);
    CHECK_FALSE(c.accepted[0]);
    CHECK(w.agents[0].position == Vec2{0, 0});
}

TEST_CASE("commit: conflict-free decisions are all accepted verbatim") {
    World w = open_world({walker(0, {0, 0}, 0), walker(1, {3, 0}, 0), walker(2, {6, 0}, 0)});
    std::vector<Decision> d(3);
    for (std::size_t i = 0; i < 3; ++i) d[i].target = w.agents[i].position + Vec2{0.1, 0.5};
    const CommitResult c = commit(w, d);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(c.accepted[i]);
        CHECK(w.agents[i].position == d[i].target);
    }
    CHECK_THROWS_AS(commit(w, std::vector<Decision>(2)), std::invalid_argument);
}

TEST_CASE("step: empty world only advances the tick") {
    World w;
    w.tick = 4;
    const StepReport r = step(w);
    CHECK(w.tick == 5);
    CHECK(r.removed.empty());
    CHECK(w.agents.empty());
}

TEST_CASE("step: straight free run covers k * mu") {
    World w = open_world({walker(0, {0, 0}, 0.3)});
    const int k = 25;
    for (int t = 0; t < k; ++t) step(w);
    const double mu = w.agents[0].gait.mu_step;
    CHECK_THAT(w.agents[0].position.x, WithinAbs(k * mu * std::sin(0.3), 1e-12));
    CHECK_THAT(w.agents[0].position.y, WithinAbs(k * mu * std::cos(0.3), 1e-12));
}

TEST_CASE("step: identical seeds give bit-identical runs; displacement is bounded") {
    ScenarioSpec spec = ScenarioSpec::corridor_defaults();
    spec.target_density = 2.0;
    World a = build_corridor(spec, 9), b = build_corridor(spec, 9);
    for (int t = 0; t < 60; ++t) {
        const StepReport ra = step(a);
        step(b);
        REQUIRE(a.agents.size() == b.agents.size());
        for (std::size_t i = 0; i < a.agents.size(); ++i) {
            REQUIRE(a.agents[i].position == b.agents[i].position);
            REQUIRE(ra.realized_steps[i] <= ra.sampled_steps[i] + 1e-12);
        }
        REQUIRE(a.min_clearance() > -1e-9);
    }
}

TEST_CASE("run: log bookkeeping and observers") {
    ScenarioSpec spec = ScenarioSpec::corridor_defaults();
    spec.target_density = 0.5;
    World w = build_corridor(spec, 3);
    const std::size_t n = w.agents.size();
    World w0 = w;
    CHECK(run(w0, 0, {}).rows.size() == n);
    const TrajectoryLog log = run(w, 10, {});
    CHECK(log.rows.size() == 11 * n);
    CHECK(w.tick == 10);

    World w2 = build_corridor(spec, 3);
    const Observer bad = [](const TickView& v) {
        if (v.tick == 4) throw std::runtime_error("sink full");
    };
    CHECK_THROWS_WITH(run(w2, 10, std::span(&bad, 1)),
                      Catch::Matchers::ContainsSubstring("observer failed at tick 4") &&
                          Catch::Matchers::ContainsSubstring("sink full"));
}

TEST_CASE("trajectory log round-trips and replays the live metrics exactly") {
    ScenarioSpec spec = ScenarioSpec::corridor_defaults();
    spec.target_density = 1.5;
    World w = build_corridor(spec, 12);
    const ROISpec roi;
    std::vector<RoiSample> live;
    const Observer sink = [&](const TickView& v) {
        live.push_back(roi_sample(v.world.agents, v.report.realized_steps, roi, v.world.params.dt));
    };
    const TrajectoryLog log = run(w, 40, std::span(&sink, 1));

    std::stringstream csv;
    log.write_csv(csv);
    const TrajectoryLog back = TrajectoryLog::read_csv(csv);
    REQUIRE(back.rows.size() == log.rows.size());
    for (std::size_t k = 0; k < log.rows.size(); ++k) {
        REQUIRE(back.rows[k].x == log.rows[k].x);
        REQUIRE(back.rows[k].y == log.rows[k].y);
        REQUIRE(back.rows[k].alpha == log.rows[k].alpha);
        REQUIRE(back.rows[k].phi == log.rows[k].phi);
        REQUIRE(back.rows[k].tick == log.rows[k].tick);
    }

    std::map<std::uint64_t, std::vector<LogRow>> by_tick;
    for (const auto& r : back.rows) by_tick[r.tick].push_back(r);
    for (std::uint64_t t = 1; t <= 40; ++t) {
        const auto& prev = by_tick[t - 1];
        const auto& now = by_tick[t];
        std::vector<AgentState> agents(now.size());
        std::vector<double> steps(now.size());
        for (std::size_t i = 0; i < now.size(); ++i) {
            agents[i].id = now[i].agent_id;
            agents[i].position = {now[i].x, now[i].y};
            REQUIRE(prev[i].agent_id == now[i].agent_id);
            steps[i] = w.env.separation({prev[i].x, prev[i].y}, agents[i].position);
        }
        const RoiSample replay = roi_sample(agents, steps, roi, w.params.dt);
        REQUIRE(replay.density == live[t - 1].density);
        REQUIRE(replay.mean_speed == live[t - 1].mean_speed);
    }

    std::stringstream broken("tick,time_s\n");
    CHECK_THROWS(TrajectoryLog::read_csv(broken));
    std::stringstream short_row("tick,time_s,agent_id,x,y,alpha,phi,walking\n1,2,3\n");
    CHECK_THROWS_WITH(TrajectoryLog::read_csv(short_row), Catch::Matchers::ContainsSubstring("line 2"));
}

TEST_CASE("format_number is shortest round-trip") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1.0) == "1");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}
