#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "crowd/experiments.hpp"

using namespace crowd;
using Catch::Matchers::ContainsSubstring;

namespace {

// Short runs keep the sweeps fast.
SimConfig small_corridor() {
    SimConfig c = default_config(ScenarioKind::corridor);
    c.measurement.warmup_ticks = 10;
    c.measurement.measure_ticks = 20;
    return c;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t count_lines(const std::string& s) {
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST_CASE("sweep_fd rows are ordered by density then run") {
    const auto rows = sweep_fd(small_corridor(), {1.0, 0.5}, 3);
    REQUIRE(rows.size() == 6);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        CHECK(rows[k].target_density == (k < 3 ? 1.0 : 0.5));
        CHECK(rows[k].run_index == static_cast<int>(k % 3));
        CHECK(rows[k].mean_speed > 0.0);
    }
    // Different seeds per run give different measurements.
    CHECK(rows[0].mean_speed != rows[1].mean_speed);
}

TEST_CASE("sweep_fd output is reproducible byte for byte") {
    const SimConfig c = small_corridor();
    std::ostringstream a, b;
    write_fd_csv(a, sweep_fd(c, {0.5, 2.0}, 2));
    write_fd_csv(b, sweep_fd(c, {0.5, 2.0}, 2));
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("target_density,run,mean_density,mean_speed\n", 0) == 0);
    CHECK(count_lines(a.str()) == 5);
}

TEST_CASE("sweep_bottleneck records specific flow") {
    SimConfig c = default_config(ScenarioKind::room);
    c.scenario.agent_count = 30;
    const auto rows = sweep_bottleneck(c, {0.5, 2.0}, 1);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].door_width == 0.5);
    CHECK(rows[1].door_width == 2.0);
    for (const auto& r : rows) {
        CHECK(r.specific_flow * r.door_width == Catch::Approx(r.max_flow));
        CHECK(r.max_flow >= 0.0);
    }
    CHECK(rows[1].max_flow > 0.0);
    std::ostringstream out;
    write_flow_csv(out, rows);
    CHECK(count_lines(out.str()) == 3);
}

TEST_CASE("evacuation conserves agents") {
    SimConfig c = default_config(ScenarioKind::room);
    c.scenario.agent_count = 40;
    const EvacuationResult r = run_evacuation(c, 1.5, 0);
    CHECK(r.initial_agents == 40);
    CHECK(r.total_crossings + r.remaining_agents == 40);
    CHECK(r.crossings_per_tick.size() >= 20);
}

TEST_CASE("sweep argument errors") {
    CHECK_THROWS_AS(sweep_fd(small_corridor(), {}, 1), std::invalid_argument);
    CHECK_THROWS_AS(sweep_fd(small_corridor(), {1.0}, 0), std::invalid_argument);
    CHECK_THROWS_AS(sweep_bottleneck(default_config(ScenarioKind::room), {}, 1),
                    std::invalid_argument);
}

TEST_CASE("parse_number_list") {
    CHECK(parse_number_list("0.5,1,2.25") == std::vector<double>{0.5, 1.0, 2.25});
    CHECK(parse_number_list("3") == std::vector<double>{3.0});
    CHECK_THROWS_AS(parse_number_list(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_number_list("1,,2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_number_list("1,x"), std::invalid_argument);
    CHECK_THROWS_AS(parse_number_list("1 ,2"), std::invalid_argument);
}

TEST_CASE("write_file and run_simulation") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "crowd_test_experiments";
    fs::remove_all(dir);

    write_file((dir / "a" / "b").string(), "x.txt", "hello");
    CHECK(slurp(dir / "a" / "b" / "x.txt") == "hello");
    // A regular file where a directory is needed.
    CHECK_THROWS_WITH(write_file((dir / "a" / "b" / "x.txt" / "c").string(), "y", ""),
                      ContainsSubstring("cannot create output directory"));

    SimConfig c = default_config(ScenarioKind::corridor);
    c.ticks = 10;
    run_simulation(c, (dir / "run").string(), RunOutputs{.metrics = true});
    const std::string traj = slurp(dir / "run" / "trajectory.csv");
    CHECK(count_lines(traj) == 1 + 11 * 100);
    CHECK(count_lines(slurp(dir / "run" / "roi.csv")) == 1 + 10);

    SimConfig room = default_config(ScenarioKind::room);
    room.ticks = 5;
    room.scenario.agent_count = 20;
    run_simulation(room, (dir / "room").string(), RunOutputs{.metrics = true});
    const std::string crossings = slurp(dir / "room" / "crossings.csv");
    CHECK(crossings.rfind("tick,crossings\n", 0) == 0);
    CHECK(count_lines(crossings) == 1 + 5);

    fs::remove_all(dir);
}
