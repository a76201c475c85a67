#pragma once
/**
 * @file engine.hpp
 * @brief Synchronous tick loop.
 *
 * One tick: index the snapshot, let every agent plan against it, commit the
 * plans one agent at a time in a seeded random priority order, then apply
 * boundary rules (wrapping, removal at exits).
 *
 * Planning is a pure map over an immutable snapshot, so `plan_all` runs it
 * with OpenMP. `plan_all_serial` is the straightforward reference kept for
 * tests and benchmarks; both must produce bit-identical decisions.
 */

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "crowd/decision.hpp"
#include "crowd/environment.hpp"
#include "crowd/model.hpp"
#include "crowd/spatial_index.hpp"

namespace crowd {

struct World {
    std::uint64_t tick = 0;
    std::vector<AgentState> agents;  ///< sorted by id
    Environment env;
    ModelParams params;
    std::uint64_t seed = 0;

    /// Smallest (distance - b_ij) over all pairs; +inf with fewer than two agents.
    double min_clearance() const;
};

struct RemovedAgent {
    AgentId id = 0;
    std::size_t exit_index = 0;
    Vec2 from;
    Vec2 to;
};

/// What happened to the surviving agents during one tick (aligned with world.agents).
struct StepReport {
    std::vector<double> realized_steps;
    std::vector<double> alpha;
    std::vector<double> phi;
    std::vector<int> walking;
    std::vector<double> sampled_steps;
    std::vector<RemovedAgent> removed;
};

/// Cell size covering one step plus the widest pair separation.
double index_cell_size(const World& world);

SpatialIndex build_index(const World& world);

std::vector<Decision> plan_all(const World& world, const SpatialIndex& index);
std::vector<Decision> plan_all_serial(const World& world, const SpatialIndex& index);

/// Draws l, theta and w for one agent at the world's current tick.
AgentState sample_agent(const World& world, const AgentState& agent);

struct CommitResult {
    std::vector<bool> accepted;
    std::vector<std::size_t> priority;  ///< indices in commit order
};

/// Accepts each target iff it keeps more than b_ij from every already
/// committed position and every not-yet-committed current position; rejected
/// agents stay where they are. Mutates positions and the per-tick draws.
CommitResult commit(World& world, std::span<const Decision> decisions);

/// index -> plan_all -> commit -> boundaries -> tick + 1
StepReport step(World& world);

struct LogRow {
    std::uint64_t tick = 0;
    double time_s = 0.0;
    AgentId agent_id = 0;
    double x = 0.0;
    double y = 0.0;
    double alpha = 0.0;
    double phi = 0.0;
    int walking = 0;
};

struct TrajectoryLog {
    std::vector<LogRow> rows;

    void append_snapshot(const World& world, const StepReport* report);
    /// `tick,time_s,agent_id,x,y,alpha,phi,walking` with shortest round-trip decimals.
    void write_csv(std::ostream& out) const;
    static TrajectoryLog read_csv(std::istream& in);
};

struct TickView {
    std::uint64_t tick;
    const World& world;
    const StepReport& report;
};

using Observer = std::function<void(const TickView&)>;

struct RunOptions {
    bool record_log = true;
    /// Stop early once the world has no agents left.
    bool stop_when_empty = false;
};

/// Steps `ticks` times, calling each observer after every tick. An observer
/// exception aborts the run with a std::runtime_error naming the tick.
TrajectoryLog run(World& world, std::uint64_t ticks, std::span<const Observer> observers,
                  RunOptions options = {});

std::string format_number(double v);

}  // namespace crowd
