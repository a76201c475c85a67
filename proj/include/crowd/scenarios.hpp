#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "crowd/engine.hpp"

namespace crowd {

enum class ScenarioKind { corridor, room };

std::string to_string(ScenarioKind kind);

struct ScenarioSpec {
    ScenarioKind kind = ScenarioKind::corridor;
    /// Extent along x and y [m]. Corridor default 20 x 5, room default 10 x 10.
    double size_x = 20.0;
    double size_y = 5.0;
    double door_width = 1.0;  ///< room only; centered on the right wall
    /// Agents per m^2 of floor; ignored when agent_count is set.
    double target_density = 1.0;
    std::optional<std::size_t> agent_count;
    GaitParams gait;
    ModelParams params;

    static ScenarioSpec corridor_defaults();
    static ScenarioSpec room_defaults();

    std::size_t population() const;
    void validate() const;
};

struct Rect {
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
    double area() const { return (x1 - x0) * (y1 - y0); }
    bool contains(const Vec2& p) const { return p.x >= x0 && p.x < x1 && p.y >= y0 && p.y < y1; }
};

class SpawnError : public std::runtime_error {
public:
    SpawnError(std::size_t requested, std::size_t achieved);
    std::size_t requested() const { return requested_; }
    std::size_t achieved() const { return achieved_; }

private:
    std::size_t requested_;
    std::size_t achieved_;
};

/// Uniform rejection sampling of non-overlapping centers inside `region`:
/// pairwise distance > b_ij (nearest periodic image) and wall/obstacle
/// clearance > b_i / 2. Gives up after 10,000 * n rejections.
std::vector<Vec2> spawn_nonoverlapping(std::size_t n, const Rect& region,
                                       std::span<const double> body_diameters,
                                       const Environment& env, RandomStream& rng);

/// Stream reserved for spawning; ticks never reach this counter value.
RandomStream spawn_stream(std::uint64_t seed);

/// Periodic corridor along x with walls at y = 0 and y = size_y; everyone walks toward +x.
World build_corridor(const ScenarioSpec& spec, std::uint64_t seed);

/// Closed room with a door of `door_width` centered on the right wall.
/// Spawn positions do not depend on the door width.
World build_room(const ScenarioSpec& spec, std::uint64_t seed);

World build_world(const ScenarioSpec& spec, std::uint64_t seed);

/// The exit segment of a room world (the door).
Segment room_door(const ScenarioSpec& spec);

struct BoundaryResult {
    std::vector<RemovedAgent> removed;
    std::vector<std::size_t> survivors;  ///< pre-removal indices, ascending
};

/// Removes agents whose move prev -> current crossed an exit and wraps x on
/// a periodic axis. `previous` is aligned with world.agents on entry.
BoundaryResult apply_boundaries(World& world, std::span<const Vec2> previous);

/// True iff the move from -> to reaches or passes through `exit` from one side.
bool crosses(const Vec2& from, const Vec2& to, const Segment& exit);

}  // namespace crowd
