#pragma once
/**
 * @file perception.hpp
 * @brief Which candidate positions collide with the surroundings.
 *
 * A neighbour j within reach (|s_i - s_j| < l + b_ij) excludes two regions
 * from agent i's candidate set:
 *   - its body: points within b_ij of s_j (closed disk);
 *   - its rear: points farther from s_i than d cos(dpsi) whose bearing from
 *     s_i lies within dpsi of psi, with d = |s_j - s_i|,
 *     psi = bearing(s_j - s_i) and dpsi = asin(b_ij / d).
 * Together these forbid every target whose straight path from s_i would
 * touch j's disk. Walls and obstacles forbid targets closer than b_i/2 and
 * any path that sweeps closer than b_i/2.
 */

#include <cstddef>
#include <span>
#include <vector>

#include "crowd/environment.hpp"
#include "crowd/model.hpp"
#include "crowd/spatial_index.hpp"

namespace crowd {

/// A neighbour as seen from the agent (position in the nearest periodic image).
struct Neighbor {
    std::size_t index = 0;  ///< position in the snapshot
    Vec2 position;
    double b_sum = 0.0;     ///< (b_i + b_j) / 2
};

struct ShadowParams {
    double d = 0.0;
    double psi = 0.0;
    double delta_psi = 0.0;
    double b_sum = 0.0;
    double near_limit = 0.0;  ///< d cos(delta_psi)
};

/// Everything the collision predicates need about one agent's surroundings.
struct Neighborhood {
    Vec2 origin;
    double clearance = 0.0;  ///< b_i / 2
    std::vector<Neighbor> neighbors;
    std::vector<ShadowParams> shadows;
    std::vector<Segment> walls;  ///< walls (and periodic images) within reach
    std::vector<Disk> obstacles; ///< obstacles within reach
};

/// Neighbours j != i with |s_i - s_j| < l_i + b_ij, found through the index.
std::vector<Neighbor> nearby_people(const AgentState& agent, std::span<const AgentState> snapshot,
                                    const SpatialIndex& index, const Environment& env);

/// Same result by scanning every agent; kept as the reference for the index.
std::vector<Neighbor> nearby_people_scan(const AgentState& agent,
                                         std::span<const AgentState> snapshot,
                                         const Environment& env);

/// Throws std::domain_error when the two positions coincide.
ShadowParams shadow_params(const Vec2& agent_pos, const Vec2& other_pos, double b_sum);

bool in_body(const Vec2& point, const Vec2& other_pos, double b_sum);

bool in_rear(const Vec2& point, const Vec2& agent_pos, const ShadowParams& shadow);

/// in_rear with |point - agent_pos| and its bearing already computed.
/// `has_bearing` is false for the zero offset, which is never in the rear.
bool in_rear_from(double dist, bool has_bearing, double point_bearing, const ShadowParams& shadow);

bool blocked_by_environment(const AgentState& agent, const Vec2& target, const Environment& env);

/// Gathers neighbours, their shadow parameters and the walls/obstacles an
/// agent with this tick's step length can reach.
Neighborhood perceive(const AgentState& agent, std::span<const AgentState> snapshot,
                      const SpatialIndex& index, const Environment& env);

/// True when `target` falls in a body, a rear shadow, or is blocked by the environment.
bool collides(const Neighborhood& hood, const Vec2& target);

/// Candidates that survive collision filtering. alpha = 0 (staying put) is always kept.
std::vector<Candidate> feasible_candidates(std::span<const Candidate> grid, const Neighborhood& hood);

std::vector<Candidate> feasible_candidates(const AgentState& agent, std::span<const Candidate> grid,
                                           std::span<const AgentState> snapshot,
                                           const Environment& env, const SpatialIndex& index);

}  // namespace crowd
