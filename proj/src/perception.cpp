#include "crowd/perception.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace crowd {

namespace {

double b_sum_of(const AgentState& a, const AgentState& b) {
    return 0.5 * (a.gait.body_diameter + b.gait.body_diameter);
}

void add_wall_images(const Segment& w, const Environment& env, std::vector<Segment>& out) {
    out.push_back(w);
    if (env.periodic_x) {
        const double p = env.periodic_x->period();
        out.push_back(Segment{{w.a.x - p, w.a.y}, {w.b.x - p, w.b.y}});
        out.push_back(Segment{{w.a.x + p, w.a.y}, {w.b.x + p, w.b.y}});
    }
}

void add_obstacle_images(const Disk& o, const Environment& env, std::vector<Disk>& out) {
    out.push_back(o);
    if (env.periodic_x) {
        const double p = env.periodic_x->period();
        out.push_back(Disk{{o.center.x - p, o.center.y}, o.radius});
        out.push_back(Disk{{o.center.x + p, o.center.y}, o.radius});
    }
}

bool environment_blocks(const Vec2& from, const Vec2& target, double clearance,
                        std::span<const Segment> walls, std::span<const Disk> obstacles) {
    for (const auto& w : walls) {
        if (point_segment_distance(target, w) < clearance) {
            return true;
        }
        if (!path_clear(from, target, w, clearance)) {
            return true;
        }
    }
    const Segment path{from, target};
    for (const auto& o : obstacles) {
        const double keep = o.radius + clearance;
        if (distance(target, o.center) < keep) {
            return true;
        }
        if (point_segment_distance(o.center, path) < keep) {
            return true;
        }
    }
    return false;
}

}  // namespace

std::vector<Neighbor> nearby_people(const AgentState& agent, std::span<const AgentState> snapshot,
                                    const SpatialIndex& index, const Environment& env) {
    std::vector<Neighbor> out;
    const double query_radius =
        agent.desired_step + 0.5 * (agent.gait.body_diameter + index.max_body());
    index.query(agent.position, query_radius, [&](std::size_t j) {
        const AgentState& other = snapshot[j];
        if (other.id == agent.id) {
            return;
        }
        const Vec2 pos = env.nearest_image(agent.position, other.position);
        const double b = b_sum_of(agent, other);
        if (distance(agent.position, pos) < agent.desired_step + b) {
            out.push_back(Neighbor{j, pos, b});
        }
    });
    std::sort(out.begin(), out.end(),
              [](const Neighbor& a, const Neighbor& b) { return a.index < b.index; });
    return out;
}

std::vector<Neighbor> nearby_people_scan(const AgentState& agent,
                                         std::span<const AgentState> snapshot,
                                         const Environment& env) {
    std::vector<Neighbor> out;
    for (std::size_t j = 0; j < snapshot.size(); ++j) {
        const AgentState& other = snapshot[j];
        if (other.id == agent.id) {
            continue;
        }
        const Vec2 pos = env.nearest_image(agent.position, other.position);
        const double b = b_sum_of(agent, other);
        if (distance(agent.position, pos) < agent.desired_step + b) {
            out.push_back(Neighbor{j, pos, b});
        }
    }
    return out;
}

ShadowParams shadow_params(const Vec2& agent_pos, const Vec2& other_pos, double b_sum) {
    const Vec2 rel = other_pos - agent_pos;
    const double d = rel.norm();
    if (d == 0.0) {
        throw std::domain_error("shadow_params: two agents share the same position");
    }
    ShadowParams s;
    s.d = d;
    s.psi = atan2_paper(rel.x, rel.y);
    s.delta_psi = (b_sum >= d) ? kPi / 2.0 : std::asin(b_sum / d);
    s.b_sum = b_sum;
    s.near_limit = d * std::cos(s.delta_psi);
    return s;
}

bool in_body(const Vec2& point, const Vec2& other_pos, double b_sum) {
    return distance(point, other_pos) <= b_sum;
}

bool in_rear_from(double dist, bool has_bearing, double point_bearing, const ShadowParams& shadow) {
    if (!has_bearing || !(dist > shadow.near_limit)) {
        return false;
    }
    return std::abs(wrap_angle(point_bearing - shadow.psi)) <= shadow.delta_psi;
}

bool in_rear(const Vec2& point, const Vec2& agent_pos, const ShadowParams& shadow) {
    const Vec2 rel = point - agent_pos;
    const bool has_bearing = !(rel.x == 0.0 && rel.y == 0.0);
    const double b = has_bearing ? atan2_paper(rel.x, rel.y) : 0.0;
    return in_rear_from(rel.norm(), has_bearing, b, shadow);
}

bool blocked_by_environment(const AgentState& agent, const Vec2& target, const Environment& env) {
    std::vector<Segment> walls;
    std::vector<Disk> obstacles;
    for (const auto& w : env.walls) add_wall_images(w, env, walls);
    for (const auto& o : env.obstacles) add_obstacle_images(o, env, obstacles);
    return environment_blocks(agent.position, target, 0.5 * agent.gait.body_diameter, walls,
                              obstacles);
}

Neighborhood perceive(const AgentState& agent, std::span<const AgentState> snapshot,
                      const SpatialIndex& index, const Environment& env) {
    Neighborhood hood;
    hood.origin = agent.position;
    hood.clearance = 0.5 * agent.gait.body_diameter;
    hood.neighbors = nearby_people(agent, snapshot, index, env);
    hood.shadows.reserve(hood.neighbors.size());
    for (const auto& n : hood.neighbors) {
        hood.shadows.push_back(shadow_params(agent.position, n.position, n.b_sum));
    }

    // Anything farther than step + clearance (plus slack for rounding in
    // |target - origin|) cannot block a candidate, so it is skipped.
    const double reach = agent.desired_step * agent.walking + hood.clearance + 1e-9;
    std::vector<Segment> walls;
    for (const auto& w : env.walls) add_wall_images(w, env, walls);
    for (const auto& w : walls) {
        if (point_segment_distance(agent.position, w) < reach) {
            hood.walls.push_back(w);
        }
    }
    std::vector<Disk> obstacles;
    for (const auto& o : env.obstacles) add_obstacle_images(o, env, obstacles);
    for (const auto& o : obstacles) {
        if (distance(agent.position, o.center) < reach + o.radius) {
            hood.obstacles.push_back(o);
        }
    }
    return hood;
}

bool collides(const Neighborhood& hood, const Vec2& target) {
    const Vec2 rel = target - hood.origin;
    const bool has_bearing = !(rel.x == 0.0 && rel.y == 0.0);
    if (!has_bearing) {
        return false;  // staying put is valid by the no-overlap invariant
    }
    const double dist = rel.norm();
    bool have_bearing = false;
    double b = 0.0;
    for (std::size_t k = 0; k < hood.neighbors.size(); ++k) {
        const Neighbor& nb = hood.neighbors[k];
        // Squared-distance screen with margin; the exact test runs only near the boundary.
        const Vec2 gap = target - nb.position;
        const bool maybe_body = gap.x * gap.x + gap.y * gap.y <= nb.b_sum * nb.b_sum * (1.0 + 1e-9);
        if (maybe_body && in_body(target, nb.position, nb.b_sum)) {
            return true;
        }
        if (!(dist > hood.shadows[k].near_limit)) {
            continue;
        }
        if (!have_bearing) {
            b = atan2_paper(rel.x, rel.y);
            have_bearing = true;
        }
        if (in_rear_from(dist, true, b, hood.shadows[k])) {
            return true;
        }
    }
    return environment_blocks(hood.origin, target, hood.clearance, hood.walls, hood.obstacles);
}

std::vector<Candidate> feasible_candidates(std::span<const Candidate> grid, const Neighborhood& hood) {
    std::vector<Candidate> out;
    out.reserve(grid.size());
    for (const auto& c : grid) {
        if (c.alpha == 0.0 || !collides(hood, c.target)) {
            out.push_back(c);
        }
    }
    return out;
}

std::vector<Candidate> feasible_candidates(const AgentState& agent, std::span<const Candidate> grid,
                                           std::span<const AgentState> snapshot,
                                           const Environment& env, const SpatialIndex& index) {
    return feasible_candidates(grid, perceive(agent, snapshot, index, env));
}

}  // namespace crowd
