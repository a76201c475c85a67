#include "crowd/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace crowd {

std::string to_string(ScenarioKind kind) {
    return kind == ScenarioKind::corridor ? "corridor" : "room";
}

ScenarioSpec ScenarioSpec::corridor_defaults() {
    ScenarioSpec s;
    s.kind = ScenarioKind::corridor;
    s.size_x = 20.0;
    s.size_y = 5.0;
    s.target_density = 1.0;
    return s;
}

ScenarioSpec ScenarioSpec::room_defaults() {
    ScenarioSpec s;
    s.kind = ScenarioKind::room;
    s.size_x = 10.0;
    s.size_y = 10.0;
    s.door_width = 1.0;
    s.target_density = 3.0;
    return s;
}

std::size_t ScenarioSpec::population() const {
    if (agent_count) {
        return *agent_count;
    }
    return static_cast<std::size_t>(std::llround(target_density * size_x * size_y));
}

void ScenarioSpec::validate() const {
    gait.validate();
    params.validate();
    if (!(size_x > 0.0 && size_y > 0.0) || !std::isfinite(size_x) || !std::isfinite(size_y)) {
        throw std::invalid_argument("scenario.dimensions must be positive");
    }
    if (!agent_count && !(target_density >= 0.0 && std::isfinite(target_density))) {
        throw std::invalid_argument("scenario.target_density must be >= 0");
    }
    if (kind == ScenarioKind::room && !(door_width > 0.0 && door_width < size_y)) {
        throw std::invalid_argument("scenario.door_width must lie in (0, room side)");
    }
}

SpawnError::SpawnError(std::size_t requested, std::size_t achieved)
    : std::runtime_error("spawn: could only place " + std::to_string(achieved) + " of " +
                         std::to_string(requested) + " agents without overlap"),
      requested_(requested),
      achieved_(achieved) {}

RandomStream spawn_stream(std::uint64_t seed) {
    return rng_stream(seed, ~std::uint64_t{0} - 1, 0);
}

namespace {

// Bucket grid keyed by cell so each rejection test only touches nearby points.
class SpawnGrid {
public:
    SpawnGrid(double cell, const Environment& env) : cell_(cell), env_(env) {
        if (env.periodic_x) {
            cols_ = std::max(1, static_cast<int>(std::floor(env.periodic_x->period() / cell)));
            cell_x_ = env.periodic_x->period() / cols_;
        }
    }

    void insert(const Vec2& p, double body) {
        cells_[key(col(p.x), row(p.y))].push_back(points_.size());
        points_.push_back(p);
        bodies_.push_back(body);
    }

    bool fits(const Vec2& p, double body) const {
        const int c = col(p.x), r = row(p.y);
        for (int dc = -1; dc <= 1; ++dc) {
            for (int dr = -1; dr <= 1; ++dr) {
                const auto it = cells_.find(key(c + dc, r + dr));
                if (it == cells_.end()) continue;
                for (const std::size_t k : it->second) {
                    const double b = 0.5 * (body + bodies_[k]);
                    if (!(env_.separation(p, points_[k]) > b)) return false;
                }
            }
        }
        return true;
    }

private:
    int col(double x) const {
        const double x0 = env_.periodic_x ? env_.periodic_x->x_min : 0.0;
        return static_cast<int>(std::floor((x - x0) / cell_x_));
    }
    int row(double y) const { return static_cast<int>(std::floor(y / cell_)); }
    std::int64_t key(int c, int r) const {
        if (env_.periodic_x) c = ((c % cols_) + cols_) % cols_;
        return (static_cast<std::int64_t>(c) << 32) ^ static_cast<std::uint32_t>(r);
    }

    double cell_;
    double cell_x_ = cell_;
    int cols_ = 1;
    const Environment& env_;
    std::vector<Vec2> points_;
    std::vector<double> bodies_;
    std::unordered_map<std::int64_t, std::vector<std::size_t>> cells_;
};

bool clear_of_environment(const Vec2& p, double body, const Environment& env) {
    const double r = 0.5 * body;
    for (const auto& w : env.walls) {
        if (!(point_segment_distance(p, w) > r)) return false;
        if (env.periodic_x) {
            const double per = env.periodic_x->period();
            const Segment left{{w.a.x - per, w.a.y}, {w.b.x - per, w.b.y}};
            const Segment right{{w.a.x + per, w.a.y}, {w.b.x + per, w.b.y}};
            if (!(point_segment_distance(p, left) > r)) return false;
            if (!(point_segment_distance(p, right) > r)) return false;
        }
    }
    for (const auto& o : env.obstacles) {
        if (!(env.separation(p, o.center) > o.radius + r)) return false;
    }
    return true;
}

}  // namespace

std::vector<Vec2> spawn_nonoverlapping(std::size_t n, const Rect& region,
                                       std::span<const double> body_diameters,
                                       const Environment& env, RandomStream& rng) {
    if (body_diameters.size() != n) {
        throw std::invalid_argument("spawn: one body diameter per agent is required");
    }
    std::vector<Vec2> out;
    out.reserve(n);
    if (n == 0) {
        return out;
    }
    const double widest = *std::max_element(body_diameters.begin(), body_diameters.end());
    SpawnGrid grid(widest, env);
    const std::uint64_t budget = 10'000ull * n;
    std::uint64_t rejections = 0;
    while (out.size() < n) {
        const double body = body_diameters[out.size()];
        const Vec2 p{region.x0 + rng.uniform() * (region.x1 - region.x0),
                     region.y0 + rng.uniform() * (region.y1 - region.y0)};
        if (clear_of_environment(p, body, env) && grid.fits(p, body)) {
            grid.insert(p, body);
            out.push_back(p);
            continue;
        }
        if (++rejections > budget) {
            throw SpawnError(n, out.size());
        }
    }
    return out;
}

namespace {

std::vector<AgentState> make_agents(const ScenarioSpec& spec, std::span<const Vec2> positions,
                                    const Goal& goal) {
    std::vector<AgentState> agents;
    agents.reserve(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) {
        AgentState a;
        a.id = i;
        a.position = positions[i];
        a.goal = goal;
        a.gait = spec.gait;
        a.desired_step = spec.gait.mu_step;
        const AimPoint aim = aim_point(a);
        if (aim.has_point) {
            const Vec2 rel = aim.point - a.position;
            a.desired_heading = (rel.x == 0.0 && rel.y == 0.0) ? 0.0 : bearing(rel);
        } else {
            a.desired_heading = wrap_angle(aim.bearing);
        }
        a.walking = 1;
        agents.push_back(a);
    }
    return agents;
}

}  // namespace

World build_corridor(const ScenarioSpec& spec, std::uint64_t seed) {
    spec.validate();
    World world;
    world.seed = seed;
    world.params = spec.params;
    world.env.walls = {Segment{{0.0, 0.0}, {spec.size_x, 0.0}},
                       Segment{{0.0, spec.size_y}, {spec.size_x, spec.size_y}}};
    world.env.periodic_x = PeriodicAxis{0.0, spec.size_x};
    world.env.validate();

    const std::size_t n = spec.population();
    const std::vector<double> bodies(n, spec.gait.body_diameter);
    RandomStream rng = spawn_stream(seed);
    const Rect region{0.0, 0.0, spec.size_x, spec.size_y};
    const auto positions = spawn_nonoverlapping(n, region, bodies, world.env, rng);
    world.agents = make_agents(spec, positions, FixedBearing{kPi / 2.0});
    return world;
}

Segment room_door(const ScenarioSpec& spec) {
    const double mid = 0.5 * spec.size_y;
    const double half = 0.5 * spec.door_width;
    return Segment{{spec.size_x, mid - half}, {spec.size_x, mid + half}};
}

World build_room(const ScenarioSpec& spec, std::uint64_t seed) {
    spec.validate();
    if (spec.kind != ScenarioKind::room) {
        throw std::invalid_argument("build_room: scenario kind must be room");
    }
    const double sx = spec.size_x, sy = spec.size_y;
    const Segment door = room_door(spec);

    // Spawn against the closed box so positions are the same for every door width.
    Environment closed;
    closed.walls = {Segment{{0.0, 0.0}, {sx, 0.0}}, Segment{{sx, 0.0}, {sx, sy}},
                    Segment{{sx, sy}, {0.0, sy}}, Segment{{0.0, sy}, {0.0, 0.0}}};
    const std::size_t n = spec.population();
    const std::vector<double> bodies(n, spec.gait.body_diameter);
    RandomStream rng = spawn_stream(seed);
    const auto positions =
        spawn_nonoverlapping(n, Rect{0.0, 0.0, sx, sy}, bodies, closed, rng);

    World world;
    world.seed = seed;
    world.params = spec.params;
    world.env.walls = {Segment{{0.0, 0.0}, {sx, 0.0}}, Segment{{sx, 0.0}, door.a},
                       Segment{door.b, {sx, sy}}, Segment{{sx, sy}, {0.0, sy}},
                       Segment{{0.0, sy}, {0.0, 0.0}}};
    world.env.exits = {door};
    world.env.validate();
    world.agents = make_agents(spec, positions, door);
    return world;
}

World build_world(const ScenarioSpec& spec, std::uint64_t seed) {
    return spec.kind == ScenarioKind::corridor ? build_corridor(spec, seed)
                                               : build_room(spec, seed);
}

bool crosses(const Vec2& from, const Vec2& to, const Segment& exit) {
    if (from == to || !segments_intersect(Segment{from, to}, exit)) {
        return false;
    }
    const Vec2 dir = exit.b - exit.a;
    const double s0 = dir.cross(from - exit.a);
    const double s1 = dir.cross(to - exit.a);
    if (s0 == 0.0) {
        return false;  // started on the opening line; counted when it left it
    }
    return s1 == 0.0 || (s0 > 0.0) != (s1 > 0.0);
}

BoundaryResult apply_boundaries(World& world, std::span<const Vec2> previous) {
    BoundaryResult result;
    std::vector<AgentState> kept;
    kept.reserve(world.agents.size());
    for (std::size_t i = 0; i < world.agents.size(); ++i) {
        AgentState& a = world.agents[i];
        bool removed = false;
        for (std::size_t k = 0; k < world.env.exits.size() && !removed; ++k) {
            if (crosses(previous[i], a.position, world.env.exits[k])) {
                result.removed.push_back(RemovedAgent{a.id, k, previous[i], a.position});
                removed = true;
            }
        }
        if (removed) {
            continue;
        }
        if (world.env.periodic_x) {
            a.position.x = world.env.periodic_x->wrap(a.position.x);
        }
        result.survivors.push_back(i);
        kept.push_back(a);
    }
    world.agents = std::move(kept);
    return result;
}

}  // namespace crowd
