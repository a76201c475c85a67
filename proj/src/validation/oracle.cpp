#include <algorithm>
#include <cmath>
#include <numbers>

#include "crowd/validation.hpp"

namespace crowd::validation {

double oracle_bearing(double x, double y) { return std::atan2(x, y); }

double segment_point_gap(const Vec2& a, const Vec2& b, const Vec2& center) {
    // |a - c + t (b - a)|^2 = A t^2 + 2 B t + C, minimised on [0, 1].
    const double ux = b.x - a.x, uy = b.y - a.y;
    const double wx = a.x - center.x, wy = a.y - center.y;
    const double A = ux * ux + uy * uy;
    const double B = ux * wx + uy * wy;
    double t = 0.0;
    if (A > 0.0) {
        t = std::clamp(-B / A, 0.0, 1.0);
    }
    return std::hypot(wx + t * ux, wy + t * uy);
}

bool segment_hits_disk(const Vec2& a, const Vec2& b, const Vec2& center, double radius) {
    return segment_point_gap(a, b, center) < radius;
}

double segment_segment_gap(const Vec2& p0, const Vec2& p1, const Vec2& q0, const Vec2& q1) {
    const double d1x = p1.x - p0.x, d1y = p1.y - p0.y;
    const double d2x = q1.x - q0.x, d2y = q1.y - q0.y;
    const double rx = p0.x - q0.x, ry = p0.y - q0.y;
    const double a = d1x * d1x + d1y * d1y;
    const double e = d2x * d2x + d2y * d2y;
    const double f = d2x * rx + d2y * ry;
    double s = 0.0, t = 0.0;
    if (a == 0.0 && e == 0.0) {
        return std::hypot(rx, ry);
    }
    if (a == 0.0) {
        t = std::clamp(f / e, 0.0, 1.0);
    } else {
        const double c = d1x * rx + d1y * ry;
        if (e == 0.0) {
            s = std::clamp(-c / a, 0.0, 1.0);
        } else {
            const double b = d1x * d2x + d1y * d2y;
            const double denom = a * e - b * b;
            s = denom > 0.0 ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
            t = (b * s + f) / e;
            if (t < 0.0) {
                t = 0.0;
                s = std::clamp(-c / a, 0.0, 1.0);
            } else if (t > 1.0) {
                t = 1.0;
                s = std::clamp((b - c) / a, 0.0, 1.0);
            }
        }
    }
    // The clamped stationary point misses exact crossings of nearly parallel
    // segments only by rounding; an explicit sign test catches those.
    const auto orient = [](double ax, double ay, double bx, double by, double cx, double cy) {
        const double v = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
        return (v > 0.0) - (v < 0.0);
    };
    const int o1 = orient(p0.x, p0.y, p1.x, p1.y, q0.x, q0.y);
    const int o2 = orient(p0.x, p0.y, p1.x, p1.y, q1.x, q1.y);
    const int o3 = orient(q0.x, q0.y, q1.x, q1.y, p0.x, p0.y);
    const int o4 = orient(q0.x, q0.y, q1.x, q1.y, p1.x, p1.y);
    if (o1 * o2 < 0 && o3 * o4 < 0) {
        return 0.0;
    }
    const double gx = p0.x + s * d1x - (q0.x + t * d2x);
    const double gy = p0.y + s * d1y - (q0.y + t * d2y);
    const double g = std::hypot(gx, gy);
    // Endpoint distances guard against the clamping shortcut above.
    return std::min({g, segment_point_gap(q0, q1, p0), segment_point_gap(q0, q1, p1),
                     segment_point_gap(p0, p1, q0), segment_point_gap(p0, p1, q1)});
}

namespace {

struct Shadow {
    Vec2 pos;
    double b = 0.0;
    double d = 0.0;
    double psi = 0.0;
    double half_width = 0.0;
};

std::vector<double> image_shifts(const Environment& env) {
    if (!env.periodic_x) return {0.0};
    const double p = env.periodic_x->x_max - env.periodic_x->x_min;
    return {0.0, -p, p};
}

}  // namespace

OracleChoice oracle_choose(const World& world, std::size_t self, const AgentState& a) {
    const ModelParams& mp = world.params;
    const int half = (mp.n_phi - 1) / 2;
    OracleChoice best;
    best.phi_index = half;
    if (a.walking == 0) {
        return best;
    }

    const Vec2 s = a.position;
    const double l = a.desired_step;
    const double c = a.gait.body_diameter / 2.0;

    std::vector<Shadow> shadows;
    for (std::size_t j = 0; j < world.agents.size(); ++j) {
        if (j == self) continue;
        const AgentState& o = world.agents[j];
        Vec2 q = o.position;
        if (world.env.periodic_x) {
            const double p = world.env.periodic_x->x_max - world.env.periodic_x->x_min;
            const double dx = q.x - s.x;
            if (dx > p / 2) q.x -= p;
            else if (dx < -p / 2) q.x += p;
        }
        const double b = (a.gait.body_diameter + o.gait.body_diameter) / 2.0;
        const double d = std::hypot(q.x - s.x, q.y - s.y);
        if (!(d < l + b)) continue;
        Shadow sh{q, b, d, oracle_bearing(q.x - s.x, q.y - s.y), 0.0};
        sh.half_width = b >= d ? std::numbers::pi / 2 : std::asin(b / d);
        shadows.push_back(sh);
    }

    const auto shifts = image_shifts(world.env);
    const auto blocked = [&](const Vec2& t) {
        const double tx = t.x - s.x, ty = t.y - s.y;
        if (tx == 0.0 && ty == 0.0) return false;
        const double dist = std::hypot(tx, ty);
        const double bearing = oracle_bearing(tx, ty);
        for (const Shadow& sh : shadows) {
            if (std::hypot(t.x - sh.pos.x, t.y - sh.pos.y) <= sh.b) return true;
            const double off = std::remainder(bearing - sh.psi, 2.0 * std::numbers::pi);
            if (dist > sh.d * std::cos(sh.half_width) && std::abs(off) <= sh.half_width) {
                return true;
            }
        }
        for (const double dx : shifts) {
            for (const Segment& w : world.env.walls) {
                const Vec2 wa{w.a.x + dx, w.a.y}, wb{w.b.x + dx, w.b.y};
                if (segment_segment_gap(s, t, wa, wb) < c) return true;
            }
            for (const Disk& o : world.env.obstacles) {
                if (segment_hits_disk(s, t, Vec2{o.center.x + dx, o.center.y}, o.radius + c)) {
                    return true;
                }
            }
        }
        return false;
    };

    bool have = false;
    double best_u = 0.0;
    for (int ia = 0; ia < mp.n_alpha; ++ia) {
        const double alpha = static_cast<double>(ia) / static_cast<double>(mp.n_alpha - 1);
        for (int ip = 0; ip < mp.n_phi; ++ip) {
            const double phi =
                mp.phi_tau * static_cast<double>(ip - half) / static_cast<double>(half);
            const double scale = alpha * l * static_cast<double>(a.walking);
            const double h = a.desired_heading + phi;
            const Vec2 t{s.x + std::sin(h) * scale, s.y + std::cos(h) * scale};
            if (alpha != 0.0 && blocked(t)) continue;
            ++best.feasible_count;
            const double u = mp.w_alpha * alpha + mp.w_phi * (1.0 - std::abs(phi) / mp.phi_tau);
            bool better = !have || u > best_u;
            if (have && u == best_u) {
                if (std::abs(phi) != std::abs(best.phi)) {
                    better = std::abs(phi) < std::abs(best.phi);
                } else if (alpha != best.alpha) {
                    better = alpha > best.alpha;
                } else {
                    better = phi > best.phi;
                }
            }
            if (better) {
                have = true;
                best_u = u;
                best.alpha_index = ia;
                best.phi_index = ip;
                best.alpha = alpha;
                best.phi = phi;
            }
        }
    }
    return best;
}

World random_instance(std::uint64_t seed, std::uint64_t index) {
    RandomStream rng = rng_stream(seed, index, 0x0AC1E);
    const auto uni = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };

    World w;
    w.seed = rng.next_u64();
    w.tick = rng.below(1000);
    if (rng.uniform() < 0.3) {
        ModelParams& p = w.params;
        p.n_alpha = 2 + static_cast<int>(rng.below(30));
        p.n_phi = 3 + 2 * static_cast<int>(rng.below(15));
        p.phi_tau = uni(0.1, 1.55);
        static constexpr double kWeights[] = {0.0, 0.25, 0.5, 0.75, 1.0};
        p.w_alpha = kWeights[rng.below(5)];
        p.w_phi = 1.0 - p.w_alpha;
    }

    const bool periodic = rng.uniform() < 0.25;
    const double span = periodic ? uni(4.0, 8.0) : 10.0;
    if (periodic) w.env.periodic_x = PeriodicAxis{0.0, span};

    AgentState self;
    self.id = 0;
    self.gait.mu_step = uni(0.3, 1.0);
    self.gait.sigma_step = self.gait.mu_step * uni(0.0, 0.15);
    self.gait.sigma_heading = uni(0.0, 0.5);
    self.gait.p_walk = rng.uniform() < 0.1 ? 0.5 : 1.0;
    self.gait.body_diameter = rng.uniform() < 0.7 ? 0.4 : uni(0.3, 0.55);
    // Near the seam half the time so periodic images matter.
    self.position = {periodic && rng.uniform() < 0.5 ? uni(0.0, 0.8) : uni(0.0, span), uni(2.0, 8.0)};
    if (rng.uniform() < 0.5) {
        self.goal = FixedBearing{uni(-std::numbers::pi, std::numbers::pi)};
    } else {
        self.goal = Vec2{self.position.x + uni(-5.0, 5.0), self.position.y + uni(-5.0, 5.0)};
    }
    const double reach = self.gait.max_step() + 0.6;

    const auto wrap_x = [&](Vec2 p) {
        if (periodic) p.x = w.env.periodic_x->wrap(p.x);
        return p;
    };
    const auto far_from_walls = [&](const Vec2& p, double r) {
        for (const double dx : image_shifts(w.env)) {
            for (const Segment& seg : w.env.walls) {
                if (segment_point_gap(Vec2{seg.a.x + dx, seg.a.y}, Vec2{seg.b.x + dx, seg.b.y}, p) <= r) {
                    return false;
                }
            }
            for (const Disk& o : w.env.obstacles) {
                if (std::hypot(p.x - o.center.x - dx, p.y - o.center.y) <= o.radius + r) return false;
            }
        }
        return true;
    };

    const std::size_t n_walls = rng.uniform() < 0.6 ? 1 + rng.below(3) : 0;
    for (std::size_t k = 0; k < n_walls; ++k) {
        for (int attempt = 0; attempt < 50; ++attempt) {
            const double ang = uni(-std::numbers::pi, std::numbers::pi);
            const double r = uni(0.0, reach);
            const Vec2 mid{self.position.x + r * std::sin(ang), self.position.y + r * std::cos(ang)};
            const double dir = uni(0.0, std::numbers::pi);
            const double len = uni(0.2, 4.0);
            const Vec2 half{0.5 * len * std::cos(dir), 0.5 * len * std::sin(dir)};
            const Segment seg{mid - half, mid + half};
            if (segment_point_gap(seg.a, seg.b, self.position) > self.gait.body_diameter / 2.0 + 1e-6) {
                w.env.walls.push_back(seg);
                break;
            }
        }
    }
    if (rng.uniform() < 0.3) {
        for (int attempt = 0; attempt < 50; ++attempt) {
            const double ang = uni(-std::numbers::pi, std::numbers::pi);
            const double r = uni(0.3, reach + 0.3);
            const Disk o{{self.position.x + r * std::sin(ang), self.position.y + r * std::cos(ang)},
                         uni(0.05, 0.6)};
            if (std::hypot(o.center.x - self.position.x, o.center.y - self.position.y) >
                o.radius + self.gait.body_diameter / 2.0 + 1e-6) {
                w.env.obstacles.push_back(o);
                break;
            }
        }
    }
    self.position = wrap_x(self.position);
    w.agents.push_back(self);

    const std::size_t n_others = rng.below(15);
    for (std::size_t k = 0; k < n_others; ++k) {
        AgentState o;
        o.id = k + 1;
        o.gait.p_walk = 0.0;
        o.gait.body_diameter = rng.uniform() < 0.7 ? 0.4 : uni(0.3, 0.55);
        o.goal = FixedBearing{0.0};
        for (int attempt = 0; attempt < 100; ++attempt) {
            const double ang = uni(-std::numbers::pi, std::numbers::pi);
            const double r = uni(0.0, reach + 0.5);
            const Vec2 p = wrap_x({self.position.x + r * std::sin(ang), self.position.y + r * std::cos(ang)});
            bool ok = far_from_walls(p, 0.0);
            for (const AgentState& other : w.agents) {
                const double b = 0.5 * (o.gait.body_diameter + other.gait.body_diameter);
                ok = ok && w.env.separation(p, other.position) > b;
            }
            if (ok) {
                o.position = p;
                w.agents.push_back(o);
                break;
            }
        }
    }
    return w;
}

}  // namespace crowd::validation
