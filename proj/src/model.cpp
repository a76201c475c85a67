#include "crowd/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace crowd {

namespace {

void require(bool ok, const char* what) {
    if (!ok) {
        throw std::invalid_argument(what);
    }
}

}  // namespace

void GaitParams::validate() const {
    require(std::isfinite(mu_step) && mu_step > 0.0, "gait.mu_step must be > 0");
    require(std::isfinite(sigma_step) && sigma_step >= 0.0, "gait.sigma_step must be >= 0");
    require(std::isfinite(sigma_heading) && sigma_heading >= 0.0,
            "gait.sigma_heading must be >= 0");
    require(p_walk >= 0.0 && p_walk <= 1.0, "gait.p_walk must lie in [0, 1]");
    require(std::isfinite(body_diameter) && body_diameter > 0.0,
            "gait.body_diameter must be > 0");
}

void ModelParams::validate() const {
    require(phi_tau > 0.0 && phi_tau < kPi / 2.0, "model.phi_tau must lie in (0, pi/2)");
    require(w_alpha >= 0.0 && w_alpha <= 1.0, "model.w_alpha must lie in [0, 1]");
    require(w_phi >= 0.0 && w_phi <= 1.0, "model.w_phi must lie in [0, 1]");
    require(std::abs(w_alpha + w_phi - 1.0) <= 1e-12, "model.w_alpha + model.w_phi must equal 1");
    require(n_alpha >= 2, "model.n_alpha must be >= 2");
    require(n_phi >= 3 && n_phi % 2 == 1, "model.n_phi must be odd and >= 3");
    require(std::isfinite(dt) && dt > 0.0, "model.dt must be > 0");
}

double alpha_at(const ModelParams& params, int k) {
    return static_cast<double>(k) / static_cast<double>(params.n_alpha - 1);
}

double phi_at(const ModelParams& params, int k) {
    const int half = (params.n_phi - 1) / 2;
    return params.phi_tau * static_cast<double>(k - half) / static_cast<double>(half);
}

double sample_desired_step(const GaitParams& gait, RandomStream& rng) {
    if (gait.sigma_step == 0.0) {
        return gait.mu_step;
    }
    const double lo = std::max(0.0, gait.mu_step - 3.0 * gait.sigma_step);
    const double hi = gait.mu_step + 3.0 * gait.sigma_step;
    double draw = 0.0;
    for (int attempt = 0; attempt < 64; ++attempt) {
        draw = rng.normal(gait.mu_step, gait.sigma_step);
        if (draw >= lo && draw <= hi) {
            return draw;
        }
    }
    return std::clamp(draw, lo, hi);
}

AimPoint aim_point(const AgentState& agent) {
    return std::visit(
        [&](const auto& g) -> AimPoint {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, Vec2>) {
                return {true, g, 0.0};
            } else if constexpr (std::is_same_v<T, Segment>) {
                const double len = g.length();
                const double inset = agent.gait.body_diameter / 2.0;
                if (len <= 2.0 * inset) {
                    return {true, (g.a + g.b) * 0.5, 0.0};
                }
                const Vec2 dir = (g.b - g.a) * (1.0 / len);
                const Segment passable{g.a + dir * inset, g.b - dir * inset};
                return {true, closest_point_on_segment(agent.position, passable), 0.0};
            } else {
                return {false, Vec2{}, g.radians};
            }
        },
        agent.goal);
}

double sample_desired_heading(const AgentState& agent, RandomStream& rng) {
    const AimPoint aim = aim_point(agent);
    double mean = aim.bearing;
    if (aim.has_point) {
        const Vec2 to_goal = aim.point - agent.position;
        if (to_goal.x == 0.0 && to_goal.y == 0.0) {
            // Still consume the draw so the stream layout does not depend on geometry.
            (void)rng.normal();
            return agent.desired_heading;
        }
        mean = bearing(to_goal);
    }
    return wrap_angle(rng.normal(mean, agent.gait.sigma_heading));
}

int sample_walking_state(double p_walk, RandomStream& rng) {
    return rng.bernoulli(p_walk) ? 1 : 0;
}

Vec2 displacement(double alpha, double phi, double step, double heading, int walking) {
    const double scale = alpha * step * static_cast<double>(walking);
    return heading_vector(heading + phi) * scale;
}

std::vector<Candidate> candidate_grid(const AgentState& agent, const ModelParams& params) {
    std::vector<Candidate> grid;
    grid.reserve(static_cast<std::size_t>(params.n_alpha) * static_cast<std::size_t>(params.n_phi));
    for (int ia = 0; ia < params.n_alpha; ++ia) {
        const double alpha = alpha_at(params, ia);
        for (int ip = 0; ip < params.n_phi; ++ip) {
            const double phi = phi_at(params, ip);
            const Vec2 d = displacement(alpha, phi, agent.desired_step, agent.desired_heading,
                                        agent.walking);
            grid.push_back(Candidate{alpha, phi, agent.position + d, ia, ip});
        }
    }
    return grid;
}

}  // namespace crowd
