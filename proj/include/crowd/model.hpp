#pragma once
/**
 * @file model.hpp
 * @brief Agent state, per-tick stochastic sampling and candidate kinematics.
 *
 * Each tick an agent draws a desired step length l, a desired heading theta
 * and a walking flag w. A candidate move is parameterised by a step scale
 * alpha in [0, 1] and a direction shift phi in [-phi_tau, phi_tau]:
 *
 *     target = position + alpha * l * (sin(theta + phi), cos(theta + phi)) * w
 *
 * The continuous (alpha, phi) ranges are discretised on a uniform grid.
 */

#include <cstdint>
#include <variant>
#include <vector>

#include "crowd/geometry.hpp"
#include "crowd/rng.hpp"

namespace crowd {

struct GaitParams {
    double mu_step = 0.67;          ///< mean desired step length [m]
    double sigma_step = 0.067;      ///< std-dev of desired step length [m]
    double sigma_heading = 0.05;    ///< std-dev of desired heading [rad]
    double p_walk = 1.0;            ///< probability of walking this tick
    double body_diameter = 0.4;     ///< [m]

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
    /// Largest step the truncated sampler can return.
    double max_step() const { return mu_step + 3.0 * sigma_step; }

    bool operator==(const GaitParams&) const = default;
};

struct ModelParams {
    double phi_tau = 75.0 * kPi / 180.0;  ///< max direction shift, < pi/2
    double w_alpha = 0.5;
    double w_phi = 0.5;
    int n_alpha = 21;
    int n_phi = 21;                        ///< odd so phi = 0 is on the grid
    double dt = 0.5;                       ///< tick duration [s]

    void validate() const;

    bool operator==(const ModelParams&) const = default;
};

/// Goal expressed as a fixed bearing (used for "keep walking along +x").
struct FixedBearing {
    double radians = 0.0;
    bool operator==(const FixedBearing&) const = default;
};

/// Point goal, exit-segment goal, or a fixed walking direction.
using Goal = std::variant<Vec2, Segment, FixedBearing>;

using AgentId = std::uint64_t;

struct AgentState {
    AgentId id = 0;
    Vec2 position;
    Goal goal = FixedBearing{};
    double desired_step = 0.0;     ///< l for the current tick
    double desired_heading = 0.0;  ///< theta for the current tick, in (-pi, pi]
    int walking = 1;               ///< w for the current tick, 0 or 1
    GaitParams gait;
};

struct Candidate {
    double alpha = 0.0;
    double phi = 0.0;
    Vec2 target;
    int alpha_index = 0;
    int phi_index = 0;
};

/// Grid value of the step scale: k / (n_alpha - 1), exact at both ends.
double alpha_at(const ModelParams& params, int k);
/// Grid value of the direction shift; exactly symmetric about 0.
double phi_at(const ModelParams& params, int k);

/// Draw from N(mu_step, sigma_step^2) truncated to
/// [max(0, mu - 3 sigma), mu + 3 sigma] by rejection; clamps after 64 misses.
double sample_desired_step(const GaitParams& gait, RandomStream& rng);

/// Where the agent is walking this tick. For an exit segment this is the
/// nearest point of the part of the segment a body of the agent's diameter
/// can pass through. Fixed-bearing goals carry no point.
struct AimPoint {
    bool has_point = false;
    Vec2 point;
    double bearing = 0.0;  ///< valid when !has_point (fixed-bearing goals)
};
AimPoint aim_point(const AgentState& agent);

/// Heading drawn around the bearing to the goal, wrapped into (-pi, pi].
/// An agent sitting exactly on its aim point keeps its previous heading.
double sample_desired_heading(const AgentState& agent, RandomStream& rng);

int sample_walking_state(double p_walk, RandomStream& rng);

Vec2 displacement(double alpha, double phi, double step, double heading, int walking);

/// Full n_alpha x n_phi grid, alpha-major.
std::vector<Candidate> candidate_grid(const AgentState& agent, const ModelParams& params);

}  // namespace crowd
