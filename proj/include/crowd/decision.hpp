#pragma once

#include <span>
#include <vector>

#include "crowd/model.hpp"

namespace crowd {

struct Decision {
    double alpha_hat = 0.0;
    double phi_hat = 0.0;
    Vec2 target;
    double utility = 0.0;
    // Draws that produced this decision; committed into the agent state.
    double step = 0.0;
    double heading = 0.0;
    int walking = 0;
};

/// w_alpha * alpha + w_phi * (1 - |phi| / phi_tau)
double utility(double alpha, double phi, const ModelParams& params);

/// Strict total preference order: higher utility, then smaller |phi|, then
/// larger alpha, then positive phi before negative.
bool preferred(const Candidate& a, const Candidate& b, const ModelParams& params);

/// Argmax of utility over a non-empty feasible set under `preferred`.
/// Throws std::logic_error on an empty set.
Decision choose(std::span<const Candidate> feasible, const ModelParams& params);

/// Grid cells (alpha_index, phi_index) sorted best-first under `preferred`.
/// Depends only on the parameters, so it is computed once per tick.
struct GridCell {
    int alpha_index = 0;
    int phi_index = 0;
    double alpha = 0.0;
    double phi = 0.0;
};
std::vector<GridCell> preference_order(const ModelParams& params);

}  // namespace crowd
