#include "crowd/decision.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace crowd {

double utility(double alpha, double phi, const ModelParams& params) {
    return params.w_alpha * alpha + params.w_phi * (1.0 - std::abs(phi) / params.phi_tau);
}

bool preferred(const Candidate& a, const Candidate& b, const ModelParams& params) {
    const double ua = utility(a.alpha, a.phi, params);
    const double ub = utility(b.alpha, b.phi, params);
    if (ua != ub) return ua > ub;
    const double pa = std::abs(a.phi), pb = std::abs(b.phi);
    if (pa != pb) return pa < pb;
    if (a.alpha != b.alpha) return a.alpha > b.alpha;
    return a.phi > b.phi;
}

Decision choose(std::span<const Candidate> feasible, const ModelParams& params) {
    if (feasible.empty()) {
        throw std::logic_error("choose: feasible set is empty");
    }
    const Candidate* best = &feasible.front();
    for (const auto& c : feasible.subspan(1)) {
        if (preferred(c, *best, params)) {
            best = &c;
        }
    }
    Decision d;
    d.alpha_hat = best->alpha;
    d.phi_hat = best->phi;
    d.target = best->target;
    d.utility = utility(best->alpha, best->phi, params);
    return d;
}

std::vector<GridCell> preference_order(const ModelParams& params) {
    std::vector<Candidate> cells;
    cells.reserve(static_cast<std::size_t>(params.n_alpha * params.n_phi));
    for (int ia = 0; ia < params.n_alpha; ++ia) {
        for (int ip = 0; ip < params.n_phi; ++ip) {
            cells.push_back(Candidate{alpha_at(params, ia), phi_at(params, ip), Vec2{}, ia, ip});
        }
    }
    std::sort(cells.begin(), cells.end(),
              [&](const Candidate& a, const Candidate& b) { return preferred(a, b, params); });
    std::vector<GridCell> order;
    order.reserve(cells.size());
    for (const auto& c : cells) {
        order.push_back(GridCell{c.alpha_index, c.phi_index, c.alpha, c.phi});
    }
    return order;
}

}  // namespace crowd
