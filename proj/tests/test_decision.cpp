#include <catch_amalgamated.hpp>

#include <algorithm>

#include "crowd/decision.hpp"
#include "crowd/rng.hpp"

using namespace crowd;
using Catch::Matchers::WithinAbs;

namespace {

std::vector<Candidate> full_grid(const ModelParams& p) {
    AgentState a;
    a.desired_step = 0.7;
    a.walking = 1;
    return candidate_grid(a, p);
}

// Exhaustive argmax written out independently of `preferred`.
const Candidate& brute_best(const std::vector<Candidate>& set, const ModelParams& p) {
    double top = -1;
    for (const auto& c : set) top = std::max(top, utility(c.alpha, c.phi, p));
    std::vector<const Candidate*> tied;
    for (const auto& c : set) {
        if (utility(c.alpha, c.phi, p) == top) tied.push_back(&c);
    }
    double min_abs_phi = 1e9;
    for (const auto* c : tied) min_abs_phi = std::min(min_abs_phi, std::abs(c->phi));
    std::erase_if(tied, [&](const Candidate* c) { return std::abs(c->phi) != min_abs_phi; });
    double max_alpha = -1;
    for (const auto* c : tied) max_alpha = std::max(max_alpha, c->alpha);
    std::erase_if(tied, [&](const Candidate* c) { return c->alpha != max_alpha; });
    return **std::max_element(tied.begin(), tied.end(),
                              [](const Candidate* a, const Candidate* b) { return a->phi < b->phi; });
}

}  // namespace

TEST_CASE("utility examples") {
    ModelParams p;
    CHECK(utility(1, 0, p) == 1.0);
    CHECK(utility(0, p.phi_tau, p) == 0.0);
    CHECK(utility(0, -p.phi_tau, p) == 0.0);
    CHECK_THAT(utility(0.6, p.phi_tau / 2, p), WithinAbs(0.55, 1e-15));
    p.w_alpha = 0.3;
    p.w_phi = 0.7;
    CHECK_THAT(utility(1, 0, p), WithinAbs(1.0, 1e-15));
}

TEST_CASE("choose examples") {
    const ModelParams p;
    const auto grid = full_grid(p);
    const Decision open = choose(grid, p);
    CHECK(open.alpha_hat == 1.0);
    CHECK(open.phi_hat == 0.0);

    // Straight ahead blocked; symmetric side gaps -> the +phi branch.
    std::vector<Candidate> sides;
    for (const auto& c : grid) {
        if (c.alpha == 0.0 || std::abs(c.phi) > 0.5) sides.push_back(c);
    }
    const Decision d = choose(sides, p);
    CHECK(d.phi_hat > 0.0);
    CHECK(d.target == std::find_if(sides.begin(), sides.end(), [&](const Candidate& c) {
                          return c.alpha == d.alpha_hat && c.phi == d.phi_hat;
                      })->target);

    CHECK_THROWS_AS(choose(std::vector<Candidate>{}, p), std::logic_error);
}

TEST_CASE("choose equals exhaustive argmax on random subsets, in any order") {
    RandomStream rng = rng_stream(21, 0, 0);
    for (int trial = 0; trial < 2000; ++trial) {
        ModelParams p;
        static constexpr double kWeights[] = {0.0, 0.25, 0.5, 0.75, 1.0};
        p.w_alpha = kWeights[rng.below(5)];
        p.w_phi = 1.0 - p.w_alpha;
        const auto grid = full_grid(p);
        std::vector<Candidate> subset;
        const double keep = rng.uniform();
        for (const auto& c : grid) {
            if (c.alpha == 0.0 || rng.uniform() < keep) subset.push_back(c);
        }
        const Decision d = choose(subset, p);
        const Candidate& want = brute_best(subset, p);
        REQUIRE(d.alpha_hat == want.alpha);
        REQUIRE(d.phi_hat == want.phi);
        for (const auto& c : subset) REQUIRE(utility(c.alpha, c.phi, p) <= d.utility);

        // Order invariance.
        for (std::size_t i = subset.size(); i > 1; --i) std::swap(subset[i - 1], subset[rng.below(i)]);
        const Decision e = choose(subset, p);
        REQUIRE(e.alpha_hat == d.alpha_hat);
        REQUIRE(e.phi_hat == d.phi_hat);

        if (p.w_alpha == 1.0) {
            double top = 0;
            for (const auto& c : subset) top = std::max(top, c.alpha);
            REQUIRE(d.alpha_hat == top);
        }
    }
}

TEST_CASE("preference_order is the choose order") {
    ModelParams p;
    p.w_alpha = 0.25;
    p.w_phi = 0.75;
    const auto order = preference_order(p);
    const auto grid = full_grid(p);
    REQUIRE(order.size() == grid.size());
    // The first surviving cell of the order is what choose picks from the survivors.
    RandomStream rng = rng_stream(2, 2, 2);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Candidate> subset;
        std::vector<bool> alive(grid.size());
        for (std::size_t k = 0; k < grid.size(); ++k) {
            alive[k] = grid[k].alpha == 0.0 || rng.uniform() < 0.2;
            if (alive[k]) subset.push_back(grid[k]);
        }
        const Decision d = choose(subset, p);
        for (const GridCell& cell : order) {
            const std::size_t k = static_cast<std::size_t>(cell.alpha_index * p.n_phi + cell.phi_index);
            if (!alive[k]) continue;
            REQUIRE(cell.alpha == d.alpha_hat);
            REQUIRE(cell.phi == d.phi_hat);
            break;
        }
    }
}

TEST_CASE("zero step-size weight still prefers the full step on ties") {
    // With w_alpha = 0 every alpha in a column ties; the tie rule takes the largest.
    ModelParams p;
    p.w_alpha = 0.0;
    p.w_phi = 1.0;
    const Decision d = choose(full_grid(p), p);
    CHECK(d.alpha_hat == 1.0);
    CHECK(d.phi_hat == 0.0);
}
