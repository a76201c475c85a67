#pragma once
/**
 * @file validation.hpp
 * @brief Independent reference implementations and the acceptance suite.
 *
 * The oracles here share no code path with perception or decision: bearings
 * come from std::atan2, path tests solve the segment/disk quadratic, and the
 * argmax is an explicit scan over every grid cell.
 */

#include <cstdint>
#include <functional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "crowd/config.hpp"
#include "crowd/engine.hpp"

namespace crowd::validation {

/// Bearing of (x, y) with 0 along +y and pi/2 along +x, via std::atan2.
double oracle_bearing(double x, double y);

/// True when segment [a, b] comes strictly closer than `radius` to `center`.
bool segment_hits_disk(const Vec2& a, const Vec2& b, const Vec2& center, double radius);

/// Closest distance between segment [a, b] and `center`, from the quadratic
/// |a + t (b - a) - center|^2 minimised over t in [0, 1].
double segment_point_gap(const Vec2& a, const Vec2& b, const Vec2& center);

/// Minimum distance between two segments by clamped parametric minimisation.
double segment_segment_gap(const Vec2& p0, const Vec2& p1, const Vec2& q0, const Vec2& q1);

struct OracleChoice {
    int alpha_index = 0;
    int phi_index = 0;
    double alpha = 0.0;
    double phi = 0.0;
    std::size_t feasible_count = 0;
};

/// Brute-force decision for `world.agents[self]`, whose desired step,
/// heading and walking flag are already drawn. Every grid cell is tested
/// against every other agent (nearest periodic image) and every wall and
/// obstacle image, then the best cell is picked by utility with ties going to
/// smaller |phi|, then larger alpha, then positive phi.
OracleChoice oracle_choose(const World& world, std::size_t self, const AgentState& drawn);

/// A small randomized world around agent 0 (id 0), which is the only agent
/// that walks. Covers heterogeneous bodies, walls, obstacles, periodic x and
/// non-default grids and weights.
World random_instance(std::uint64_t seed, std::uint64_t index);

struct CheckResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string measured;
    double seconds = 0.0;
    double budget_s = 0.0;
};

struct AcceptanceOptions {
    SimConfig corridor = default_config(ScenarioKind::corridor);  ///< criteria 1-3, 7-9
    SimConfig room = default_config(ScenarioKind::room);          ///< criteria 4 and 9
    int repeats = 10;
    std::size_t oracle_instances = 10000;
    std::uint64_t seed = 42;
};

/// Corridor and room configurations derived from one user config: its
/// model, gait and measurement settings apply to both, and its scenario
/// section applies to the matching kind only.
AcceptanceOptions options_from_config(const SimConfig& config);

CheckResult check_no_overlap(const AcceptanceOptions& opt);
CheckResult check_free_speed(const AcceptanceOptions& opt, double* mean_speed = nullptr);
CheckResult check_fd_monotone(const AcceptanceOptions& opt);
CheckResult check_bottleneck(const AcceptanceOptions& opt);
CheckResult check_decision_oracle(const AcceptanceOptions& opt);
CheckResult check_shadow_paths(const AcceptanceOptions& opt);
CheckResult check_determinism(const AcceptanceOptions& opt);
/// `base_speed` reuses the criterion 2 measurement when given.
CheckResult check_grid_stability(const AcceptanceOptions& opt, const double* base_speed = nullptr);
CheckResult check_conservation(const AcceptanceOptions& opt);

/// Runs the checks in `only` (all nine when empty) in order, reporting each
/// as it finishes. Throws std::invalid_argument for ids outside 1..9.
std::vector<CheckResult> run_acceptance(const AcceptanceOptions& opt,
                                        const std::function<void(const CheckResult&)>& on_result,
                                        const std::set<int>& only = {});

/// "[PASS] 2 free-flow speed: ... (1.2 s / 120 s)"
std::string format_result(const CheckResult& r);

}  // namespace crowd::validation
