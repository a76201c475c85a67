#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "crowd/experiments.hpp"
#include "crowd/perception.hpp"
#include "crowd/validation.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace crowd::validation {

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), pattern, v);
    return buf;
}

template <typename Body>
CheckResult timed(int id, std::string name, double budget_s, Body&& body) {
    CheckResult r;
    r.id = id;
    r.name = std::move(name);
    r.budget_s = budget_s;
    const auto t0 = Clock::now();
    try {
        r.passed = body(r.measured);
    } catch (const std::exception& e) {
        r.passed = false;
        r.measured = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    if (r.seconds > budget_s) {
        r.passed = false;
        r.measured += "; over the time budget";
    }
    return r;
}

ScenarioSpec corridor_at(const AcceptanceOptions& opt, double density) {
    ScenarioSpec s = opt.corridor.scenario;
    s.target_density = density;
    s.agent_count.reset();
    return s;
}

double mean_speed_at(const SimConfig& config, double density, int repeats) {
    const auto rows = sweep_fd(config, {density}, repeats);
    double sum = 0.0;
    for (const auto& r : rows) sum += r.mean_speed;
    return sum / static_cast<double>(rows.size());
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void set_threads(int n) {
#ifdef _OPENMP
    omp_set_num_threads(n);
#else
    (void)n;
#endif
}

}  // namespace

AcceptanceOptions options_from_config(const SimConfig& config) {
    AcceptanceOptions o;
    o.seed = config.seed;
    for (SimConfig* c : {&o.corridor, &o.room}) {
        c->seed = config.seed;
        c->measurement = config.measurement;
    }
    o.corridor.scenario = ScenarioSpec::corridor_defaults();
    o.room.scenario = ScenarioSpec::room_defaults();
    if (config.scenario.kind == ScenarioKind::corridor) {
        o.corridor.scenario = config.scenario;
    } else {
        o.room.scenario = config.scenario;
        o.corridor.measurement.roi = ROISpec{};
    }
    for (SimConfig* c : {&o.corridor, &o.room}) {
        c->scenario.params = config.scenario.params;
        c->scenario.gait = config.scenario.gait;
    }
    return o;
}

CheckResult check_no_overlap(const AcceptanceOptions& opt) {
    return timed(1, "no-overlap invariant", 120.0, [&](std::string& measured) {
        double worst = std::numeric_limits<double>::infinity();
        for (std::uint64_t k = 0; k < 3; ++k) {
            World world = build_corridor(corridor_at(opt, 3.0), opt.seed + k);
            worst = std::min(worst, world.min_clearance());
            const Observer watch = [&](const TickView& v) {
                worst = std::min(worst, v.world.min_clearance());
            };
            run(world, 1000, std::span(&watch, 1), RunOptions{.record_log = false});
        }
        measured = "min(distance - b_ij) = " + fmt("%.6g", worst) + " m (need > -1e-9)";
        return worst > -1e-9;
    });
}

CheckResult check_free_speed(const AcceptanceOptions& opt, double* mean_speed) {
    return timed(2, "free-flow speed", 120.0, [&](std::string& measured) {
        const double v = mean_speed_at(opt.corridor, 0.25, opt.repeats);
        if (mean_speed) *mean_speed = v;
        measured = "mean speed at 0.25/m2 = " + fmt("%.4f", v) + " m/s (need [1.27, 1.40])";
        return v >= 1.27 && v <= 1.40;
    });
}

CheckResult check_fd_monotone(const AcceptanceOptions& opt) {
    return timed(3, "fundamental-diagram monotonicity", 600.0, [&](std::string& measured) {
        const std::vector<double> densities{0.5, 1.0, 2.0, 3.0, 4.0};
        const auto rows = sweep_fd(opt.corridor, densities, opt.repeats);
        std::vector<double> v(densities.size(), 0.0);
        for (const auto& r : rows) {
            const auto k = static_cast<std::size_t>(
                std::find(densities.begin(), densities.end(), r.target_density) - densities.begin());
            v[k] += r.mean_speed / opt.repeats;
        }
        bool ok = true;
        std::ostringstream s;
        s << "speeds";
        for (std::size_t k = 0; k < v.size(); ++k) {
            s << (k ? ", " : " ") << fmt("%.3f", v[k]);
            if (k > 0 && v[k] > v[k - 1] + 0.05) ok = false;
        }
        const double ratio = v.back() / v.front();
        s << " m/s; v(4)/v(0.5) = " << fmt("%.3f", ratio) << " (need < 0.5)";
        measured = s.str();
        return ok && ratio < 0.5;
    });
}

CheckResult check_bottleneck(const AcceptanceOptions& opt) {
    return timed(4, "bottleneck linearity and monotonicity", 600.0, [&](std::string& measured) {
        const std::vector<double> widths{0.5, 1.0, 1.5, 2.0};
        const auto rows = sweep_bottleneck(opt.room, widths, opt.repeats);
        std::vector<std::pair<double, double>> means;
        for (const double w : widths) {
            double sum = 0.0;
            int n = 0;
            for (const auto& r : rows) {
                if (r.door_width == w) {
                    sum += r.max_flow;
                    ++n;
                }
            }
            means.emplace_back(w, sum / n);
        }
        bool increasing = true;
        std::ostringstream s;
        s << "mean max flow";
        for (std::size_t k = 0; k < means.size(); ++k) {
            s << (k ? ", " : " ") << fmt("%.3f", means[k].second);
            if (k > 0 && !(means[k].second > means[k - 1].second)) increasing = false;
        }
        const LinearFit fit = linear_fit(means);
        s << " 1/s; r2 = " << fmt("%.4f", fit.r_squared) << " (need >= 0.9)";
        measured = s.str();
        return increasing && fit.r_squared >= 0.9;
    });
}

CheckResult check_decision_oracle(const AcceptanceOptions& opt) {
    return timed(5, "decision-oracle equivalence", 60.0, [&](std::string& measured) {
        std::size_t mismatches = 0, constrained = 0;
        for (std::size_t k = 0; k < opt.oracle_instances; ++k) {
            const World world = random_instance(opt.seed, k);
            const SpatialIndex index = build_index(world);
            const Decision serial = plan_all_serial(world, index).front();
            const Decision fast = plan_all(world, index).front();
            const AgentState drawn = sample_agent(world, world.agents.front());
            const OracleChoice want = oracle_choose(world, 0, drawn);
            bool same = serial.alpha_hat == want.alpha && serial.phi_hat == want.phi &&
                        fast.alpha_hat == serial.alpha_hat && fast.phi_hat == serial.phi_hat &&
                        fast.target == serial.target;
            if (drawn.walking == 1) {
                const auto grid = candidate_grid(drawn, world.params);
                const auto feasible =
                    feasible_candidates(drawn, grid, world.agents, world.env, index);
                same = same && feasible.size() == want.feasible_count;
                if (want.feasible_count < grid.size()) ++constrained;
            }
            if (!same) ++mismatches;
        }
        measured = std::to_string(mismatches) + " mismatches in " +
                   std::to_string(opt.oracle_instances) + " instances (" +
                   std::to_string(constrained) + " with blocked cells)";
        return mismatches == 0;
    });
}

CheckResult check_shadow_paths(const AcceptanceOptions& opt) {
    return timed(6, "shadow/path equivalence", 60.0, [&](std::string& measured) {
        std::size_t violations = 0, paths = 0;
        for (std::size_t k = 0; k < opt.oracle_instances; ++k) {
            const World world = random_instance(opt.seed + 0x5AD0, k);
            const AgentState drawn = sample_agent(world, world.agents.front());
            if (drawn.walking == 0) continue;
            const SpatialIndex index = build_index(world);
            const auto grid = candidate_grid(drawn, world.params);
            const auto feasible = feasible_candidates(drawn, grid, world.agents, world.env, index);
            for (const Candidate& c : feasible) {
                if (c.alpha == 0.0) continue;
                ++paths;
                for (std::size_t j = 1; j < world.agents.size(); ++j) {
                    const AgentState& o = world.agents[j];
                    const Vec2 q = world.env.nearest_image(drawn.position, o.position);
                    const double b = 0.5 * (drawn.gait.body_diameter + o.gait.body_diameter);
                    if (segment_hits_disk(drawn.position, c.target, q, b - 1e-12)) ++violations;
                }
            }
        }
        measured = std::to_string(violations) + " violations over " + std::to_string(paths) +
                   " accepted paths";
        return violations == 0 && paths > 0;
    });
}

CheckResult check_determinism(const AcceptanceOptions& opt) {
    return timed(7, "determinism", 600.0, [&](std::string& measured) {
        const std::vector<double> densities{0.5, 1.0, 2.0, 3.0, 4.0};
        const int repeats = std::min(opt.repeats, 2);
        const int restore = max_threads();
        std::ostringstream first, second;
        set_threads(1);
        write_fd_csv(first, sweep_fd(opt.corridor, densities, repeats));
        set_threads(std::max(4, restore));
        write_fd_csv(second, sweep_fd(opt.corridor, densities, repeats));
        set_threads(restore);
        const bool same = first.str() == second.str();
        measured = std::string(same ? "identical" : "different") + " fd.csv (" +
                   std::to_string(first.str().size()) + " bytes, 1 vs " +
                   std::to_string(std::max(4, restore)) + " threads)";
        return same;
    });
}

CheckResult check_grid_stability(const AcceptanceOptions& opt, const double* base_speed) {
    return timed(8, "grid-resolution stability", 240.0, [&](std::string& measured) {
        const double coarse =
            base_speed ? *base_speed : mean_speed_at(opt.corridor, 0.25, opt.repeats);
        SimConfig fine = opt.corridor;
        // 2n - 1 points halve the spacing and keep every coarse cell.
        fine.scenario.params.n_alpha = 2 * fine.scenario.params.n_alpha - 1;
        fine.scenario.params.n_phi = 2 * fine.scenario.params.n_phi - 1;
        const double v = mean_speed_at(fine, 0.25, opt.repeats);
        const double change = std::abs(v - coarse) / coarse;
        measured = "speed " + fmt("%.4f", coarse) + " -> " + fmt("%.4f", v) + " m/s, change " +
                   fmt("%.3f", 100.0 * change) + "% (need < 2%)";
        return change < 0.02;
    });
}

CheckResult check_conservation(const AcceptanceOptions& opt) {
    return timed(9, "conservation", 120.0, [&](std::string& measured) {
        const EvacuationResult e = run_evacuation(opt.room, 1.0, 0);
        const bool room_ok = e.total_crossings == e.initial_agents && e.remaining_agents == 0;

        World world = build_corridor(opt.corridor.scenario, opt.seed);
        std::set<AgentId> ids;
        for (const auto& a : world.agents) ids.insert(a.id);
        const std::size_t n = world.agents.size();
        bool corridor_ok = true;
        const Observer watch = [&](const TickView& v) {
            if (v.world.agents.size() != n || !v.report.removed.empty()) corridor_ok = false;
            for (const auto& a : v.world.agents) corridor_ok = corridor_ok && ids.count(a.id) == 1;
        };
        run(world, 600, std::span(&watch, 1), RunOptions{.record_log = false});

        measured = "room: " + std::to_string(e.total_crossings) + " crossings of " +
                   std::to_string(e.initial_agents) + " agents in " +
                   std::to_string(e.crossings_per_tick.size()) + " ticks; corridor: " +
                   std::to_string(n) + " agents " + (corridor_ok ? "kept" : "NOT kept") +
                   " over 600 ticks";
        return room_ok && corridor_ok;
    });
}

std::vector<CheckResult> run_acceptance(const AcceptanceOptions& opt,
                                        const std::function<void(const CheckResult&)>& on_result,
                                        const std::set<int>& only) {
    for (const int id : only) {
        if (id < 1 || id > 9) {
            throw std::invalid_argument("no acceptance criterion " + std::to_string(id));
        }
    }
    const auto wanted = [&](int id) { return only.empty() || only.count(id) != 0; };
    std::vector<CheckResult> out;
    const auto keep = [&](CheckResult r) {
        if (on_result) on_result(r);
        out.push_back(std::move(r));
    };
    if (wanted(1)) keep(check_no_overlap(opt));
    double v = 0.0;
    bool have_v = false;
    if (wanted(2)) {
        CheckResult free = check_free_speed(opt, &v);
        have_v = free.measured.rfind("error", 0) != 0;
        keep(std::move(free));
    }
    if (wanted(3)) keep(check_fd_monotone(opt));
    if (wanted(4)) keep(check_bottleneck(opt));
    if (wanted(5)) keep(check_decision_oracle(opt));
    if (wanted(6)) keep(check_shadow_paths(opt));
    if (wanted(7)) keep(check_determinism(opt));
    if (wanted(8)) keep(check_grid_stability(opt, have_v ? &v : nullptr));
    if (wanted(9)) keep(check_conservation(opt));
    return out;
}

std::string format_result(const CheckResult& r) {
    char times[64];
    std::snprintf(times, sizeof(times), "%.1f s / %.0f s", r.seconds, r.budget_s);
    return std::string(r.passed ? "[PASS] " : "[FAIL] ") + std::to_string(r.id) + " " + r.name +
           ": " + r.measured + " (" + times + ")";
}

}  // namespace crowd::validation
