#include "crowd/engine.hpp"

#include <algorithm>
#include <charconv>
#include <exception>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "crowd/perception.hpp"
#include "crowd/scenarios.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace crowd {

double World::min_clearance() const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < agents.size(); ++i) {
        for (std::size_t j = i + 1; j < agents.size(); ++j) {
            const double b = 0.5 * (agents[i].gait.body_diameter + agents[j].gait.body_diameter);
            best = std::min(best, env.separation(agents[i].position, agents[j].position) - b);
        }
    }
    return best;
}

namespace {

double max_body(const World& world) {
    double b = 0.0;
    for (const auto& a : world.agents) b = std::max(b, a.gait.body_diameter);
    return b;
}

Decision stay_in_place(const AgentState& a, const ModelParams& params) {
    Decision d;
    d.alpha_hat = 0.0;
    d.phi_hat = 0.0;
    d.target = a.position;
    d.utility = utility(0.0, 0.0, params);
    return d;
}

void record_draws(Decision& d, const AgentState& a) {
    d.step = a.desired_step;
    d.heading = a.desired_heading;
    d.walking = a.walking;
}

// Best-first scan of the grid; the first collision-free cell is the argmax.
Decision plan_one_ordered(const World& world, const SpatialIndex& index, const AgentState& agent,
                          std::span<const GridCell> order) {
    const AgentState a = sample_agent(world, agent);
    Decision d;
    if (a.walking == 0) {
        d = stay_in_place(a, world.params);
    } else {
        const Neighborhood hood = perceive(a, world.agents, index, world.env);
        d = stay_in_place(a, world.params);
        // Same arithmetic as displacement(), with one sincos per column.
        std::vector<Vec2> column(static_cast<std::size_t>(world.params.n_phi));
        for (int ip = 0; ip < world.params.n_phi; ++ip) {
            column[static_cast<std::size_t>(ip)] =
                heading_vector(a.desired_heading + phi_at(world.params, ip));
        }
        for (const GridCell& cell : order) {
            const double alpha = cell.alpha;
            const double phi = cell.phi;
            const double scale = alpha * a.desired_step * static_cast<double>(a.walking);
            const Vec2 target =
                a.position + column[static_cast<std::size_t>(cell.phi_index)] * scale;
            if (alpha == 0.0 || !collides(hood, target)) {
                d.alpha_hat = alpha;
                d.phi_hat = phi;
                d.target = target;
                d.utility = utility(alpha, phi, world.params);
                break;
            }
        }
    }
    record_draws(d, a);
    return d;
}

}  // namespace

AgentState sample_agent(const World& world, const AgentState& agent) {
    AgentState a = agent;
    RandomStream rng = rng_stream(world.seed, world.tick, a.id);
    a.desired_step = sample_desired_step(a.gait, rng);
    a.desired_heading = sample_desired_heading(a, rng);
    a.walking = sample_walking_state(a.gait.p_walk, rng);
    return a;
}

double index_cell_size(const World& world) {
    double step = 0.0;
    for (const auto& a : world.agents) step = std::max(step, a.gait.max_step());
    return std::max(step + max_body(world), 1e-3);
}

SpatialIndex build_index(const World& world) {
    std::vector<Vec2> positions;
    positions.reserve(world.agents.size());
    for (const auto& a : world.agents) positions.push_back(a.position);
    return SpatialIndex(positions, index_cell_size(world), world.env, max_body(world));
}

std::vector<Decision> plan_all_serial(const World& world, const SpatialIndex& index) {
    std::vector<Decision> out;
    out.reserve(world.agents.size());
    for (const auto& agent : world.agents) {
        const AgentState a = sample_agent(world, agent);
        Decision d;
        if (a.walking == 0) {
            d = stay_in_place(a, world.params);
        } else {
            const auto grid = candidate_grid(a, world.params);
            const auto feasible =
                feasible_candidates(a, grid, world.agents, world.env, index);
            d = choose(feasible, world.params);
        }
        record_draws(d, a);
        out.push_back(d);
    }
    return out;
}

std::vector<Decision> plan_all(const World& world, const SpatialIndex& index) {
    const auto order = preference_order(world.params);
    const auto n = static_cast<std::ptrdiff_t>(world.agents.size());
    std::vector<Decision> out(world.agents.size());
    std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            out[static_cast<std::size_t>(i)] =
                plan_one_ordered(world, index, world.agents[static_cast<std::size_t>(i)], order);
        } catch (...) {
#pragma omp critical(crowd_plan_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return out;
}

CommitResult commit(World& world, std::span<const Decision> decisions) {
    const std::size_t n = world.agents.size();
    if (decisions.size() != n) {
        throw std::invalid_argument("commit: one decision per agent is required");
    }
    CommitResult result;
    result.accepted.assign(n, false);
    result.priority.resize(n);
    for (std::size_t i = 0; i < n; ++i) result.priority[i] = i;
    RandomStream rng = rng_stream(world.seed, world.tick, kCommitStreamId);
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.below(i));
        std::swap(result.priority[i - 1], result.priority[j]);
    }

    std::vector<Vec2> current(n);
    for (std::size_t i = 0; i < n; ++i) current[i] = world.agents[i].position;
    const double body = max_body(world);
    SpatialIndex index(current, index_cell_size(world), world.env, body);
    double reach = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        reach = std::max(reach, distance(current[i], decisions[i].target));
    }
    reach += body;

    std::vector<Vec2> occupied = current;
    for (const std::size_t i : result.priority) {
        const Vec2 target = decisions[i].target;
        bool ok = true;
        if (!(target == current[i])) {
            index.query(target, reach, [&](std::size_t j) {
                if (!ok || j == i) return;
                const double b = 0.5 * (world.agents[i].gait.body_diameter +
                                         world.agents[j].gait.body_diameter);
                if (!(world.env.separation(target, occupied[j]) > b)) ok = false;
            });
        }
        if (ok) {
            occupied[i] = target;
            result.accepted[i] = true;
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        AgentState& a = world.agents[i];
        a.position = occupied[i];
        a.desired_step = decisions[i].step;
        a.desired_heading = decisions[i].heading;
        a.walking = decisions[i].walking;
    }
    return result;
}

StepReport step(World& world) {
    StepReport report;
    if (world.agents.empty()) {
        ++world.tick;
        return report;
    }
    const SpatialIndex index = build_index(world);
    const auto decisions = plan_all(world, index);
    std::vector<Vec2> previous;
    previous.reserve(world.agents.size());
    for (const auto& a : world.agents) previous.push_back(a.position);

    const CommitResult committed = commit(world, decisions);
    const BoundaryResult boundary = apply_boundaries(world, previous);

    const std::size_t m = boundary.survivors.size();
    report.realized_steps.resize(m);
    report.alpha.resize(m);
    report.phi.resize(m);
    report.walking.resize(m);
    report.sampled_steps.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t i = boundary.survivors[k];
        report.realized_steps[k] = world.env.separation(previous[i], world.agents[k].position);
        const bool moved = committed.accepted[i];
        report.alpha[k] = moved ? decisions[i].alpha_hat : 0.0;
        report.phi[k] = moved ? decisions[i].phi_hat : 0.0;
        report.walking[k] = decisions[i].walking;
        report.sampled_steps[k] = decisions[i].step;
    }
    report.removed = boundary.removed;
    ++world.tick;
    return report;
}

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void TrajectoryLog::append_snapshot(const World& world, const StepReport* report) {
    const double time_s = static_cast<double>(world.tick) * world.params.dt;
    for (std::size_t k = 0; k < world.agents.size(); ++k) {
        const AgentState& a = world.agents[k];
        LogRow row;
        row.tick = world.tick;
        row.time_s = time_s;
        row.agent_id = a.id;
        row.x = a.position.x;
        row.y = a.position.y;
        if (report != nullptr) {
            row.alpha = report->alpha[k];
            row.phi = report->phi[k];
            row.walking = report->walking[k];
        }
        rows.push_back(row);
    }
}

void TrajectoryLog::write_csv(std::ostream& out) const {
    out << "tick,time_s,agent_id,x,y,alpha,phi,walking\n";
    for (const auto& r : rows) {
        out << r.tick << ',' << format_number(r.time_s) << ',' << r.agent_id << ','
            << format_number(r.x) << ',' << format_number(r.y) << ',' << format_number(r.alpha)
            << ',' << format_number(r.phi) << ',' << r.walking << '\n';
    }
}

namespace {

template <typename T>
T parse_field(const std::string& text, std::size_t line_no) {
    T value{};
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw std::runtime_error("trajectory log line " + std::to_string(line_no) +
                                 ": bad field '" + text + "'");
    }
    return value;
}

}  // namespace

TrajectoryLog TrajectoryLog::read_csv(std::istream& in) {
    TrajectoryLog log;
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line) || line != "tick,time_s,agent_id,x,y,alpha,phi,walking") {
        throw std::runtime_error("trajectory log: missing or unexpected header");
    }
    ++line_no;
    std::vector<std::string> fields;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        fields.clear();
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(f);
        if (fields.size() != 8) {
            throw std::runtime_error("trajectory log line " + std::to_string(line_no) +
                                     ": expected 8 fields");
        }
        LogRow r;
        r.tick = parse_field<std::uint64_t>(fields[0], line_no);
        r.time_s = parse_field<double>(fields[1], line_no);
        r.agent_id = parse_field<std::uint64_t>(fields[2], line_no);
        r.x = parse_field<double>(fields[3], line_no);
        r.y = parse_field<double>(fields[4], line_no);
        r.alpha = parse_field<double>(fields[5], line_no);
        r.phi = parse_field<double>(fields[6], line_no);
        r.walking = parse_field<int>(fields[7], line_no);
        log.rows.push_back(r);
    }
    return log;
}

TrajectoryLog run(World& world, std::uint64_t ticks, std::span<const Observer> observers,
                  RunOptions options) {
    TrajectoryLog log;
    if (options.record_log) {
        log.append_snapshot(world, nullptr);
    }
    for (std::uint64_t t = 0; t < ticks; ++t) {
        if (options.stop_when_empty && world.agents.empty()) {
            break;
        }
        const StepReport report = step(world);
        if (options.record_log) {
            log.append_snapshot(world, &report);
        }
        const TickView view{world.tick, world, report};
        for (const auto& observe : observers) {
            try {
                observe(view);
            } catch (const std::exception& e) {
                throw std::runtime_error("observer failed at tick " + std::to_string(world.tick) +
                                         ": " + e.what());
            }
        }
    }
    return log;
}

}  // namespace crowd
