#include "crowd/experiments.hpp"

#include <charconv>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace crowd {

namespace {

// Runs job(k) for k in [0, n) across OpenMP threads and rethrows the first failure.
template <typename Job>
void parallel_jobs(std::size_t n, Job&& job) {
    std::exception_ptr failure;
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t k = 0; k < count; ++k) {
        try {
            job(static_cast<std::size_t>(k));
        } catch (...) {
#pragma omp critical(crowd_sweep_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace

FDPoint run_fd_point(const SimConfig& config, double density, int run_index) {
    ScenarioSpec spec = config.scenario;
    spec.kind = ScenarioKind::corridor;
    spec.target_density = density;
    spec.agent_count.reset();
    World world = build_corridor(spec, config.seed + static_cast<std::uint64_t>(run_index));

    const MeasurementSpec& ms = config.measurement;
    std::vector<RoiSample> samples;
    samples.reserve(ms.warmup_ticks + ms.measure_ticks);
    const Observer sample = [&](const TickView& view) {
        samples.push_back(roi_sample(view.world.agents, view.report.realized_steps, ms.roi,
                                     view.world.params.dt));
    };
    run(world, ms.warmup_ticks + ms.measure_ticks, std::span(&sample, 1),
        RunOptions{.record_log = false});
    const FDMeans means = fd_aggregate(samples, ms.warmup_ticks);
    return FDPoint{density, run_index, means.mean_density, means.mean_speed};
}

std::vector<FDPoint> sweep_fd(const SimConfig& config, const std::vector<double>& densities,
                              int repeats) {
    if (densities.empty()) {
        throw std::invalid_argument("sweep-fd: at least one density is required");
    }
    if (repeats < 1) {
        throw std::invalid_argument("sweep-fd: repeats must be >= 1");
    }
    const auto reps = static_cast<std::size_t>(repeats);
    std::vector<FDPoint> rows(densities.size() * reps);
    parallel_jobs(rows.size(), [&](std::size_t k) {
        rows[k] = run_fd_point(config, densities[k / reps], static_cast<int>(k % reps));
    });
    return rows;
}

EvacuationResult run_evacuation(const SimConfig& config, double width, int run_index) {
    ScenarioSpec spec = config.scenario;
    spec.kind = ScenarioKind::room;
    spec.door_width = width;
    World world = build_room(spec, config.seed + static_cast<std::uint64_t>(run_index));
    const Segment door = room_door(spec);

    EvacuationResult result;
    result.initial_agents = world.agents.size();
    const Observer count = [&](const TickView& view) {
        result.crossings_per_tick.push_back(door_crossings(view.report.removed, door));
    };
    run(world, config.measurement.max_ticks, std::span(&count, 1),
        RunOptions{.record_log = false, .stop_when_empty = true});

    // An empty room records no further crossings; pad so one window always fits.
    const auto window = static_cast<std::size_t>(
        std::llround(config.measurement.flow_window_s / spec.params.dt));
    if (result.crossings_per_tick.size() < window) {
        result.crossings_per_tick.resize(window, 0);
    }
    for (const std::size_t c : result.crossings_per_tick) result.total_crossings += c;
    result.remaining_agents = world.agents.size();

    const FlowSeries flow =
        flow_rate(result.crossings_per_tick, spec.params.dt, config.measurement.flow_window_s);
    result.record = FlowRecord{width, run_index, flow.max_flow, flow.max_flow / width};
    return result;
}

std::vector<FlowRecord> sweep_bottleneck(const SimConfig& config, const std::vector<double>& widths,
                                         int repeats) {
    if (widths.empty()) {
        throw std::invalid_argument("sweep-bottleneck: at least one width is required");
    }
    if (repeats < 1) {
        throw std::invalid_argument("sweep-bottleneck: repeats must be >= 1");
    }
    const auto reps = static_cast<std::size_t>(repeats);
    std::vector<FlowRecord> rows(widths.size() * reps);
    parallel_jobs(rows.size(), [&](std::size_t k) {
        rows[k] = run_evacuation(config, widths[k / reps], static_cast<int>(k % reps)).record;
    });
    return rows;
}

void write_fd_csv(std::ostream& out, const std::vector<FDPoint>& points) {
    out << "target_density,run,mean_density,mean_speed\n";
    for (const auto& p : points) {
        out << format_number(p.target_density) << ',' << p.run_index << ','
            << format_number(p.mean_density) << ',' << format_number(p.mean_speed) << '\n';
    }
}

void write_flow_csv(std::ostream& out, const std::vector<FlowRecord>& records) {
    out << "door_width,run,max_flow,specific_flow\n";
    for (const auto& r : records) {
        out << format_number(r.door_width) << ',' << r.run_index << ','
            << format_number(r.max_flow) << ',' << format_number(r.specific_flow) << '\n';
    }
}

void write_file(const std::string& dir, const std::string& name, const std::string& contents) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create output directory " + dir + ": " + ec.message());
    }
    const fs::path path = fs::path(dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    out << contents;
    out.flush();
    if (!out) {
        throw std::runtime_error("failed writing " + path.string());
    }
}

void run_simulation(const SimConfig& config, const std::string& out_dir, RunOutputs outputs) {
    World world = build_world(config.scenario, config.seed);
    const bool room = config.scenario.kind == ScenarioKind::room;

    std::ostringstream metrics;
    std::vector<Observer> observers;
    if (outputs.metrics && !room) {
        metrics << "tick,density,mean_speed\n";
        observers.emplace_back([&](const TickView& v) {
            const RoiSample s = roi_sample(v.world.agents, v.report.realized_steps,
                                           config.measurement.roi, v.world.params.dt);
            metrics << v.tick << ',' << format_number(s.density) << ','
                    << (s.mean_speed ? format_number(*s.mean_speed) : std::string()) << '\n';
        });
    } else if (outputs.metrics) {
        metrics << "tick,crossings\n";
        const Segment door = room_door(config.scenario);
        observers.emplace_back([&, door](const TickView& v) {
            metrics << v.tick << ',' << door_crossings(v.report.removed, door) << '\n';
        });
    }

    // Fail on an unwritable directory before spending time on the run.
    write_file(out_dir, "trajectory.csv", "");
    const TrajectoryLog log = run(world, config.ticks, observers);
    std::ostringstream traj;
    log.write_csv(traj);
    write_file(out_dir, "trajectory.csv", traj.str());
    if (outputs.metrics) {
        write_file(out_dir, room ? "crossings.csv" : "roi.csv", metrics.str());
    }
}

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        double v = 0.0;
        const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
        if (item.empty() || res.ec != std::errc{} || res.ptr != item.data() + item.size()) {
            throw std::invalid_argument("not a number list: '" + text + "'");
        }
        out.push_back(v);
    }
    if (out.empty()) {
        throw std::invalid_argument("empty number list");
    }
    return out;
}

}  // namespace crowd
