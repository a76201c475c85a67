#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "crowd/config.hpp"
#include "crowd/metrics.hpp"

namespace crowd {

inline const std::vector<double> kDefaultDensities{0.25, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0};
inline const std::vector<double> kDefaultWidths{0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0};

/// Corridor run at `density`, seeded base_seed + run_index, sampled in the ROI.
FDPoint run_fd_point(const SimConfig& config, double density, int run_index);

/// Every density x repeat, rows ordered by (density, run). Independent runs
/// execute in parallel; row order and contents do not depend on scheduling.
std::vector<FDPoint> sweep_fd(const SimConfig& config, const std::vector<double>& densities,
                              int repeats);

struct EvacuationResult {
    FlowRecord record;
    std::size_t initial_agents = 0;
    std::size_t total_crossings = 0;
    std::size_t remaining_agents = 0;
    std::vector<std::size_t> crossings_per_tick;
};

/// Room run at door `width` until empty or measurement.max_ticks.
EvacuationResult run_evacuation(const SimConfig& config, double width, int run_index);

std::vector<FlowRecord> sweep_bottleneck(const SimConfig& config, const std::vector<double>& widths,
                                         int repeats);

void write_fd_csv(std::ostream& out, const std::vector<FDPoint>& points);
void write_flow_csv(std::ostream& out, const std::vector<FlowRecord>& records);

/// Writes `contents` to dir/name, creating dir. Throws std::runtime_error on failure.
void write_file(const std::string& dir, const std::string& name, const std::string& contents);

struct RunOutputs {
    bool metrics = false;  ///< also write roi.csv (corridor) or crossings.csv (room)
};

/// Builds the configured world, runs config.ticks steps and writes
/// trajectory.csv (plus metric CSVs on request) into `out_dir`.
void run_simulation(const SimConfig& config, const std::string& out_dir, RunOutputs outputs);

std::vector<double> parse_number_list(const std::string& text);

}  // namespace crowd
