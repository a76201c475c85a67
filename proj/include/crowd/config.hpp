#pragma once
/**
 * @file config.hpp
 * @brief JSON run configuration.
 *
 * Schema (every key optional except where noted; unknown keys are errors):
 *
 *     {
 *       "scenario": {
 *         "kind": "corridor" | "room",            // required
 *         "dimensions": [x, y],                   // 20 x 5 corridor, 10 x 10 room
 *         "door_width": 1.0,                      // room only
 *         "target_density": 1.0,                  // 1.0 corridor, 3.0 room
 *         "agent_count": 100                      // overrides target_density
 *       },
 *       "model": {"phi_tau", "w_alpha", "w_phi", "n_alpha", "n_phi", "dt"},
 *       "gait": {"mu_step", "sigma_step", "sigma_heading", "p_walk", "body_diameter"},
 *       "measurement": {"warmup_ticks", "measure_ticks", "roi_center", "roi_size",
 *                       "flow_window_s", "max_ticks"},
 *       "seed": 42, "ticks": 600, "output_dir": "out"
 *     }
 */

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "crowd/metrics.hpp"
#include "crowd/scenarios.hpp"

namespace crowd {

struct MeasurementSpec {
    std::size_t warmup_ticks = 200;
    std::size_t measure_ticks = 400;
    ROISpec roi;
    double flow_window_s = 10.0;
    std::size_t max_ticks = 4000;  ///< cap for evacuation runs

    bool operator==(const MeasurementSpec& o) const {
        return warmup_ticks == o.warmup_ticks && measure_ticks == o.measure_ticks &&
               roi.center == o.roi.center && roi.size == o.roi.size &&
               flow_window_s == o.flow_window_s && max_ticks == o.max_ticks;
    }
};

struct SimConfig {
    ScenarioSpec scenario;  ///< carries the model and gait parameters
    MeasurementSpec measurement;
    std::uint64_t seed = 42;
    std::uint64_t ticks = 600;
    std::string output_dir = "out";

    bool operator==(const SimConfig& o) const;
};

/// Error with the offending key path (e.g. "model.phi_tau") or, for syntax
/// errors, the line and column.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Built-in defaults for `kind`, with the ROI centred in the scenario.
SimConfig default_config(ScenarioKind kind);

SimConfig parse_config(const std::string& text);
SimConfig load_config(const std::string& path);
std::string serialize_config(const SimConfig& config);

}  // namespace crowd
