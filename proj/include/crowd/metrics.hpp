#pragma once
/**
 * @file metrics.hpp
 * @brief Measurement procedures for the two validation experiments.
 *
 * Fundamental diagram: density is the head count inside a 2 m x 2 m region
 * of interest divided by its area; speed is the mean realized step length of
 * those agents divided by the tick duration. Bottleneck: door crossings per
 * tick are turned into a sliding-window flow rate whose maximum is reported.
 */

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "crowd/engine.hpp"

namespace crowd {

struct ROISpec {
    Vec2 center{10.0, 2.5};
    double size = 2.0;

    double area() const { return size * size; }
    /// Half-open square [cx - s/2, cx + s/2) x [cy - s/2, cy + s/2).
    bool contains(const Vec2& p) const;
};

struct RoiSample {
    double density = 0.0;
    std::optional<double> mean_speed;  ///< absent when the ROI is empty
};

struct FDPoint {
    double target_density = 0.0;
    int run_index = 0;
    double mean_density = 0.0;
    double mean_speed = 0.0;
};

struct FlowRecord {
    double door_width = 0.0;
    int run_index = 0;
    double max_flow = 0.0;       ///< persons / s
    double specific_flow = 0.0;  ///< persons / (m s)
};

/// `realized_steps` is aligned with `agents`.
RoiSample roi_sample(std::span<const AgentState> agents, std::span<const double> realized_steps,
                     const ROISpec& roi, double dt);

struct FDMeans {
    double mean_density = 0.0;
    double mean_speed = 0.0;
};

/// Drops the first `warmup_ticks` samples and averages the rest; ticks with
/// an empty ROI count toward density but not speed. Throws std::runtime_error
/// when no speed sample survives.
FDMeans fd_aggregate(std::span<const RoiSample> samples, std::size_t warmup_ticks);

/// Agents removed this tick through `door`.
std::size_t door_crossings(std::span<const RemovedAgent> removed, const Segment& door);

struct FlowSeries {
    double max_flow = 0.0;
    std::vector<double> series;  ///< flow of each full window, by window start tick
};

/// Sliding-window flow rate. `window_s` must be a whole number of ticks;
/// throws std::invalid_argument otherwise and std::runtime_error when the
/// series is shorter than one window.
FlowSeries flow_rate(std::span<const std::size_t> crossings_per_tick, double dt, double window_s);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

/// Ordinary least squares of y on x. Needs >= 3 distinct x values.
LinearFit linear_fit(std::span<const std::pair<double, double>> points);

}  // namespace crowd
