#include "crowd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace crowd {

bool ROISpec::contains(const Vec2& p) const {
    const double h = 0.5 * size;
    return p.x >= center.x - h && p.x < center.x + h && p.y >= center.y - h && p.y < center.y + h;
}

RoiSample roi_sample(std::span<const AgentState> agents, std::span<const double> realized_steps,
                     const ROISpec& roi, double dt) {
    if (agents.size() != realized_steps.size()) {
        throw std::invalid_argument("roi_sample: one realized step per agent is required");
    }
    std::size_t count = 0;
    double speed_sum = 0.0;
    for (std::size_t i = 0; i < agents.size(); ++i) {
        if (roi.contains(agents[i].position)) {
            ++count;
            speed_sum += realized_steps[i] / dt;
        }
    }
    RoiSample s;
    s.density = static_cast<double>(count) / roi.area();
    if (count > 0) {
        s.mean_speed = speed_sum / static_cast<double>(count);
    }
    return s;
}

FDMeans fd_aggregate(std::span<const RoiSample> samples, std::size_t warmup_ticks) {
    double density_sum = 0.0, speed_sum = 0.0;
    std::size_t n = 0, n_speed = 0;
    for (std::size_t t = warmup_ticks; t < samples.size(); ++t) {
        density_sum += samples[t].density;
        ++n;
        if (samples[t].mean_speed) {
            speed_sum += *samples[t].mean_speed;
            ++n_speed;
        }
    }
    if (n_speed == 0) {
        throw std::runtime_error("fd_aggregate: no ROI speed samples after warm-up");
    }
    return FDMeans{density_sum / static_cast<double>(n), speed_sum / static_cast<double>(n_speed)};
}

std::size_t door_crossings(std::span<const RemovedAgent> removed, const Segment& door) {
    std::size_t count = 0;
    for (const auto& r : removed) {
        if (segments_intersect(Segment{r.from, r.to}, door)) {
            ++count;
        }
    }
    return count;
}

FlowSeries flow_rate(std::span<const std::size_t> crossings_per_tick, double dt, double window_s) {
    const double ticks_exact = window_s / dt;
    const auto window = static_cast<std::size_t>(std::llround(ticks_exact));
    if (window == 0 || std::abs(ticks_exact - static_cast<double>(window)) > 1e-9) {
        throw std::invalid_argument("flow_rate: window must be a positive multiple of dt");
    }
    if (crossings_per_tick.size() < window) {
        throw std::runtime_error("flow_rate: run shorter than one window");
    }
    FlowSeries out;
    std::size_t sum = 0;
    for (std::size_t t = 0; t < window; ++t) sum += crossings_per_tick[t];
    out.series.push_back(static_cast<double>(sum) / window_s);
    for (std::size_t t = window; t < crossings_per_tick.size(); ++t) {
        sum += crossings_per_tick[t];
        sum -= crossings_per_tick[t - window];
        out.series.push_back(static_cast<double>(sum) / window_s);
    }
    out.max_flow = *std::max_element(out.series.begin(), out.series.end());
    return out;
}

LinearFit linear_fit(std::span<const std::pair<double, double>> points) {
    std::set<double> xs;
    for (const auto& p : points) xs.insert(p.first);
    if (xs.size() < 3) {
        throw std::invalid_argument("linear_fit: at least 3 distinct x values are required");
    }
    const double n = static_cast<double>(points.size());
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : points) {
        mx += x;
        my += y;
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [x, y] : points) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if (!(sxx > 0.0)) {
        throw std::invalid_argument("linear_fit: x values have no variance");
    }
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (const auto& [x, y] : points) {
        const double r = y - (fit.intercept + fit.slope * x);
        ss_res += r * r;
    }
    fit.r_squared = (syy > 0.0) ? 1.0 - ss_res / syy : 1.0;
    return fit;
}

}  // namespace crowd
