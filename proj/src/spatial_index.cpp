#include "crowd/spatial_index.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace crowd {

SpatialIndex::SpatialIndex(std::span<const Vec2> positions, double cell_size, const Environment& env,
                           double max_body)
    : max_body_(max_body) {
    if (!(cell_size > 0.0)) {
        throw std::invalid_argument("SpatialIndex: cell size must be positive");
    }
    if (positions.size() >= std::numeric_limits<std::uint32_t>::max()) {
        throw std::length_error("SpatialIndex: too many points");
    }
    if (positions.empty()) {
        return;
    }

    double xmin = positions[0].x, xmax = positions[0].x;
    double ymin = positions[0].y, ymax = positions[0].y;
    for (const auto& p : positions) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }

    periodic_ = env.periodic_x.has_value();
    if (periodic_) {
        const double period = env.periodic_x->period();
        x0_ = env.periodic_x->x_min;
        nx_ = std::max(1, static_cast<int>(std::floor(period / cell_size)));
        cell_w_ = period / nx_;
    } else {
        x0_ = xmin;
        cell_w_ = cell_size;
        nx_ = std::max(1, static_cast<int>(std::floor((xmax - xmin) / cell_size)) + 1);
    }
    y0_ = ymin;
    cell_h_ = cell_size;
    ny_ = std::max(1, static_cast<int>(std::floor((ymax - ymin) / cell_size)) + 1);

    const auto n_cells = static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_);
    cell_of_.resize(positions.size());
    cell_start_.assign(n_cells + 1, 0);
    for (std::size_t i = 0; i < positions.size(); ++i) {
        int c = column(positions[i].x);
        c = periodic_ ? wrap_col(c) : clamp_col(c);
        const int r = clamp_row(row(positions[i].y));
        const auto cell = static_cast<std::uint32_t>(c * ny_ + r);
        cell_of_[i] = cell;
        ++cell_start_[cell + 1];
    }
    for (std::size_t k = 0; k < n_cells; ++k) {
        cell_start_[k + 1] += cell_start_[k];
    }
    items_.resize(positions.size());
    std::vector<std::uint32_t> fill(cell_start_.begin(), cell_start_.end() - 1);
    for (std::size_t i = 0; i < positions.size(); ++i) {
        items_[fill[cell_of_[i]]++] = static_cast<std::uint32_t>(i);
    }
}

}  // namespace crowd
