#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "crowd/environment.hpp"

namespace crowd {

/// Uniform grid over agent positions. Queries return a superset of the
/// agents within the requested radius; callers apply the exact test.
/// Along a periodic x axis the cell grid wraps.
class SpatialIndex {
public:
    SpatialIndex() = default;
    /// `max_body` is the largest body diameter among the stored agents; it
    /// bounds b_ij for neighbourhood queries.
    SpatialIndex(std::span<const Vec2> positions, double cell_size, const Environment& env,
                 double max_body);

    /// Calls visit(index) once for every stored point in cells touched by the
    /// disk (center, radius). `center` may lie outside the periodic range.
    template <typename Visitor>
    void query(const Vec2& center, double radius, Visitor&& visit) const;

    std::size_t size() const { return cell_of_.size(); }
    double cell_size() const { return cell_h_; }
    double max_body() const { return max_body_; }

private:
    int column(double x) const { return static_cast<int>(std::floor((x - x0_) / cell_w_)); }
    int row(double y) const { return static_cast<int>(std::floor((y - y0_) / cell_h_)); }
    int clamp_col(int c) const { return c < 0 ? 0 : (c >= nx_ ? nx_ - 1 : c); }
    int clamp_row(int r) const { return r < 0 ? 0 : (r >= ny_ ? ny_ - 1 : r); }
    int wrap_col(int c) const { return ((c % nx_) + nx_) % nx_; }

    bool periodic_ = false;
    double max_body_ = 0.0;
    double x0_ = 0.0, y0_ = 0.0;
    double cell_w_ = 1.0, cell_h_ = 1.0;
    int nx_ = 1, ny_ = 1;
    std::vector<std::uint32_t> cell_start_;  // CSR offsets, size nx*ny + 1
    std::vector<std::uint32_t> items_;
    std::vector<std::uint32_t> cell_of_;
};

template <typename Visitor>
void SpatialIndex::query(const Vec2& center, double radius, Visitor&& visit) const {
    if (items_.empty()) {
        return;
    }
    const int r0 = clamp_row(row(center.y - radius));
    const int r1 = clamp_row(row(center.y + radius));
    int c0 = column(center.x - radius);
    int c1 = column(center.x + radius);
    if (periodic_) {
        if (c1 - c0 + 1 >= nx_) {
            c0 = 0;
            c1 = nx_ - 1;
        }
    } else {
        c0 = clamp_col(c0);
        c1 = clamp_col(c1);
    }
    for (int c = c0; c <= c1; ++c) {
        const int col = periodic_ ? wrap_col(c) : c;
        for (int r = r0; r <= r1; ++r) {
            const auto cell = static_cast<std::size_t>(col) * static_cast<std::size_t>(ny_) +
                              static_cast<std::size_t>(r);
            for (std::uint32_t k = cell_start_[cell]; k < cell_start_[cell + 1]; ++k) {
                visit(static_cast<std::size_t>(items_[k]));
            }
        }
    }
}

}  // namespace crowd
