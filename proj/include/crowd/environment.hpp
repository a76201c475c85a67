#pragma once

#include <optional>
#include <vector>

#include "crowd/geometry.hpp"

namespace crowd {

struct Disk {
    Vec2 center;
    double radius = 0.0;
};

/// x is identified modulo (x_max - x_min).
struct PeriodicAxis {
    double x_min = 0.0;
    double x_max = 0.0;

    double period() const { return x_max - x_min; }
    /// Wrap into [x_min, x_max).
    double wrap(double x) const;
    /// Shortest signed x offset from `from` to `to`.
    double min_image_dx(double from, double to) const;
};

/// Walls are segments, obstacles are disks, exits are openings. A wall that
/// contains a door is stored as the residual pieces on either side of it.
struct Environment {
    std::vector<Segment> walls;
    std::vector<Disk> obstacles;
    std::vector<Segment> exits;
    std::optional<PeriodicAxis> periodic_x;

    /// Throws std::invalid_argument on zero-length walls/exits, bad radii
    /// or an empty periodic range.
    void validate() const;

    /// `to` shifted to the periodic image nearest to `from`.
    Vec2 nearest_image(const Vec2& from, const Vec2& to) const;

    double separation(const Vec2& p, const Vec2& q) const {
        return distance(p, nearest_image(p, q));
    }
};

}  // namespace crowd
