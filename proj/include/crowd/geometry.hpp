#pragma once
/**
 * @file geometry.hpp
 * @brief Plane primitives and the bearing convention used across the simulator.
 *
 * Angles are bearings: 0 points along +y and pi/2 along +x, so a heading
 * theta corresponds to the unit vector (sin theta, cos theta). Every module
 * speaks this convention; no math-convention angles cross an API boundary.
 */

#include <cmath>
#include <numbers>

namespace crowd {

inline constexpr double kPi = std::numbers::pi;

struct Vec2 {
    double x{0.0};
    double y{0.0};

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2 operator+(const Vec2& r) const { return {x + r.x, y + r.y}; }
    constexpr Vec2 operator-(const Vec2& r) const { return {x - r.x, y - r.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    friend constexpr Vec2 operator*(double s, const Vec2& v) { return {v.x * s, v.y * s}; }
    Vec2& operator+=(const Vec2& r) { x += r.x; y += r.y; return *this; }
    Vec2& operator-=(const Vec2& r) { x -= r.x; y -= r.y; return *this; }

    constexpr bool operator==(const Vec2&) const = default;

    constexpr double dot(const Vec2& r) const { return x * r.x + y * r.y; }
    constexpr double cross(const Vec2& r) const { return x * r.y - y * r.x; }
    constexpr double norm2() const { return dot(*this); }
    double norm() const { return std::sqrt(x * x + y * y); }
    bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

/// Closed segment. Zero-length segments are rejected where environments are built.
struct Segment {
    Vec2 a;
    Vec2 b;

    constexpr bool operator==(const Segment&) const = default;
    double length() const { return (b - a).norm(); }
};

/// Bearing of (x, y) measured from +y toward +x, computed as
/// 2 atan(x / (sqrt(x^2 + y^2) + y)). Result lies in (-pi, pi].
/// The formula is 0/0 on the negative y axis; that ray maps to pi.
/// Throws std::domain_error for the zero vector.
double atan2_paper(double x, double y);

inline double bearing(const Vec2& v) { return atan2_paper(v.x, v.y); }

/// Unit vector (sin theta, cos theta).
inline Vec2 heading_vector(double theta) { return {std::sin(theta), std::cos(theta)}; }

/// Maps any finite angle into (-pi, pi].
double wrap_angle(double a);

inline double distance(const Vec2& p, const Vec2& q) { return (q - p).norm(); }

Vec2 closest_point_on_segment(const Vec2& p, const Segment& seg);

double point_segment_distance(const Vec2& p, const Segment& seg);

/// Minimum distance between two closed segments (either may be degenerate).
double segment_segment_distance(const Segment& s, const Segment& t);

/// True iff every point of from->to keeps at least `clearance` from seg.
bool path_clear(const Vec2& from, const Vec2& to, const Segment& seg, double clearance);

/// True iff the closed segments share at least one point.
bool segments_intersect(const Segment& s, const Segment& t);

}  // namespace crowd
