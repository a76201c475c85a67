#include "crowd/geometry.hpp"

#include <algorithm>
#include <stdexcept>

namespace crowd {

double atan2_paper(double x, double y) {
    if (x == 0.0 && y == 0.0) {
        throw std::domain_error("atan2_paper: bearing of the zero vector is undefined");
    }
    if (x == 0.0 && y < 0.0) {
        return kPi;
    }
    const double r = std::sqrt(x * x + y * y);
    // x / (r + y) == (r - y) / x; the second form avoids cancellation when y < 0.
    const double t = (y >= 0.0) ? x / (r + y) : (r - y) / x;
    return 2.0 * std::atan(t);
}

double wrap_angle(double a) {
    constexpr double two_pi = 2.0 * kPi;
    // fmod is the identity on (-2pi, 2pi), so skip it there.
    double r = (std::abs(a) < two_pi) ? a : std::fmod(a, two_pi);
    if (r > kPi) {
        r -= two_pi;
    } else if (r <= -kPi) {
        r += two_pi;
    }
    return r;
}

Vec2 closest_point_on_segment(const Vec2& p, const Segment& seg) {
    const Vec2 ab = seg.b - seg.a;
    const double len2 = ab.norm2();
    if (len2 == 0.0) {
        return seg.a;
    }
    const double t = std::clamp((p - seg.a).dot(ab) / len2, 0.0, 1.0);
    return seg.a + ab * t;
}

double point_segment_distance(const Vec2& p, const Segment& seg) {
    return distance(p, closest_point_on_segment(p, seg));
}

namespace {

int orientation(const Vec2& a, const Vec2& b, const Vec2& c) {
    const double v = (b - a).cross(c - a);
    return (v > 0.0) - (v < 0.0);
}

bool on_segment_if_collinear(const Vec2& a, const Vec2& b, const Vec2& p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

}  // namespace

bool segments_intersect(const Segment& s, const Segment& t) {
    const int o1 = orientation(s.a, s.b, t.a);
    const int o2 = orientation(s.a, s.b, t.b);
    const int o3 = orientation(t.a, t.b, s.a);
    const int o4 = orientation(t.a, t.b, s.b);
    if (o1 != o2 && o3 != o4) {
        return true;
    }
    if (o1 == 0 && on_segment_if_collinear(s.a, s.b, t.a)) return true;
    if (o2 == 0 && on_segment_if_collinear(s.a, s.b, t.b)) return true;
    if (o3 == 0 && on_segment_if_collinear(t.a, t.b, s.a)) return true;
    if (o4 == 0 && on_segment_if_collinear(t.a, t.b, s.b)) return true;
    return false;
}

double segment_segment_distance(const Segment& s, const Segment& t) {
    if (segments_intersect(s, t)) {
        return 0.0;
    }
    return std::min({point_segment_distance(s.a, t), point_segment_distance(s.b, t),
                     point_segment_distance(t.a, s), point_segment_distance(t.b, s)});
}

bool path_clear(const Vec2& from, const Vec2& to, const Segment& seg, double clearance) {
    return segment_segment_distance(Segment{from, to}, seg) >= clearance;
}

}  // namespace crowd
