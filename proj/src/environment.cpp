#include "crowd/environment.hpp"

#include <cmath>
#include <stdexcept>

namespace crowd {

double PeriodicAxis::wrap(double x) const {
    const double p = period();
    double r = std::fmod(x - x_min, p);
    if (r < 0.0) {
        r += p;
    }
    // fmod of a tiny negative number plus p can round up to p itself.
    if (r >= p) {
        r = 0.0;
    }
    return x_min + r;
}

double PeriodicAxis::min_image_dx(double from, double to) const {
    const double p = period();
    double dx = to - from;
    if (dx > 0.5 * p) {
        dx -= p * std::floor(dx / p + 0.5);
    } else if (dx < -0.5 * p) {
        dx += p * std::floor(-dx / p + 0.5);
    }
    return dx;
}

void Environment::validate() const {
    for (const auto& w : walls) {
        if (!(w.a.finite() && w.b.finite()) || w.a == w.b) {
            throw std::invalid_argument("environment: wall segments must be finite and non-degenerate");
        }
    }
    for (const auto& e : exits) {
        if (!(e.a.finite() && e.b.finite()) || e.a == e.b) {
            throw std::invalid_argument("environment: exit segments must be finite and non-degenerate");
        }
    }
    for (const auto& o : obstacles) {
        if (!o.center.finite() || !(o.radius > 0.0)) {
            throw std::invalid_argument("environment: obstacles need a finite center and radius > 0");
        }
    }
    if (periodic_x && !(periodic_x->period() > 0.0)) {
        throw std::invalid_argument("environment: periodic range must have x_max > x_min");
    }
}

Vec2 Environment::nearest_image(const Vec2& from, const Vec2& to) const {
    if (!periodic_x) {
        return to;
    }
    const double p = periodic_x->period();
    const double dx = to.x - from.x;
    if (dx > 0.5 * p || dx < -0.5 * p) {
        return {to.x - p * std::floor(dx / p + 0.5), to.y};
    }
    return to;
}

}  // namespace crowd
