#include "finview/geometry.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace finview {

Dir2 make_dir(double dx, double dy) {
    const double n = std::hypot(dx, dy);
    if (!(n > 1e-12)) {
        throw std::invalid_argument("make_dir: zero-length direction");
    }
    return {dx / n, dy / n};
}

Dir2 dir_from_angle(double angle_rad) {
    return {std::cos(angle_rad), std::sin(angle_rad)};
}

Dir2 rotate(Dir2 d, double angle_rad) {
    const double c = std::cos(angle_rad);
    const double s = std::sin(angle_rad);
    return {d.dx * c - d.dy * s, d.dx * s + d.dy * c};
}

Dir2 reflect(Dir2 d, Dir2 n) {
    const double k = 2.0 * dot(d, n);
    return {d.dx - k * n.dx, d.dy - k * n.dy};
}

std::optional<RayHit> intersect_ray_segment(const Ray2& r, const Segment2& s) {
    const Point2 e = s.b - s.a;
    const Point2 d = to_point(r.dir);
    const Point2 ao = s.a - r.origin;
    const double elen = norm(e);
    const double denom = cross(d, e);

    // |denom| = |e| sin(angle between ray and segment)
    if (std::abs(denom) <= 1e-12 * elen) {
        // Parallel. Collinear iff the origin sits on the segment's carrier line.
        if (std::abs(cross(ao, d)) > 1e-9) {
            return std::nullopt;
        }
        const double ta = dot(ao, d);
        const double tb = dot(s.b - r.origin, d);
        double t = std::numeric_limits<double>::infinity();
        Point2 p;
        if (ta > kRayEpsilon && ta < t) { t = ta; p = s.a; }
        if (tb > kRayEpsilon && tb < t) { t = tb; p = s.b; }
        if (ta <= kRayEpsilon && tb <= kRayEpsilon) {
            return std::nullopt;
        }
        // Origin inside the overlap: the nearest endpoint ahead still bounds it.
        if (!std::isfinite(t)) {
            return std::nullopt;
        }
        return RayHit{t, p};
    }

    const double t = cross(ao, e) / denom;
    const double w = cross(ao, d) / denom;
    if (t <= kRayEpsilon || w < 0.0 || w > 1.0) {
        return std::nullopt;
    }
    return RayHit{t, along(r, t)};
}

double point_segment_distance(Point2 p, const Segment2& s) {
    const Point2 e = s.b - s.a;
    const double len2 = dot(e, e);
    if (len2 <= 0.0) {
        return norm(p - s.a);
    }
    const double w = std::clamp(dot(p - s.a, e) / len2, 0.0, 1.0);
    const Point2 foot = s.a + w * e;
    return norm(p - foot);
}

bool segments_intersect(const Segment2& s1, const Segment2& s2) {
    const Point2 d1 = s1.b - s1.a;
    const Point2 d2 = s2.b - s2.a;
    const Point2 u = s2.a - s1.a;
    const double len1 = norm(d1);
    const double len2 = norm(d2);
    if (len1 == 0.0) {
        return point_segment_distance(s1.a, s2) == 0.0;
    }
    const double denom = cross(d1, d2);

    // |denom| = len1 len2 sin(angle); below the threshold the division is
    // ill-conditioned and the segments are treated as parallel.
    if (std::abs(denom) > 1e-12 * len1 * len2) {
        const double t = cross(u, d2) / denom;
        const double w = cross(u, d1) / denom;
        return t >= 0.0 && t <= 1.0 && w >= 0.0 && w <= 1.0;
    }

    // Parallel: intersect only when collinear (carrier lines within 1e-9 mm)
    // and the 1D spans overlap.
    if (std::abs(cross(u, d1)) > 1e-9 * len1) {
        return false;
    }
    const double len1_sq = dot(d1, d1);
    const double pa = dot(u, d1);
    const double pb = dot(s2.b - s1.a, d1);
    const double lo = std::min(pa, pb);
    const double hi = std::max(pa, pb);
    return hi >= 0.0 && lo <= len1_sq;
}

}  // namespace finview
