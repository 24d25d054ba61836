#pragma once

#include <cmath>
#include <optional>

namespace finview {

/// Self-intersection guard for ray origins: intersections with t <= kRayEpsilon
/// are ignored so a reflected ray never re-hits its own mirror. Millimetres.
inline constexpr double kRayEpsilon = 1e-9;

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// Unit-norm direction. Construct through make_dir/dir_from_angle; functions
/// that provably preserve the norm (reflect, rotate) build it directly.
struct Dir2 {
    double dx = 1.0;
    double dy = 0.0;
};

struct Segment2 {
    Point2 a;
    Point2 b;
};

struct Ray2 {
    Point2 origin;
    Dir2 dir;
};

inline Point2 operator+(Point2 p, Point2 q) { return {p.x + q.x, p.y + q.y}; }
inline Point2 operator-(Point2 p, Point2 q) { return {p.x - q.x, p.y - q.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }

inline double dot(Point2 p, Point2 q) { return p.x * q.x + p.y * q.y; }
inline double cross(Point2 p, Point2 q) { return p.x * q.y - p.y * q.x; }
inline double dot(Dir2 d, Dir2 e) { return d.dx * e.dx + d.dy * e.dy; }
inline double norm(Point2 p) { return std::hypot(p.x, p.y); }

inline Point2 to_point(Dir2 d) { return {d.dx, d.dy}; }
inline Point2 along(Ray2 r, double t) {
    return {r.origin.x + t * r.dir.dx, r.origin.y + t * r.dir.dy};
}

/// Normalizes (dx, dy); the vector must have norm > 1e-12.
Dir2 make_dir(double dx, double dy);
Dir2 dir_from_angle(double angle_rad);
inline double angle_of(Dir2 d) { return std::atan2(d.dy, d.dx); }

/// CCW rotation by angle_rad; norm-preserving.
Dir2 rotate(Dir2 d, double angle_rad);
/// Left-hand perpendicular (-dy, dx).
inline Dir2 perp(Dir2 d) { return {-d.dy, d.dx}; }

/// Mirror law: d - 2 (d.n) n. Requires unit n; the result is unit-norm.
Dir2 reflect(Dir2 d, Dir2 n);

struct RayHit {
    double t = 0.0;  ///< distance from the ray origin, > kRayEpsilon
    Point2 p;        ///< intersection point, on the segment
};

/// Nearest intersection of a ray with a closed segment, ignoring t <= kRayEpsilon.
/// A collinear overlap resolves to the nearest segment endpoint ahead of the origin.
std::optional<RayHit> intersect_ray_segment(const Ray2& r, const Segment2& s);

/// Euclidean distance from p to the nearest point of the closed segment.
double point_segment_distance(Point2 p, const Segment2& s);

/// True iff the closed segments share at least one point (touching and
/// collinear overlap included).
bool segments_intersect(const Segment2& s1, const Segment2& s2);

}  // namespace finview
