#include "finview/coverage.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace finview {

namespace {

enum class SurfaceKind { mirror, back_beam, pad };

struct NearestHit {
    double t = 0.0;
    Point2 p;
    SurfaceKind kind = SurfaceKind::pad;
    int index = 0;
};

/// First surface along the ray. Candidate order (mirrors, back beam, pad) with
/// a strict `<` keeps vertex-grazing ties on the lower-index segment.
std::optional<NearestHit> nearest_surface(const Ray2& ray, const SceneInstance& scene,
                                          OcclusionMode mode, bool after_reflection) {
    std::optional<NearestHit> best;
    const auto consider = [&](const Segment2& s, SurfaceKind kind, int index) {
        const auto hit = intersect_ray_segment(ray, s);
        if (hit && (!best || hit->t < best->t)) {
            best = NearestHit{hit->t, hit->p, kind, index};
        }
    };

    const bool mirrors_visible =
        mode == OcclusionMode::enforced || !after_reflection;  // ignored mode: pass through later mirrors
    if (mirrors_visible) {
        for (size_t i = 0; i < scene.mirrors.size(); ++i) {
            if (mode == OcclusionMode::ignored) {
                // Only reflective encounters are opaque here: skip back-face hits.
                const auto hit = intersect_ray_segment(ray, scene.mirrors[i].segment);
                if (hit && dot(ray.dir, scene.mirrors[i].front_normal) < 0.0 &&
                    (!best || hit->t < best->t)) {
                    best = NearestHit{hit->t, hit->p, SurfaceKind::mirror, static_cast<int>(i)};
                }
            } else {
                consider(scene.mirrors[i].segment, SurfaceKind::mirror, static_cast<int>(i));
            }
        }
    }
    if (mode == OcclusionMode::enforced) {
        for (size_t i = 0; i < scene.back_segments.size(); ++i) {
            consider(scene.back_segments[i], SurfaceKind::back_beam, static_cast<int>(i));
        }
    }
    for (size_t i = 0; i < scene.pad_segments.size(); ++i) {
        consider(scene.pad_segments[i], SurfaceKind::pad, static_cast<int>(i));
    }
    return best;
}

double scene_extent(const SceneInstance& scene) {
    double lo_x = scene.camera_origin.x, hi_x = lo_x;
    double lo_y = scene.camera_origin.y, hi_y = lo_y;
    const auto grow = [&](Point2 p) {
        lo_x = std::min(lo_x, p.x);
        hi_x = std::max(hi_x, p.x);
        lo_y = std::min(lo_y, p.y);
        hi_y = std::max(hi_y, p.y);
    };
    for (const Segment2& s : scene.back_segments) { grow(s.a); grow(s.b); }
    for (const Segment2& s : scene.pad_segments) { grow(s.a); grow(s.b); }
    for (const PlacedMirror& m : scene.mirrors) { grow(m.segment.a); grow(m.segment.b); }
    return 2.0 * std::hypot(hi_x - lo_x, hi_y - lo_y);
}

}  // namespace

std::vector<Ray2> cast_fan(Point2 camera_origin, Dir2 camera_axis, double fov, int m) {
    if (m < 3) {
        throw std::invalid_argument("cast_fan: ray count must be >= 3");
    }
    if (!(fov > 0.0 && fov < std::acos(-1.0))) {
        throw std::invalid_argument("cast_fan: fov must be in (0, pi)");
    }
    const double base = angle_of(camera_axis);
    std::vector<Ray2> rays;
    rays.reserve(m);
    for (int j = 0; j < m; ++j) {
        const double a = base + fov * (static_cast<double>(j) / (m - 1) - 0.5);
        rays.push_back({camera_origin, dir_from_angle(a)});
    }
    return rays;
}

TraceResult trace(const Ray2& ray, const SceneInstance& scene, OcclusionMode mode) {
    TraceResult result;
    Ray2 current = ray;

    for (int leg = 0; leg < 2; ++leg) {
        const auto hit = nearest_surface(current, scene, mode, leg > 0);
        if (!hit) {
            // Escaped the scene: record a finite leg for rendering.
            const double far = scene_extent(scene);
            result.path.push_back({current.origin, along(current, far)});
            result.path_length += far;
            return result;
        }
        result.path.push_back({current.origin, hit->p});
        result.path_length += hit->t;

        switch (hit->kind) {
            case SurfaceKind::pad: {
                const Dir2 inner = scene.pad_inner_normals[hit->index];
                if (dot(current.dir, inner) < 0.0) {
                    result.hit_point = hit->p;  // reached from the interior side
                }
                return result;
            }
            case SurfaceKind::mirror: {
                const PlacedMirror& m = scene.mirrors[hit->index];
                if (leg > 0 || dot(current.dir, m.front_normal) >= 0.0) {
                    return result;  // second surface or back face: miss
                }
                current = Ray2{hit->p, reflect(current.dir, m.front_normal)};
                result.reflections = 1;
                break;
            }
            case SurfaceKind::back_beam:
                return result;  // occluded
        }
    }
    return result;
}

double coverage_radius(double path_length, double fov, int m) {
    return path_length * std::tan(fov / (2.0 * (m - 1)));
}

int indicator(const Ray2& ray, Point2 target, const SceneInstance& scene, OcclusionMode mode) {
    const TraceResult tr = trace(ray, scene, mode);
    if (!tr.hit_point) {
        return 0;
    }
    const double r = coverage_radius(tr.path_length, scene.fov, scene.ray_count);
    return norm(*tr.hit_point - target) <= r ? 1 : 0;
}

CoverageReport evaluate(const LayoutVector& layout, const DeformationSet& defset,
                        const Bounds& bounds, OcclusionMode mode) {
    if (defset.states.empty()) {
        throw std::invalid_argument("evaluate: empty deformation set");
    }
    for (const DeformationState& st : defset.states) {
        if (layout.mirrors.size() + 1 != st.back_nodes.size()) {
            throw std::invalid_argument("evaluate: layout dimension does not match deformation set");
        }
    }

    CoverageReport report;
    report.per_state_covered.reserve(defset.states.size());

    if (!check_bounds(layout, bounds).empty()) {
        for (const DeformationState& st : defset.states) {
            report.per_state_covered.emplace_back(st.pad_points.size(), false);
        }
        return report;  // out-of-bounds layouts score zero outright
    }

    std::int64_t total_pairs = 0;
    double fraction_sum = 0.0;
    for (const DeformationState& st : defset.states) {
        const SceneInstance scene = make_scene(layout, st);
        std::vector<bool> covered(scene.pad_targets.size(), false);
        if (check_safety(scene)) {
            const auto rays = cast_fan(scene.camera_origin, scene.camera_axis, scene.fov,
                                       scene.ray_count);
            for (const Ray2& ray : rays) {
                const TraceResult tr = trace(ray, scene, mode);
                if (!tr.hit_point) {
                    continue;
                }
                const double r = coverage_radius(tr.path_length, scene.fov, scene.ray_count);
                for (size_t j = 0; j < scene.pad_targets.size(); ++j) {
                    if (norm(*tr.hit_point - scene.pad_targets[j]) <= r) {
                        ++total_pairs;
                        covered[j] = true;
                    }
                }
            }
        }
        std::int64_t covered_count = 0;
        for (const bool c : covered) covered_count += c ? 1 : 0;
        fraction_sum += static_cast<double>(covered_count) / static_cast<double>(covered.size());
        report.per_state_covered.push_back(std::move(covered));
    }

    const double k = static_cast<double>(defset.states.size());
    report.objective_value = static_cast<double>(total_pairs) / k;
    report.unique_coverage_fraction = fraction_sum / k;
    return report;
}

}  // namespace finview
