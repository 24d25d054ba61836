#pragma once

// Brute-force re-implementation of the trace / indicator / objective pipeline,
// used to cross-check coverage::evaluate. Shares only the verified geometry
// primitives with the library; the scene walking, classification, and
// bookkeeping are re-coded from the contract.

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "finview/coverage.hpp"

namespace finview::test {

struct OracleHit {
    Point2 point;
    double path_length = 0.0;
};

inline std::optional<OracleHit> oracle_trace_hit(Ray2 ray, const SceneInstance& scene,
                                                 OcclusionMode mode) {
    struct Candidate {
        double t;
        int order;  // global iteration order: mirrors, back beam, pad
        int kind;   // 0 mirror, 1 back, 2 pad
        int index;
        Point2 p;
    };

    double traveled = 0.0;
    for (int leg = 0; leg < 2; ++leg) {
        std::vector<Candidate> cands;
        int order = 0;
        for (size_t i = 0; i < scene.mirrors.size(); ++i, ++order) {
            const bool visible =
                mode == OcclusionMode::enforced
                    ? true
                    : leg == 0 && dot(ray.dir, scene.mirrors[i].front_normal) < 0.0;
            if (!visible) continue;
            if (const auto h = intersect_ray_segment(ray, scene.mirrors[i].segment)) {
                cands.push_back({h->t, order, 0, static_cast<int>(i), h->p});
            }
        }
        for (size_t i = 0; i < scene.back_segments.size(); ++i, ++order) {
            if (mode != OcclusionMode::enforced) continue;
            if (const auto h = intersect_ray_segment(ray, scene.back_segments[i])) {
                cands.push_back({h->t, order, 1, static_cast<int>(i), h->p});
            }
        }
        for (size_t i = 0; i < scene.pad_segments.size(); ++i, ++order) {
            if (const auto h = intersect_ray_segment(ray, scene.pad_segments[i])) {
                cands.push_back({h->t, order, 2, static_cast<int>(i), h->p});
            }
        }
        if (cands.empty()) {
            return std::nullopt;
        }
        const auto best = std::min_element(cands.begin(), cands.end(),
                                           [](const Candidate& a, const Candidate& b) {
                                               if (a.t != b.t) return a.t < b.t;
                                               return a.order < b.order;
                                           });
        traveled += best->t;
        if (best->kind == 2) {
            if (dot(ray.dir, scene.pad_inner_normals[best->index]) < 0.0) {
                return OracleHit{best->p, traveled};
            }
            return std::nullopt;
        }
        if (best->kind == 1) {
            return std::nullopt;
        }
        // mirror
        if (leg == 1) {
            return std::nullopt;
        }
        const PlacedMirror& m = scene.mirrors[best->index];
        if (dot(ray.dir, m.front_normal) >= 0.0) {
            return std::nullopt;  // back face
        }
        ray = Ray2{best->p, reflect(ray.dir, m.front_normal)};
    }
    return std::nullopt;
}

inline int oracle_indicator(const Ray2& ray, Point2 target, const SceneInstance& scene,
                            OcclusionMode mode) {
    const auto hit = oracle_trace_hit(ray, scene, mode);
    if (!hit) return 0;
    const double radius =
        hit->path_length * std::tan(scene.fov / (2.0 * (scene.ray_count - 1)));
    return norm(hit->point - target) <= radius ? 1 : 0;
}

/// Full enumeration of Eq-style coverage: re-traces every (ray, target) pair.
inline double oracle_objective(const LayoutVector& layout, const DeformationSet& defset,
                               const Bounds& bounds,
                               OcclusionMode mode = OcclusionMode::enforced) {
    if (!check_bounds(layout, bounds).empty()) {
        return 0.0;
    }
    long long total = 0;
    for (const DeformationState& st : defset.states) {
        const SceneInstance scene = make_scene(layout, st);
        if (!check_safety(scene)) {
            continue;
        }
        const auto rays = cast_fan(scene.camera_origin, scene.camera_axis, scene.fov,
                                   scene.ray_count);
        for (const Ray2& ray : rays) {
            for (const Point2& target : scene.pad_targets) {
                total += oracle_indicator(ray, target, scene, mode);
            }
        }
    }
    return static_cast<double>(total) / static_cast<double>(defset.states.size());
}

}  // namespace finview::test
