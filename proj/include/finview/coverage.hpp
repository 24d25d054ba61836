#pragma once

#include <optional>
#include <vector>

#include "finview/scene.hpp"

namespace finview {

/// One ray's path through the scene: a direct pad hit, a single mirror
/// reflection onto the pad, or a miss.
struct TraceResult {
    std::vector<Segment2> path;        ///< 1 or 2 legs actually traveled
    std::optional<Point2> hit_point;   ///< on the pad polyline, when covered
    int reflections = 0;               ///< 0 or 1
    double path_length = 0.0;          ///< mm, sum of leg lengths
};

/// Occlusion handling for trace/evaluate. `ignored` makes beams and mirror
/// back faces transparent (front faces still reflect, the single-reflection
/// rule still applies); used to measure how much occlusion costs a layout.
enum class OcclusionMode { enforced, ignored };

/// m rays fanned symmetrically about the axis, extreme rays at +-fov/2.
std::vector<Ray2> cast_fan(Point2 camera_origin, Dir2 camera_axis, double fov, int m);

/// Nearest-obstacle trace with at most one mirror reflection. Pad hits count
/// only from the interior side; a mirror back face, a beam, or a second
/// non-pad surface is a miss.
TraceResult trace(const Ray2& ray, const SceneInstance& scene,
                  OcclusionMode mode = OcclusionMode::enforced);

/// Footprint radius of one discrete ray after traveling path_length:
/// R = path_length * tan(fov / (2 (m - 1))), the angular half-bin at that range.
double coverage_radius(double path_length, double fov, int m);

/// 1 iff the ray's pad hit lands within coverage_radius of the target.
int indicator(const Ray2& ray, Point2 target, const SceneInstance& scene,
              OcclusionMode mode = OcclusionMode::enforced);

struct CoverageReport {
    double objective_value = 0.0;  ///< mean over states of the (ray, target) pair count
    std::vector<std::vector<bool>> per_state_covered;
    double unique_coverage_fraction = 0.0;  ///< mean over states of covered-target fraction
};

/// The coverage objective over a deformation set. Out-of-bounds layouts score
/// 0 outright; a state that fails check_safety contributes 0 to the sum.
CoverageReport evaluate(const LayoutVector& layout, const DeformationSet& defset,
                        const Bounds& bounds, OcclusionMode mode = OcclusionMode::enforced);

}  // namespace finview
