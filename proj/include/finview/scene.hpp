#pragma once

#include <string>
#include <utility>
#include <vector>

#include "finview/deformation.hpp"
#include "finview/geometry.hpp"

namespace finview {

/// Placement of one mirror relative to its host back-beam segment.
struct MirrorParams {
    double theta = 0.0;   ///< rad, rotation from the host segment direction
    double offset = 0.0;  ///< mm, signed midpoint shift along the host segment
    double length = 0.0;  ///< mm
};

struct CameraParams {
    double u = 0.5;         ///< baseline fraction in (0, 1), 0 at the back base node
    double phi = 0.0;       ///< rad, optical axis vs baseline
    double fov = 0.0;       ///< rad, scene constant (not optimized)
    int ray_count = 0;      ///< scene constant (not optimized)
};

/// The optimized decision vector: one MirrorParams per back-beam segment plus
/// the camera's (u, phi). Dimension 3*(n-1) + 2.
struct LayoutVector {
    std::vector<MirrorParams> mirrors;
    CameraParams camera;
};

/// Per-parameter closed ranges shared by all mirrors.
struct Bounds {
    double theta_min = 0.0, theta_max = 0.0;
    double offset_min = 0.0, offset_max = 0.0;
    double length_min = 0.0, length_max = 0.0;
    double u_min = 0.0, u_max = 0.0;
    double phi_min = 0.0, phi_max = 0.0;
};

/// Permissive defaults derived from the undeformed back-segment length s:
/// theta in [-80 deg, 80 deg], offset in [-0.4 s, 0.4 s], length in [2 mm, 1.2 s],
/// u in [0.05, 0.95], phi in [-60 deg, 60 deg].
Bounds default_bounds(const FingerParams& p);

struct BoundsViolation {
    std::string parameter;  ///< e.g. "mirror.2.length", "camera.u"
    double value = 0.0;
    double min = 0.0;
    double max = 0.0;
};

/// Empty iff every layout parameter lies within its closed range.
std::vector<BoundsViolation> check_bounds(const LayoutVector& layout, const Bounds& bounds);

struct PlacedMirror {
    Segment2 segment;
    Dir2 front_normal;  ///< unit normal of the reflective face, toward the pad
    int host = 0;       ///< index of the back-beam segment carrying the mount
    Point2 mount;       ///< mirror midpoint, on the host segment
};

/// World-space mirror segments for one deformation state. Mirror i sits on
/// segment N_i N_{i+1}: midpoint at the segment midpoint shifted by `offset`
/// along the segment, rotated by `theta` about that midpoint. The reflective
/// face is the side toward the pad centroid.
std::vector<PlacedMirror> instantiate_mirrors(const LayoutVector& layout,
                                              const DeformationState& state);

/// Camera pose on the baseline N_1 -> P_1: origin at N_1 + u (P_1 - N_1),
/// axis = baseline direction rotated by phi.
std::pair<Point2, Dir2> place_camera(const LayoutVector& layout, const DeformationState& state);

/// World-space realization of one (layout, state) pair.
struct SceneInstance {
    std::vector<PlacedMirror> mirrors;
    Point2 camera_origin;
    Dir2 camera_axis;
    std::vector<Segment2> back_segments;
    std::vector<Segment2> pad_segments;
    std::vector<Dir2> pad_inner_normals;  ///< per pad segment, toward the finger interior
    std::vector<Point2> pad_targets;
    double fov = 0.0;
    int ray_count = 0;
};

SceneInstance make_scene(const LayoutVector& layout, const DeformationState& state);

/// True iff no mirror segment intersects the back-beam or pad polylines,
/// excluding the point contact at the mirror's own mount (1e-6 mm tolerance).
/// A mirror collinear with its host beam overlaps it beyond that tolerance
/// and therefore interferes.
bool check_safety(const SceneInstance& scene);

/// Flat decision-vector layout: (theta, offset, length) per mirror, then u, phi.
std::vector<double> encode_layout(const LayoutVector& layout);
LayoutVector decode_layout(const std::vector<double>& x, double fov, int ray_count);
int layout_dimension(int n_back_nodes);

}  // namespace finview
