#include "finview/scene.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <tuple>

namespace finview {

namespace {

constexpr double deg = std::numbers::pi / 180.0;

void require_layout_matches(const LayoutVector& layout, const DeformationState& state) {
    if (layout.mirrors.size() + 1 != state.back_nodes.size()) {
        throw std::invalid_argument("layout mirror count does not match back-node count - 1");
    }
}

Point2 centroid(const std::vector<Point2>& pts) {
    Point2 c{0.0, 0.0};
    for (const Point2& p : pts) c = c + p;
    return (1.0 / static_cast<double>(pts.size())) * c;
}

}  // namespace

Bounds default_bounds(const FingerParams& p) {
    validate(p);
    const double back_len =
        std::hypot(p.tip_taper * p.base_width, p.finger_length) / (p.n_back_nodes - 1);
    Bounds b;
    b.theta_min = -80.0 * deg;
    b.theta_max = 80.0 * deg;
    b.offset_min = -0.4 * back_len;
    b.offset_max = 0.4 * back_len;
    b.length_min = 2.0;
    b.length_max = 1.2 * back_len;
    b.u_min = 0.05;
    b.u_max = 0.95;
    b.phi_min = -60.0 * deg;
    b.phi_max = 60.0 * deg;
    return b;
}

std::vector<BoundsViolation> check_bounds(const LayoutVector& layout, const Bounds& bounds) {
    std::vector<BoundsViolation> out;
    const auto check = [&out](const std::string& name, double v, double lo, double hi) {
        if (!(v >= lo && v <= hi)) {
            out.push_back({name, v, lo, hi});
        }
    };
    for (size_t i = 0; i < layout.mirrors.size(); ++i) {
        const std::string tag = "mirror." + std::to_string(i + 1) + ".";
        const MirrorParams& m = layout.mirrors[i];
        check(tag + "theta", m.theta, bounds.theta_min, bounds.theta_max);
        check(tag + "offset", m.offset, bounds.offset_min, bounds.offset_max);
        check(tag + "length", m.length, bounds.length_min, bounds.length_max);
    }
    check("camera.u", layout.camera.u, bounds.u_min, bounds.u_max);
    check("camera.phi", layout.camera.phi, bounds.phi_min, bounds.phi_max);
    return out;
}

std::vector<PlacedMirror> instantiate_mirrors(const LayoutVector& layout,
                                              const DeformationState& state) {
    require_layout_matches(layout, state);
    const Point2 pad_centroid = centroid(state.pad_points);

    std::vector<PlacedMirror> mirrors;
    mirrors.reserve(layout.mirrors.size());
    for (size_t i = 0; i < layout.mirrors.size(); ++i) {
        const MirrorParams& mp = layout.mirrors[i];
        const Point2 n0 = state.back_nodes[i];
        const Point2 n1 = state.back_nodes[i + 1];
        const Dir2 seg_dir = make_dir(n1.x - n0.x, n1.y - n0.y);
        const Point2 mid = 0.5 * (n0 + n1) + mp.offset * to_point(seg_dir);
        const Dir2 mir_dir = rotate(seg_dir, mp.theta);
        const Point2 half = (0.5 * mp.length) * to_point(mir_dir);

        PlacedMirror pm;
        pm.segment = {mid - half, mid + half};
        pm.host = static_cast<int>(i);
        pm.mount = mid;
        Dir2 n = perp(mir_dir);
        if (dot(to_point(n), pad_centroid - mid) < 0.0) {
            n = {-n.dx, -n.dy};
        }
        pm.front_normal = n;
        mirrors.push_back(pm);
    }
    return mirrors;
}

std::pair<Point2, Dir2> place_camera(const LayoutVector& layout, const DeformationState& state) {
    const Point2 back_base = state.back_nodes.front();
    const Point2 pad_base = state.pad_points.front();
    const Point2 baseline = pad_base - back_base;
    const Point2 origin = back_base + layout.camera.u * baseline;
    const Dir2 axis = rotate(make_dir(baseline.x, baseline.y), layout.camera.phi);
    return {origin, axis};
}

SceneInstance make_scene(const LayoutVector& layout, const DeformationState& state) {
    require_layout_matches(layout, state);
    SceneInstance scene;
    scene.mirrors = instantiate_mirrors(layout, state);
    std::tie(scene.camera_origin, scene.camera_axis) = place_camera(layout, state);
    scene.fov = layout.camera.fov;
    scene.ray_count = layout.camera.ray_count;

    scene.back_segments.reserve(state.back_nodes.size() - 1);
    for (size_t i = 0; i + 1 < state.back_nodes.size(); ++i) {
        scene.back_segments.push_back({state.back_nodes[i], state.back_nodes[i + 1]});
    }
    scene.pad_segments.reserve(state.pad_points.size() - 1);
    scene.pad_inner_normals.reserve(state.pad_points.size() - 1);
    for (size_t j = 0; j + 1 < state.pad_points.size(); ++j) {
        const Point2 a = state.pad_points[j];
        const Point2 b = state.pad_points[j + 1];
        scene.pad_segments.push_back({a, b});
        // Base-to-tip pad order keeps the interior on the left of the segment.
        scene.pad_inner_normals.push_back(perp(make_dir(b.x - a.x, b.y - a.y)));
    }
    scene.pad_targets = state.pad_points;
    return scene;
}

bool check_safety(const SceneInstance& scene) {
    for (const PlacedMirror& m : scene.mirrors) {
        for (size_t j = 0; j < scene.back_segments.size(); ++j) {
            const Segment2& beam = scene.back_segments[j];
            if (static_cast<int>(j) == m.host) {
                // The mirror's carrier line passes through the mount, which lies
                // on the host segment, so a non-parallel mirror can touch the
                // host only at the mount point itself. A parallel mirror lies
                // along the beam and overlaps it far beyond the 1e-6 mm mount
                // tolerance.
                const Point2 md = m.segment.b - m.segment.a;
                const Point2 bd = beam.b - beam.a;
                const bool parallel =
                    std::abs(cross(md, bd)) <= 1e-9 * norm(md) * norm(bd);
                if (parallel && segments_intersect(m.segment, beam)) {
                    return false;
                }
                continue;
            }
            if (segments_intersect(m.segment, beam)) {
                return false;
            }
        }
        for (const Segment2& s : scene.pad_segments) {
            if (segments_intersect(m.segment, s)) {
                return false;
            }
        }
    }
    return true;
}

int layout_dimension(int n_back_nodes) {
    return 3 * (n_back_nodes - 1) + 2;
}

std::vector<double> encode_layout(const LayoutVector& layout) {
    std::vector<double> x;
    x.reserve(3 * layout.mirrors.size() + 2);
    for (const MirrorParams& m : layout.mirrors) {
        x.push_back(m.theta);
        x.push_back(m.offset);
        x.push_back(m.length);
    }
    x.push_back(layout.camera.u);
    x.push_back(layout.camera.phi);
    return x;
}

LayoutVector decode_layout(const std::vector<double>& x, double fov, int ray_count) {
    if (x.size() < 2 || (x.size() - 2) % 3 != 0) {
        throw std::invalid_argument("decode_layout: vector size must be 3*(n-1) + 2");
    }
    LayoutVector layout;
    const size_t n_mirrors = (x.size() - 2) / 3;
    layout.mirrors.reserve(n_mirrors);
    for (size_t i = 0; i < n_mirrors; ++i) {
        layout.mirrors.push_back({x[3 * i], x[3 * i + 1], x[3 * i + 2]});
    }
    layout.camera.u = x[x.size() - 2];
    layout.camera.phi = x[x.size() - 1];
    layout.camera.fov = fov;
    layout.camera.ray_count = ray_count;
    return layout;
}

}  // namespace finview
