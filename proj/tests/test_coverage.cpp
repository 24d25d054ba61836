#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "coverage_oracle.hpp"
#include "finview/coverage.hpp"

using namespace finview;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double deg = pi / 180.0;

/// Hand-built scene: one 45 degree mirror at x = 10, pad overhead at y = 5.
/// An axis-parallel ray from the origin folds 90 degrees up onto the pad.
SceneInstance folded_scene() {
    SceneInstance scene;
    scene.camera_origin = {0.0, 0.0};
    scene.camera_axis = {1.0, 0.0};
    scene.fov = 90.0 * deg;
    scene.ray_count = 9;
    const double k = 2.0;
    PlacedMirror m;
    m.segment = {{10.0 - k, -k}, {10.0 + k, k}};
    m.front_normal = make_dir(-1.0, 1.0);
    m.host = 0;
    scene.mirrors.push_back(m);
    scene.pad_segments.push_back({{8.0, 5.0}, {12.0, 5.0}});
    scene.pad_inner_normals.push_back({0.0, -1.0});
    scene.pad_targets = {{9.0, 5.0}, {10.0, 5.0}, {11.0, 5.0}};
    return scene;
}

LayoutVector make_layout(const FingerParams& p, const Bounds& b, double fov_deg, int rays) {
    LayoutVector layout;
    layout.mirrors.assign(p.n_back_nodes - 1,
                          MirrorParams{0.0, 0.0, 0.5 * (b.length_min + b.length_max)});
    layout.camera.u = 0.5;
    layout.camera.phi = 30.0 * deg;
    layout.camera.fov = fov_deg * deg;
    layout.camera.ray_count = rays;
    return layout;
}

LayoutVector random_layout(const FingerParams& p, const Bounds& b, std::mt19937_64& rng,
                           double fov_deg, int rays) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    LayoutVector layout = make_layout(p, b, fov_deg, rays);
    for (MirrorParams& m : layout.mirrors) {
        m.theta = b.theta_min + unit(rng) * (b.theta_max - b.theta_min);
        m.offset = b.offset_min + unit(rng) * (b.offset_max - b.offset_min);
        m.length = b.length_min + unit(rng) * (b.length_max - b.length_min);
    }
    layout.camera.u = b.u_min + unit(rng) * (b.u_max - b.u_min);
    layout.camera.phi = b.phi_min + unit(rng) * (b.phi_max - b.phi_min);
    return layout;
}

}  // namespace

TEST_CASE("cast_fan: m=3 over 90 degrees") {
    const auto rays = cast_fan({0.0, 0.0}, {1.0, 0.0}, 90.0 * deg, 3);
    REQUIRE(rays.size() == 3);
    CHECK(angle_of(rays[0].dir) == doctest::Approx(-45.0 * deg).epsilon(1e-12));
    CHECK(angle_of(rays[1].dir) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(angle_of(rays[2].dir) == doctest::Approx(45.0 * deg).epsilon(1e-12));
}

TEST_CASE("cast_fan: middle ray of an odd fan lies on the axis") {
    const Dir2 axis = dir_from_angle(0.7);
    const auto rays = cast_fan({1.0, 2.0}, axis, 135.0 * deg, 61);
    CHECK(std::abs(rays[30].dir.dx - axis.dx) < 1e-12);
    CHECK(std::abs(rays[30].dir.dy - axis.dy) < 1e-12);
}

TEST_CASE("cast_fan: uniform angular spacing") {
    const auto rays = cast_fan({0.0, 0.0}, dir_from_angle(0.3), 135.0 * deg, 61);
    const double expected = 135.0 * deg / 60.0;
    for (size_t j = 0; j + 1 < rays.size(); ++j) {
        const double a0 = angle_of(rays[j].dir);
        const double a1 = angle_of(rays[j + 1].dir);
        CHECK(std::abs((a1 - a0) - expected) < 1e-12);
    }
}

TEST_CASE("trace: unobstructed direct hit") {
    SceneInstance scene;
    scene.camera_origin = {0.0, 0.0};
    scene.camera_axis = {1.0, 0.0};
    scene.fov = 90.0 * deg;
    scene.ray_count = 5;
    scene.pad_segments.push_back({{7.0, -3.0}, {7.0, 3.0}});
    scene.pad_inner_normals.push_back({-1.0, 0.0});
    scene.pad_targets = {{7.0, 0.0}};

    const TraceResult tr = trace({{0.0, 0.0}, {1.0, 0.0}}, scene);
    REQUIRE(tr.hit_point.has_value());
    CHECK(tr.reflections == 0);
    CHECK(tr.path_length == doctest::Approx(7.0).epsilon(1e-12));
    CHECK(tr.hit_point->x == doctest::Approx(7.0));
    CHECK(tr.hit_point->y == doctest::Approx(0.0));
    REQUIRE(tr.path.size() == 1);
}

TEST_CASE("trace: 45 degree fold onto the pad") {
    const SceneInstance scene = folded_scene();
    const TraceResult tr = trace({{0.0, 0.0}, {1.0, 0.0}}, scene);
    REQUIRE(tr.hit_point.has_value());
    CHECK(tr.reflections == 1);
    CHECK(tr.hit_point->x == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(tr.hit_point->y == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(tr.path_length == doctest::Approx(15.0).epsilon(1e-12));
    REQUIRE(tr.path.size() == 2);
}

TEST_CASE("trace: back beam occludes") {
    SceneInstance scene;
    scene.camera_origin = {0.0, 0.0};
    scene.camera_axis = {1.0, 0.0};
    scene.fov = 90.0 * deg;
    scene.ray_count = 5;
    scene.back_segments.push_back({{3.0, -2.0}, {3.0, 2.0}});
    scene.pad_segments.push_back({{7.0, -3.0}, {7.0, 3.0}});
    scene.pad_inner_normals.push_back({-1.0, 0.0});
    scene.pad_targets = {{7.0, 0.0}};

    const TraceResult tr = trace({{0.0, 0.0}, {1.0, 0.0}}, scene);
    CHECK_FALSE(tr.hit_point.has_value());
    CHECK(tr.path_length == doctest::Approx(3.0));

    // The same ray reaches the pad once occlusion is ignored.
    const TraceResult free_tr = trace({{0.0, 0.0}, {1.0, 0.0}}, scene, OcclusionMode::ignored);
    CHECK(free_tr.hit_point.has_value());
}

TEST_CASE("trace: mirror back face is opaque and terminal") {
    SceneInstance scene = folded_scene();
    // Approach the mirror from behind: flip the ray to come from the right.
    const TraceResult tr = trace({{20.0, 0.0}, {-1.0, 0.0}}, scene);
    CHECK_FALSE(tr.hit_point.has_value());
}

TEST_CASE("coverage_radius: proportional to path length") {
    CHECK(coverage_radius(0.0, 135.0 * deg, 61) == 0.0);
    const double r1 = coverage_radius(25.0, 135.0 * deg, 61);
    const double r2 = coverage_radius(50.0, 135.0 * deg, 61);
    CHECK(r2 == doctest::Approx(2.0 * r1).epsilon(1e-12));
    CHECK(r2 == doctest::Approx(50.0 * std::tan(1.125 * deg)).epsilon(1e-12));
    CHECK(r2 == doctest::Approx(0.982).epsilon(1e-3));
}

TEST_CASE("indicator: misses cover nothing, exact hits cover") {
    const SceneInstance scene = folded_scene();
    const Ray2 fold{{0.0, 0.0}, {1.0, 0.0}};
    CHECK(indicator(fold, {10.0, 5.0}, scene) == 1);  // lands exactly on the target
    const Ray2 away{{0.0, 0.0}, {-1.0, 0.0}};
    for (const Point2& t : scene.pad_targets) {
        CHECK(indicator(away, t, scene) == 0);
    }
}

TEST_CASE("indicator: matches independent re-trace on random scenes") {
    FingerParams p;
    p.n_back_nodes = 3;
    p.n_pad_points = 8;
    const Bounds b = default_bounds(p);
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> load(0.0, 7.5);
    int positives = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const LayoutVector layout = random_layout(p, b, rng, 120.0, 9);
        const DeformationState st = synth_deform(p, load(rng));
        const SceneInstance scene = make_scene(layout, st);
        const auto rays = cast_fan(scene.camera_origin, scene.camera_axis, scene.fov,
                                   scene.ray_count);
        for (const Ray2& ray : rays) {
            for (const Point2& target : scene.pad_targets) {
                const int got = indicator(ray, target, scene);
                CHECK(got == test::oracle_indicator(ray, target, scene,
                                                    OcclusionMode::enforced));
                positives += got;
            }
        }
    }
    CHECK(positives > 0);  // the comparison is not vacuous
}

TEST_CASE("evaluate: bounds violation zeroes the objective") {
    const FingerParams p;
    const Bounds b = default_bounds(p);
    LayoutVector layout = make_layout(p, b, 135.0, 61);
    layout.camera.u = 1.5;
    const DeformationSet set = sample_loads(p, 7.5, 2);
    const CoverageReport report = evaluate(layout, set, b);
    CHECK(report.objective_value == 0.0);
    CHECK(report.unique_coverage_fraction == 0.0);
    for (const auto& mask : report.per_state_covered) {
        for (const bool c : mask) CHECK_FALSE(c);
    }
}

TEST_CASE("evaluate: equals full enumeration oracle on small scenes") {
    FingerParams p;
    p.n_back_nodes = 3;
    p.n_pad_points = 10;
    const Bounds b = default_bounds(p);
    const DeformationSet set = sample_loads(p, 5.0, 2);
    std::mt19937_64 rng(59);
    for (int trial = 0; trial < 40; ++trial) {
        const LayoutVector layout = random_layout(p, b, rng, 110.0, 11);
        const CoverageReport report = evaluate(layout, set, b);
        CHECK(report.objective_value == test::oracle_objective(layout, set, b));
    }
}

TEST_CASE("evaluate: ignoring occlusion never lowers the objective") {
    const FingerParams p;
    const Bounds b = default_bounds(p);
    const DeformationSet set = sample_loads(p, 7.5, 3);
    std::mt19937_64 rng(61);
    bool strict = false;
    for (int trial = 0; trial < 25; ++trial) {
        const LayoutVector layout = random_layout(p, b, rng, 135.0, 31);
        const double with = evaluate(layout, set, b).objective_value;
        const double without =
            evaluate(layout, set, b, OcclusionMode::ignored).objective_value;
        CHECK(with <= without);
        if (with < without) strict = true;
    }
    CHECK(strict);
}

TEST_CASE("evaluate: deterministic bit-for-bit") {
    const FingerParams p;
    const Bounds b = default_bounds(p);
    const DeformationSet set = sample_loads(p, 7.5, 3);
    std::mt19937_64 rng(67);
    const LayoutVector layout = random_layout(p, b, rng, 135.0, 61);
    const CoverageReport a = evaluate(layout, set, b);
    const CoverageReport c = evaluate(layout, set, b);
    CHECK(a.objective_value == c.objective_value);
    CHECK(a.unique_coverage_fraction == c.unique_coverage_fraction);
    CHECK(a.per_state_covered == c.per_state_covered);
}

TEST_CASE("evaluate: objective stays within the pair-count bound") {
    const FingerParams p;
    const Bounds b = default_bounds(p);
    const DeformationSet set = sample_loads(p, 7.5, 3);
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 10; ++trial) {
        const LayoutVector layout = random_layout(p, b, rng, 135.0, 21);
        const CoverageReport report = evaluate(layout, set, b);
        CHECK(report.objective_value >= 0.0);
        CHECK(report.objective_value <= 21.0 * p.n_pad_points);
        CHECK(report.unique_coverage_fraction >= 0.0);
        CHECK(report.unique_coverage_fraction <= 1.0);
    }
}

TEST_CASE("evaluate: rejects mismatched layout dimension") {
    FingerParams p;
    const Bounds b = default_bounds(p);
    const DeformationSet set = sample_loads(p, 5.0, 2);
    LayoutVector layout = make_layout(p, b, 135.0, 61);
    layout.mirrors.pop_back();
    CHECK_THROWS_AS(evaluate(layout, set, b), std::invalid_argument);
}
