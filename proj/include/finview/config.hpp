#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "finview/scene.hpp"

namespace finview {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bounds as configured: angles in degrees, mirror offset/length relative to
/// the undeformed back-segment length where marked _frac.
struct BoundsConfig {
    double theta_min_deg = -80.0, theta_max_deg = 80.0;
    double offset_min_frac = -0.4, offset_max_frac = 0.4;
    double length_min_mm = 2.0, length_max_frac = 1.2;
    double u_min = 0.05, u_max = 0.95;
    double phi_min_deg = -60.0, phi_max_deg = 60.0;
};

Bounds resolve_bounds(const BoundsConfig& cfg, const FingerParams& finger);

struct LoadsConfig {
    std::optional<std::string> table_path;  ///< when set, overrides the synthetic sweep
    double f_max = 7.5;                     ///< N
    int k = 5;
};

struct CmaesConfig {
    std::optional<int> population;  ///< absent: 4 + floor(3 ln dim)
    std::optional<int> parents;     ///< absent: population / 2
    double sigma0 = 0.3;            ///< in normalized [0,1] search coordinates
    long max_generations = 500;
    std::optional<double> target_objective;
    double sigma_tol = 1e-12;
    std::uint64_t seed = 0;  ///< mandatory in the file; no wall-clock default
};

struct RunConfig {
    FingerParams finger;
    BoundsConfig bounds;
    double fov_deg = 135.0;
    int ray_count = 61;
    LoadsConfig loads;
    CmaesConfig cmaes;
    std::string output_dir = "out";
};

/// Parses the sectioned key = value config format. Unknown sections or keys,
/// missing seed, and violated invariants raise ConfigError.
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<config>");
RunConfig load_config(const std::string& path);

/// Canonical re-serialization; parsing it back yields an equivalent config.
std::string serialize_config(const RunConfig& cfg);

/// Layout files: one labeled parameter per line, angles in degrees:
///   mirror.1.theta_deg = 31.5
///   mirror.1.offset_mm = ...
///   mirror.1.length_mm = ...
///   camera.u = ...
///   camera.phi_deg = ...
LayoutVector load_layout_file(const std::string& path, double fov_rad, int ray_count);
std::string serialize_layout(const LayoutVector& layout);
void save_layout_file(const LayoutVector& layout, const std::string& path);

/// "%.17g" formatting used across all persisted files (round-trips exactly).
std::string format_double(double v);

}  // namespace finview
