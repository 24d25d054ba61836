#pragma once

#include <string>
#include <vector>

#include "finview/coverage.hpp"

namespace finview {

/// Deterministic SVG picture of one (layout, state) pair: beams, mirrors,
/// camera pose, the traced ray fan (direct / reflected / miss styles), and
/// covered vs uncovered pad targets.
std::string render_scene_svg(const SceneInstance& scene, const std::vector<TraceResult>& traces,
                             const std::vector<bool>& covered);

}  // namespace finview
