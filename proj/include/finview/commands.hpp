#pragma once

#include <iosfwd>
#include <string>

#include "finview/config.hpp"
#include "finview/coverage.hpp"

namespace finview {

inline constexpr const char* kToolVersion = "finview 0.1.0";

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OptimizeOutcome {
    LayoutVector best_layout;
    double best_objective = 0.0;
    double unique_coverage_fraction = 0.0;
    long generations = 0;
    long evaluations = 0;
    CoverageReport report;
    std::string result_path;
    std::string layout_path;
    std::string history_path;
};

/// Runs the full layout optimization and persists best_layout.txt,
/// history.csv and result.txt under the configured output directory.
OptimizeOutcome cmd_optimize(const RunConfig& cfg, std::ostream& log);

/// Evaluates a saved layout against the configured deformation set, prints a
/// summary and writes evaluation.txt. Bounds violations are reported with the
/// zero objective rather than failing.
CoverageReport cmd_evaluate(const RunConfig& cfg, const std::string& layout_path,
                            std::ostream& log);

/// Renders one deformation state of a saved layout to an SVG file; returns the
/// output path.
std::string cmd_render(const RunConfig& cfg, const std::string& layout_path, int state_index,
                       std::ostream& log);

/// Writes the configured deformation set in the table format; returns the path.
std::string cmd_deform_gen(const RunConfig& cfg, std::ostream& log);

/// The configured deformation set (synthetic sweep or ingested table).
DeformationSet build_deformation_set(const RunConfig& cfg);

}  // namespace finview
