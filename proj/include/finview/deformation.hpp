#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "finview/geometry.hpp"

namespace finview {

/// Parametric 2D cross-section of a Fin Ray finger. The undeformed profile is
/// a wedge: the tactile pad runs straight from (base_width, 0) up to
/// (base_width, finger_length); the back beam runs from the origin to
/// (tip_taper * base_width, finger_length). Crossbeams join equal arc-length
/// fractions of the two beams and are treated as near-rigid links.
struct FingerParams {
    int n_back_nodes = 7;
    int n_pad_points = 40;
    double finger_length = 80.0;       ///< mm
    double base_width = 25.0;          ///< mm, |N1 - P1|
    double tip_taper = 0.9;            ///< in (0, 1]; 1 closes the wedge at the tip
    double compliance_gain = 2.0;      ///< mm of tip deflection per N
    double curvature_profile_exp = 2.0;
};

/// Throws std::invalid_argument when a FingerParams invariant is broken.
void validate(const FingerParams& p);

/// One load level's finger geometry, base-to-tip ordered.
struct DeformationState {
    double load = 0.0;  ///< N
    std::vector<Point2> back_nodes;
    std::vector<Point2> pad_points;
};

enum class DeformationSource { synthetic, table };

struct DeformationSet {
    std::vector<DeformationState> states;  ///< loads strictly increasing, states[0] at 0 N
    DeformationSource source = DeformationSource::synthetic;
};

/// Undeformed profile (load 0), exactly the fixed point of synth_deform.
DeformationState undeformed_profile(const FingerParams& p);

/// Bends the pad inward by delta(s) = compliance_gain * load * s^curvature_profile_exp
/// along the pad normal (s = normalized arc length, 0 at base) and re-seats each
/// back node by projecting along its crossbeam so the crossbeam length is preserved.
/// Rejects negative load.
DeformationState synth_deform(const FingerParams& p, double load);

/// K states at loads {0, f_max/(k-1), ..., f_max} via synth_deform. k >= 2.
DeformationSet sample_loads(const FingerParams& p, double f_max, int k);

class TableFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Plain-text deformation table:
///   header  "load_n,back_count,pad_count"
///   per state: "F=<load>" line, back nodes as space-separated "x:y" pairs,
///   pad points likewise.
/// States arriving out of load order are re-sorted ascending with a warning on
/// `warnings` (stderr when null). Missing zero-load state or inconsistent
/// counts raise TableFormatError.
DeformationSet load_deformation_table(const std::string& path, std::ostream* warnings = nullptr);

void save_deformation_table(const DeformationSet& set, const std::string& path);

}  // namespace finview
