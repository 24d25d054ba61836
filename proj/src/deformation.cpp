#include "finview/deformation.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace finview {

namespace {

double frac_of(int i, int count) {
    return static_cast<double>(i) / static_cast<double>(count - 1);
}

Point2 back_node_at(const FingerParams& p, double frac) {
    return {frac * p.tip_taper * p.base_width, frac * p.finger_length};
}

Point2 pad_point_at(const FingerParams& p, double frac) {
    return {p.base_width, frac * p.finger_length};
}

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void validate(const FingerParams& p) {
    if (p.n_back_nodes < 3) {
        throw std::invalid_argument("FingerParams: n_back_nodes must be >= 3");
    }
    if (p.n_pad_points < p.n_back_nodes) {
        throw std::invalid_argument("FingerParams: n_pad_points must be >= n_back_nodes");
    }
    if (!(p.finger_length > p.base_width && p.base_width > 0.0)) {
        throw std::invalid_argument("FingerParams: need finger_length > base_width > 0");
    }
    if (!(p.tip_taper > 0.0 && p.tip_taper <= 1.0)) {
        throw std::invalid_argument("FingerParams: tip_taper must be in (0, 1]");
    }
    if (!(p.compliance_gain > 0.0)) {
        throw std::invalid_argument("FingerParams: compliance_gain must be > 0");
    }
    if (!(p.curvature_profile_exp >= 0.0)) {
        throw std::invalid_argument("FingerParams: curvature_profile_exp must be >= 0");
    }
}

DeformationState undeformed_profile(const FingerParams& p) {
    validate(p);
    DeformationState st;
    st.load = 0.0;
    st.back_nodes.reserve(p.n_back_nodes);
    st.pad_points.reserve(p.n_pad_points);
    for (int i = 0; i < p.n_back_nodes; ++i) {
        st.back_nodes.push_back(back_node_at(p, frac_of(i, p.n_back_nodes)));
    }
    for (int j = 0; j < p.n_pad_points; ++j) {
        st.pad_points.push_back(pad_point_at(p, frac_of(j, p.n_pad_points)));
    }
    return st;
}

DeformationState synth_deform(const FingerParams& p, double load) {
    validate(p);
    if (!(load >= 0.0)) {
        throw std::invalid_argument("synth_deform: load must be >= 0");
    }

    DeformationState st = undeformed_profile(p);
    st.load = load;
    if (load == 0.0) {
        return st;  // zero load is the exact fixed point
    }

    const auto deflection = [&](double frac) {
        return p.compliance_gain * load * std::pow(frac, p.curvature_profile_exp);
    };

    // Pad bends inward along the undeformed pad normal (-1, 0).
    for (int j = 0; j < p.n_pad_points; ++j) {
        const double delta = deflection(frac_of(j, p.n_pad_points));
        if (delta != 0.0) {
            st.pad_points[j].x -= delta;
        }
    }

    // Each back node re-seats along its crossbeam: anchor at the deformed pad
    // point of equal fraction, keep the crossbeam length exactly.
    for (int i = 0; i < p.n_back_nodes; ++i) {
        const double frac = frac_of(i, p.n_back_nodes);
        const double delta = deflection(frac);
        if (delta == 0.0) {
            continue;
        }
        const Point2 node = back_node_at(p, frac);
        const Point2 anchor = pad_point_at(p, frac);
        const double beam_len = norm(node - anchor);
        const Point2 anchor_def{anchor.x - delta, anchor.y};
        if (beam_len == 0.0) {
            st.back_nodes[i] = anchor_def;  // closed tip: node rides the pad
            continue;
        }
        Point2 dir = st.back_nodes[i] - anchor_def;
        double dn = norm(dir);
        if (dn == 0.0) {
            dir = node - anchor;  // degenerate: fall back to the undeformed direction
            dn = beam_len;
        }
        st.back_nodes[i] = anchor_def + (beam_len / dn) * dir;
    }
    return st;
}

DeformationSet sample_loads(const FingerParams& p, double f_max, int k) {
    if (!(f_max > 0.0)) {
        throw std::invalid_argument("sample_loads: f_max must be > 0");
    }
    if (k < 2) {
        throw std::invalid_argument("sample_loads: k must be >= 2");
    }
    DeformationSet set;
    set.source = DeformationSource::synthetic;
    set.states.reserve(k);
    for (int i = 0; i < k; ++i) {
        set.states.push_back(synth_deform(p, f_max * static_cast<double>(i) / (k - 1)));
    }
    return set;
}

namespace {

std::vector<Point2> parse_point_row(const std::string& line, int line_no, int expected) {
    std::vector<Point2> pts;
    pts.reserve(expected);
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) {
        const auto colon = tok.find(':');
        if (colon == std::string::npos) {
            throw TableFormatError("deformation table line " + std::to_string(line_no) +
                                   ": expected x:y pair, got '" + tok + "'");
        }
        try {
            size_t used = 0;
            const double x = std::stod(tok.substr(0, colon), &used);
            if (used != colon) throw std::invalid_argument(tok);
            const double y = std::stod(tok.substr(colon + 1), &used);
            if (used != tok.size() - colon - 1) throw std::invalid_argument(tok);
            pts.push_back({x, y});
        } catch (const std::exception&) {
            throw TableFormatError("deformation table line " + std::to_string(line_no) +
                                   ": malformed number in '" + tok + "'");
        }
    }
    if (static_cast<int>(pts.size()) != expected) {
        throw TableFormatError("deformation table line " + std::to_string(line_no) + ": expected " +
                               std::to_string(expected) + " points, got " +
                               std::to_string(pts.size()));
    }
    return pts;
}

}  // namespace

DeformationSet load_deformation_table(const std::string& path, std::ostream* warnings) {
    std::ifstream in(path);
    if (!in) {
        throw TableFormatError("deformation table: cannot open '" + path + "'");
    }
    std::ostream& warn = warnings ? *warnings : std::cerr;

    std::string line;
    int line_no = 0;
    if (!std::getline(in, line)) {
        throw TableFormatError("deformation table line 1: missing header");
    }
    ++line_no;

    int k = 0, back_count = 0, pad_count = 0;
    {
        char extra = 0;
        if (std::sscanf(line.c_str(), "%d,%d,%d%c", &k, &back_count, &pad_count, &extra) != 3) {
            throw TableFormatError(
                "deformation table line 1: header must be 'load_n,back_count,pad_count'");
        }
        if (k < 1 || back_count < 3 || pad_count < back_count) {
            throw TableFormatError("deformation table line 1: invalid header counts");
        }
    }

    DeformationSet set;
    set.source = DeformationSource::table;
    set.states.reserve(k);
    for (int s = 0; s < k; ++s) {
        DeformationState st;
        if (!std::getline(in, line)) {
            throw TableFormatError("deformation table line " + std::to_string(line_no + 1) +
                                   ": missing 'F=' record for state " + std::to_string(s));
        }
        ++line_no;
        if (line.rfind("F=", 0) != 0) {
            throw TableFormatError("deformation table line " + std::to_string(line_no) +
                                   ": expected 'F=<load>'");
        }
        try {
            size_t used = 0;
            st.load = std::stod(line.substr(2), &used);
            if (used != line.size() - 2) throw std::invalid_argument(line);
        } catch (const std::exception&) {
            throw TableFormatError("deformation table line " + std::to_string(line_no) +
                                   ": malformed load value");
        }
        if (!std::getline(in, line)) {
            throw TableFormatError("deformation table: truncated back-node row after line " +
                                   std::to_string(line_no));
        }
        st.back_nodes = parse_point_row(line, ++line_no, back_count);
        if (!std::getline(in, line)) {
            throw TableFormatError("deformation table: truncated pad-point row after line " +
                                   std::to_string(line_no));
        }
        st.pad_points = parse_point_row(line, ++line_no, pad_count);
        set.states.push_back(std::move(st));
    }

    bool sorted = true;
    for (size_t i = 1; i < set.states.size(); ++i) {
        if (set.states[i].load < set.states[i - 1].load) sorted = false;
    }
    if (!sorted) {
        warn << "warning: deformation table loads not ascending; re-sorting\n";
        std::stable_sort(set.states.begin(), set.states.end(),
                         [](const DeformationState& a, const DeformationState& b) {
                             return a.load < b.load;
                         });
    }
    for (size_t i = 1; i < set.states.size(); ++i) {
        if (!(set.states[i].load > set.states[i - 1].load)) {
            throw TableFormatError("deformation table: duplicate load " +
                                   fmt_double(set.states[i].load));
        }
    }
    if (set.states.empty() || set.states.front().load != 0.0) {
        throw TableFormatError("deformation table: missing zero-load reference state");
    }
    return set;
}

void save_deformation_table(const DeformationSet& set, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw TableFormatError("deformation table: cannot write '" + path + "'");
    }
    const int back_count = set.states.empty() ? 0 : static_cast<int>(set.states[0].back_nodes.size());
    const int pad_count = set.states.empty() ? 0 : static_cast<int>(set.states[0].pad_points.size());
    out << set.states.size() << ',' << back_count << ',' << pad_count << '\n';
    for (const DeformationState& st : set.states) {
        out << "F=" << fmt_double(st.load) << '\n';
        for (size_t i = 0; i < st.back_nodes.size(); ++i) {
            out << (i ? " " : "") << fmt_double(st.back_nodes[i].x) << ':'
                << fmt_double(st.back_nodes[i].y);
        }
        out << '\n';
        for (size_t i = 0; i < st.pad_points.size(); ++i) {
            out << (i ? " " : "") << fmt_double(st.pad_points[i].x) << ':'
                << fmt_double(st.pad_points[i].y);
        }
        out << '\n';
    }
}

}  // namespace finview
