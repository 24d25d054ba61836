#include "finview/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace finview {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

struct Frame {
    double min_x = 0.0, max_y = 0.0, width = 0.0, height = 0.0;
    // SVG y grows downward; the scene is drawn with y flipped about max_y.
    double tx(double x) const { return x - min_x; }
    double ty(double y) const { return max_y - y; }
};

Frame fit_frame(const SceneInstance& scene, const std::vector<TraceResult>& traces) {
    double lo_x = scene.camera_origin.x, hi_x = lo_x;
    double lo_y = scene.camera_origin.y, hi_y = lo_y;
    const auto grow = [&](Point2 p) {
        lo_x = std::min(lo_x, p.x);
        hi_x = std::max(hi_x, p.x);
        lo_y = std::min(lo_y, p.y);
        hi_y = std::max(hi_y, p.y);
    };
    for (const Segment2& s : scene.back_segments) { grow(s.a); grow(s.b); }
    for (const Segment2& s : scene.pad_segments) { grow(s.a); grow(s.b); }
    for (const PlacedMirror& m : scene.mirrors) { grow(m.segment.a); grow(m.segment.b); }
    for (const TraceResult& t : traces) {
        for (const Segment2& s : t.path) { grow(s.a); grow(s.b); }
    }
    const double margin = 5.0;
    Frame f;
    f.min_x = lo_x - margin;
    f.max_y = hi_y + margin;
    f.width = (hi_x - lo_x) + 2.0 * margin;
    f.height = (hi_y - lo_y) + 2.0 * margin;
    return f;
}

void emit_line(std::ostringstream& out, const Frame& f, const Segment2& s,
               const std::string& style) {
    out << "  <line x1=\"" << num(f.tx(s.a.x)) << "\" y1=\"" << num(f.ty(s.a.y)) << "\" x2=\""
        << num(f.tx(s.b.x)) << "\" y2=\"" << num(f.ty(s.b.y)) << "\" " << style << "/>\n";
}

}  // namespace

std::string render_scene_svg(const SceneInstance& scene, const std::vector<TraceResult>& traces,
                             const std::vector<bool>& covered) {
    const Frame f = fit_frame(scene, traces);
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << num(f.width) << " "
        << num(f.height) << "\">\n";
    out << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // Ray fan first so structure draws on top of it.
    for (const TraceResult& t : traces) {
        const bool hit = t.hit_point.has_value();
        for (size_t leg = 0; leg < t.path.size(); ++leg) {
            std::string style;
            if (!hit) {
                style = "stroke=\"#f2b6b6\" stroke-width=\"0.15\" stroke-dasharray=\"1,1\"";
            } else if (leg == 0 && t.reflections == 0) {
                style = "stroke=\"#79c879\" stroke-width=\"0.2\"";
            } else if (leg == 0) {
                style = "stroke=\"#e8b74a\" stroke-width=\"0.2\"";
            } else {
                style = "stroke=\"#e88b2a\" stroke-width=\"0.2\"";
            }
            emit_line(out, f, t.path[leg], style);
        }
    }

    for (const Segment2& s : scene.back_segments) {
        emit_line(out, f, s, "stroke=\"#555555\" stroke-width=\"1.0\" stroke-linecap=\"round\"");
    }
    for (const Segment2& s : scene.pad_segments) {
        emit_line(out, f, s, "stroke=\"#111111\" stroke-width=\"1.2\" stroke-linecap=\"round\"");
    }
    for (const PlacedMirror& m : scene.mirrors) {
        emit_line(out, f, m.segment,
                  "stroke=\"#2a6fe8\" stroke-width=\"0.8\" stroke-linecap=\"round\"");
    }

    for (size_t j = 0; j < scene.pad_targets.size(); ++j) {
        const Point2 p = scene.pad_targets[j];
        const bool on = j < covered.size() && covered[j];
        out << "  <circle cx=\"" << num(f.tx(p.x)) << "\" cy=\"" << num(f.ty(p.y))
            << "\" r=\"0.7\" ";
        if (on) {
            out << "fill=\"#2e9e2e\"";
        } else {
            out << "fill=\"none\" stroke=\"#d03030\" stroke-width=\"0.3\"";
        }
        out << "/>\n";
    }

    // Camera pose: origin dot plus a short axis arrow.
    const Point2 c = scene.camera_origin;
    const Point2 tip = c + 6.0 * to_point(scene.camera_axis);
    emit_line(out, f, {c, tip}, "stroke=\"#8a2ae8\" stroke-width=\"0.6\"");
    out << "  <circle cx=\"" << num(f.tx(c.x)) << "\" cy=\"" << num(f.ty(c.y))
        << "\" r=\"1.2\" fill=\"#8a2ae8\"/>\n";

    out << "</svg>\n";
    return out.str();
}

}  // namespace finview
