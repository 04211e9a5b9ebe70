#include <cmath>
#include <string>

#include "wslab/io.hpp"

namespace wslab {

namespace {

struct Frame {
    double x0, y1, scale; // y1 is the top in domain coordinates
    double px(double x) const { return (x - x0) * scale; }
    double py(double y) const { return (y1 - y) * scale; } // svg y runs down
};

void emit_path(std::string& o, const std::vector<Point2>& pts, const Frame& f,
               bool closed, const char* style) {
    if (pts.size() < 2) return;
    o += "<path d=\"";
    for (size_t i = 0; i < pts.size(); ++i) {
        o += i ? "L" : "M";
        o += g17(f.px(pts[i].x));
        o += " ";
        o += g17(f.py(pts[i].y));
    }
    if (closed) o += "Z";
    o += "\" ";
    o += style;
    o += "/>\n";
}

} // namespace

std::string domain_to_svg(const PlanarDomain& dom, const SvgOptions& opt) {
    double w = dom.box.x1 - dom.box.x0;
    double h = dom.box.y1 - dom.box.y0;
    if (w <= 0.0 || h <= 0.0) {
        w = h = 1.0;
    }
    double margin = 0.03 * std::max(w, h);
    Frame f{dom.box.x0 - margin, dom.box.y1 + margin,
            opt.width_px / (w + 2.0 * margin)};
    double ph = (h + 2.0 * margin) * f.scale;
    double thin = std::max(0.5, opt.width_px / 1200.0);

    std::string o = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"";
    o += g17(opt.width_px);
    o += "\" height=\"";
    o += g17(ph);
    o += "\" viewBox=\"0 0 ";
    o += g17(opt.width_px);
    o += " ";
    o += g17(ph);
    o += "\">\n";

    std::string wall_style = "fill=\"#eef2f7\" stroke=\"#1f2937\" stroke-width=\"" +
                             g17(thin) + "\" stroke-linejoin=\"round\"";
    for (const auto& poly : dom.outer)
        emit_path(o, poly, f, true, wall_style.c_str());
    std::string hole_style = "fill=\"#ffffff\" stroke=\"#1f2937\" stroke-width=\"" +
                             g17(thin) + "\" stroke-linejoin=\"round\"";
    for (const auto& poly : dom.holes)
        emit_path(o, poly, f, true, hole_style.c_str());
    std::string slit_style =
        "fill=\"none\" stroke=\"#b91c1c\" stroke-width=\"" + g17(thin) +
        "\" stroke-linecap=\"round\"";
    for (const auto& pl : dom.slits) emit_path(o, pl, f, false, slit_style.c_str());

    if (opt.draw_midlines) {
        std::string mid_style =
            "fill=\"none\" stroke=\"#6b7280\" stroke-width=\"" + g17(thin) +
            "\" stroke-dasharray=\"4 3\"";
        for (const auto& lm : dom.landmarks.decorations)
            for (const auto& ml : lm.midline)
                emit_path(o, ml, f, false, mid_style.c_str());
    }

    std::string region_style =
        "fill=\"#2563eb\" fill-opacity=\"0.18\" stroke=\"#2563eb\" stroke-width=\"" +
        g17(thin) + "\"";
    for (const auto& poly : opt.overlay_regions)
        emit_path(o, poly, f, true, region_style.c_str());
    std::string path_style = "fill=\"none\" stroke=\"#047857\" stroke-width=\"" +
                             g17(2.0 * thin) + "\" stroke-linecap=\"round\"";
    for (const auto& pl : opt.overlay_paths)
        emit_path(o, pl, f, false, path_style.c_str());
    for (const auto& p : opt.overlay_points) {
        o += "<circle cx=\"";
        o += g17(f.px(p.x));
        o += "\" cy=\"";
        o += g17(f.py(p.y));
        o += "\" r=\"";
        o += g17(3.0 * thin);
        o += "\" fill=\"#dc2626\"/>\n";
    }
    o += "</svg>\n";
    return o;
}

} // namespace wslab
