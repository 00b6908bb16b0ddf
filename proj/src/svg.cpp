#include "polybound/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace polybound {

namespace {

struct PlaneAxes {
    int h, v;  // state indices shown horizontally / vertically
};

PlaneAxes plane_axes(const std::string& plane) {
    if (plane == "x1x2") return {0, 1};
    if (plane == "x1x3") return {0, 2};
    if (plane == "x2x3") return {1, 2};
    throw std::invalid_argument("unknown plane '" + plane + "' (use x1x2, x1x3 or x2x3)");
}

double axis_center(const EllipsoidBound& e, int axis) { return axis == 2 ? e.x30 : 0.0; }

double axis_radius(const EllipsoidBound& e, int axis) {
    double p = axis == 0 ? e.p1 : axis == 1 ? e.p2 : e.p3;
    return e.c / std::sqrt(p);
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    // Avoid the two distinct zeros "-0.00" / "0.00" for the same geometry.
    std::string s = buf;
    if (s == "-0.00") s = "0.00";
    return s;
}

}  // namespace

std::string render_projection_svg(const std::vector<EllipsoidBound>& cloud,
                                  const std::vector<SvgOverlay>& overlays,
                                  const std::string& plane, int resolution, int size_px) {
    if (cloud.empty() && overlays.empty()) {
        throw std::invalid_argument("render_projection_svg: nothing to draw (empty union)");
    }
    PlaneAxes ax = plane_axes(plane);

    // World-space bounding box over every drawn ellipse.
    double lo_h = 1e300, hi_h = -1e300, lo_v = 1e300, hi_v = -1e300;
    auto grow = [&](const EllipsoidBound& e) {
        lo_h = std::min(lo_h, axis_center(e, ax.h) - axis_radius(e, ax.h));
        hi_h = std::max(hi_h, axis_center(e, ax.h) + axis_radius(e, ax.h));
        lo_v = std::min(lo_v, axis_center(e, ax.v) - axis_radius(e, ax.v));
        hi_v = std::max(hi_v, axis_center(e, ax.v) + axis_radius(e, ax.v));
    };
    for (const auto& e : cloud) grow(e);
    for (const auto& o : overlays) grow(o.ellipsoid);
    double span = std::max(hi_h - lo_h, hi_v - lo_v);
    if (span <= 0) span = 1;
    double margin = 0.05 * span;
    double scale = (size_px - 2.0) / (span + 2 * margin);
    double mid_h = 0.5 * (lo_h + hi_h), mid_v = 0.5 * (lo_v + hi_v);
    auto X = [&](double wh) { return (wh - mid_h) * scale + size_px / 2.0; };
    auto Y = [&](double wv) { return size_px / 2.0 - (wv - mid_v) * scale; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size_px << "\" height=\""
        << size_px << "\" viewBox=\"0 0 " << size_px << " " << size_px << "\">\n";
    svg << "<rect width=\"" << size_px << "\" height=\"" << size_px << "\" fill=\"white\"/>\n";

    if (!cloud.empty()) {
        for (const auto& pl : union_projection_outline(cloud, plane, resolution)) {
            svg << "<polyline fill=\"none\" stroke=\"#999999\" stroke-width=\"1\" points=\"";
            bool first = true;
            for (const auto& pt : pl.points) {
                if (!first) svg << ' ';
                first = false;
                svg << fmt(X(pt[0])) << ',' << fmt(Y(pt[1]));
            }
            svg << "\"/>\n";
        }
    }

    for (const auto& o : overlays) {
        const EllipsoidBound& e = o.ellipsoid;
        svg << "<ellipse cx=\"" << fmt(X(axis_center(e, ax.h))) << "\" cy=\""
            << fmt(Y(axis_center(e, ax.v))) << "\" rx=\"" << fmt(axis_radius(e, ax.h) * scale)
            << "\" ry=\"" << fmt(axis_radius(e, ax.v) * scale) << "\" fill=\"none\" stroke=\""
            << o.color << "\" stroke-width=\"2\"/>\n";
    }

    // Legend (top-left), one row per overlay plus the union outline.
    int row = 0;
    auto legend = [&](const std::string& color, const std::string& label) {
        int y = 20 + 18 * row++;
        svg << "<line x1=\"12\" y1=\"" << y << "\" x2=\"36\" y2=\"" << y << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"42\" y=\"" << y + 4 << "\" font-family=\"monospace\" font-size=\"13\">"
            << label << "</text>\n";
    };
    if (!cloud.empty()) legend("#999999", "union outline");
    for (const auto& o : overlays) legend(o.color, o.label);

    // Axis labels.
    std::string hn = "x" + std::to_string(ax.h + 1), vn = "x" + std::to_string(ax.v + 1);
    svg << "<text x=\"" << size_px - 28 << "\" y=\"" << size_px - 10
        << "\" font-family=\"monospace\" font-size=\"13\">" << hn << "</text>\n";
    svg << "<text x=\"10\" y=\"" << size_px - 10 << "\" font-family=\"monospace\" font-size=\"13\">"
        << vn << "</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace polybound
