#ifndef POLYBOUND_SVG_HPP
#define POLYBOUND_SVG_HPP

#include "polybound/bounds.hpp"

#include <string>
#include <utility>
#include <vector>

namespace polybound {

// One labelled ellipse drawn on top of the union outline.
struct SvgOverlay {
    EllipsoidBound ellipsoid;
    std::string label;
    std::string color;  // CSS color
};

// Deterministic SVG of ellipsoid projections onto a coordinate plane
// ("x1x2", "x1x3" or "x2x3"): the boundary of the union of `cloud` as a grey
// region outline, plus each overlay as a colored ellipse with a legend entry.
// All coordinates are printed with two fixed decimals, so identical inputs
// yield byte-identical output. Throws std::invalid_argument when both the
// cloud and the overlays are empty.
std::string render_projection_svg(const std::vector<EllipsoidBound>& cloud,
                                  const std::vector<SvgOverlay>& overlays,
                                  const std::string& plane, int resolution = 256,
                                  int size_px = 640);

}  // namespace polybound

#endif
