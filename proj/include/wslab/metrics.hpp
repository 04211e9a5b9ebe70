#pragma once

#include "wslab/geometry.hpp"
#include "wslab/grid.hpp"
#include "wslab/report.hpp"

namespace wslab {

struct PathEstimate {
    Polyline vertices;
    double value = 0.0;
    double alpha = 0.0;
    std::string kind; // "grid" or "exact"
};

// Integral of delta^(alpha-1) arclength along the polyline, by adaptive
// Simpson quadrature per segment (relative tolerance rel_tol). alpha = 1
// degenerates to plain arclength. Throws PathExitsDomain when a vertex
// leaves the domain or a segment crosses a wall or slit.
double len_alpha_polyline(const PlanarDomain& dom, const Polyline& path,
                          double alpha, double rel_tol = 1e-8);

// Shortest-path distances from src with edge weight len*(w[u]+w[v])/2.
// Unreachable nodes get +inf. Stops early once target pops (pass npos to
// compute the full field). parent (if given) allows path reconstruction.
std::vector<double> dijkstra_field(const GridGraph& g, uint32_t src,
                                   const std::vector<double>& node_w,
                                   uint32_t target = GridGraph::npos,
                                   std::vector<uint32_t>* parent = nullptr);

// per-node delta^(alpha-1)
std::vector<double> alpha_node_weights(const GridGraph& g, double alpha);

// Grid approximation of the alpha-metric between x and y. Endpoints snap to
// the nearest node (within 2h); the result is exactly symmetric in x,y.
// Throws SnapFailed / Disconnected.
PathEstimate d_alpha_grid(const GridGraph& g, Point2 x, Point2 y, double alpha);

// Least total length inside the region (union of disjoint polygons) over
// grid paths from x to y. Zero means some path dodges the region entirely.
double min_crossing_length(const GridGraph& g, const std::vector<Polygon>& region,
                           Point2 x, Point2 y);
double min_crossing_length(const GridGraph& g, const Polygon& region, Point2 x,
                           Point2 y);

// Bounded-turning and cigar conditions for a concrete path, plus the length
// bound they imply: at alpha = 0 the path's quasihyperbolic length must stay
// under 4C^2 log(1 + d/(delta_x ^ delta_y)) once both conditions hold; for
// alpha > 0 only the fitted constant is reported.
CheckReport check_uniform_path(const PlanarDomain& dom, const Polyline& path,
                               double C, double alpha);

} // namespace wslab
