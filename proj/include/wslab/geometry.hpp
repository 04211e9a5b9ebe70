#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wslab/errors.hpp"

namespace wslab {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
inline Point2 operator*(Point2 a, double s) { return {s * a.x, s * a.y}; }
inline bool operator==(Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }
inline bool operator!=(Point2 a, Point2 b) { return !(a == b); }
// lexicographic, used for canonical endpoint ordering and tie-breaks
inline bool lex_less(Point2 a, Point2 b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
}

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double dist(Point2 a, Point2 b) { return norm(a - b); }

// Sign of the cross product (b-a) x (c-a): +1 left turn, -1 right, 0 collinear.
int orient(Point2 a, Point2 b, Point2 c);

// p lies on the closed segment [a,b]
bool on_segment(Point2 a, Point2 b, Point2 p);

// closed segments [p1,p2] and [q1,q2] share at least one point
bool segments_intersect(Point2 p1, Point2 p2, Point2 q1, Point2 q2);

double seg_point_dist(Point2 a, Point2 b, Point2 p);
double seg_seg_dist(Point2 a, Point2 b, Point2 c, Point2 d);

struct Bbox {
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
    bool contains(Point2 p) const {
        return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1;
    }
    bool intersects(const Bbox& o) const {
        return x0 <= o.x1 && o.x0 <= x1 && y0 <= o.y1 && o.y0 <= y1;
    }
    // 0 when p is inside
    double dist(Point2 p) const {
        double dx = std::max({x0 - p.x, 0.0, p.x - x1});
        double dy = std::max({y0 - p.y, 0.0, p.y - y1});
        return std::hypot(dx, dy);
    }
    void expand(Point2 p) {
        x0 = std::min(x0, p.x); y0 = std::min(y0, p.y);
        x1 = std::max(x1, p.x); y1 = std::max(y1, p.y);
    }
};

// Vertex list; a Polygon is closed implicitly (last vertex joins the first),
// a Polyline is open. Consecutive vertices must be distinct.
using Polyline = std::vector<Point2>;
using Polygon = std::vector<Point2>;

Bbox bbox_of(const std::vector<Point2>& pts);
double polyline_length(const Polyline& pl);
Point2 polyline_point_at(const Polyline& pl, double s); // arclength param, clamped

double polygon_signed_area(const Polygon& poly);
bool polygon_is_simple(const Polygon& poly);
// +1 strict interior, 0 boundary, -1 outside
int point_in_polygon(const Polygon& poly, Point2 p);
// distance from p to the boundary of poly (edges), regardless of side
double polygon_boundary_dist(const Polygon& poly, Point2 p);
// 0 if p is inside or on poly, else distance to the boundary
double point_to_polygon_dist(const Polygon& poly, Point2 p);
// max distance between vertex pairs (diameter of the vertex set; equals the
// shape diameter for convex polygons and all our slice shapes)
double polygon_diameter(const Polygon& poly);

// Parameter intervals of the closed segment [a,b] (t in [0,1]) lying inside
// the closed polygon. Intervals are sorted, disjoint, merged.
std::vector<std::pair<double, double>> segment_inside_intervals(
    const Polygon& poly, Point2 a, Point2 b);

// ------------------------------------------------------------------
// Landmark data carried by decorated domains. Plain data here; the
// decorations module fills it in. Profile curves describe the upper half of
// one attachment: wall = outer boundary height, mid = the height of the bent
// interior slit branch, tent = the diamond/roof height. All three are offsets
// relative to the attachment line y = a and are piecewise linear in x between
// stations. The lower half is the mirror image across y = a.

struct LayerDims {
    double R = 0.0; // horizontal half-extent of the layer (per side)
    double r = 0.0; // corridor width within the layer
};

struct ProfileStation {
    double x = 0.0;
    double wall = 0.0;
    double mid = 0.0;
    double tent = 0.0;
};

struct DecorationLandmarks {
    int j = 0;
    std::string family; // construction tag, e.g. "ex32", "thm43"
    double a = 0.0;     // attachment height on the square's right side
    double x_left = 1.0;
    double x_right = 0.0;
    LayerDims diagonal;             // the bent (roof) part
    std::vector<LayerDims> layers;  // innermost first (adjacent to diagonal)
    std::vector<ProfileStation> profile; // increasing x, x_left..x_right
    Polyline slit_L; // straight slit on y = a
    Polyline slit_U; // bent slit: upper branch, left connector, lower branch
    std::array<Polyline, 4> midline; // corridors 1..4, bottom to top
    double min_width = 0.0;          // narrowest corridor width
    Bbox box;

    // interpolated profile heights (absolute y, upper half)
    double wall_up(double x) const;
    double mid_up(double x) const;
    double tent_up(double x) const;
    // corridor width at abscissa x (same for all four corridors)
    double width_at(double x) const;
};

struct Landmarks {
    std::vector<DecorationLandmarks> decorations;
    // echo of the construction parameters, serialized with the domain
    std::string spec_echo;
    const DecorationLandmarks* find(int j) const;
};

// ------------------------------------------------------------------
// A bounded planar domain: union of open interiors of the outer polygons,
// minus closed holes, minus slits. Slits are 1-dimensional and removed as
// point sets: every point of the domain keeps a positive distance to them.

struct BoundarySeg {
    Point2 a, b;
    Bbox box;
};

struct PlanarDomain {
    std::vector<Polygon> outer;
    std::vector<Polygon> holes;
    std::vector<Polyline> slits;
    Landmarks landmarks;

    // built by finalize()
    std::vector<BoundarySeg> segs;
    Bbox box;

    void finalize(); // validates polygon/polyline shape, caches segments
};

PlanarDomain make_domain(std::vector<Polygon> outer,
                         std::vector<Polygon> holes = {},
                         std::vector<Polyline> slits = {});

bool contains(const PlanarDomain& dom, Point2 p);

// min distance to any wall, hole edge, or slit segment; no containment check
double boundary_distance_raw(const PlanarDomain& dom, Point2 p);

// same, but requires p inside the domain; throws PointOutsideDomain
double distance_to_boundary(const PlanarDomain& dom, Point2 p);

// true when the open segment (a,b) meets a wall, hole edge, or slit.
// Endpoints are assumed to be interior points of the domain.
bool segment_blocked(const PlanarDomain& dom, Point2 a, Point2 b);

// corridor midline polyline for decoration j, corridor 1..4 (bottom to top);
// throws NoSuchCorridor
const Polyline& corridor_midline(const PlanarDomain& dom, int j, int corridor);

} // namespace wslab
