#include "wslab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wslab {

int orient(Point2 a, Point2 b, Point2 c) {
    double v = cross(b - a, c - a);
    if (v > 0.0) return 1;
    if (v < 0.0) return -1;
    return 0;
}

bool on_segment(Point2 a, Point2 b, Point2 p) {
    if (orient(a, b, p) != 0) return false;
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

bool segments_intersect(Point2 p1, Point2 p2, Point2 q1, Point2 q2) {
    int o1 = orient(p1, p2, q1);
    int o2 = orient(p1, p2, q2);
    int o3 = orient(q1, q2, p1);
    int o4 = orient(q1, q2, p2);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(p1, p2, q1)) return true;
    if (o2 == 0 && on_segment(p1, p2, q2)) return true;
    if (o3 == 0 && on_segment(q1, q2, p1)) return true;
    if (o4 == 0 && on_segment(q1, q2, p2)) return true;
    return false;
}

double seg_point_dist(Point2 a, Point2 b, Point2 p) {
    Point2 ab = b - a;
    double len2 = dot(ab, ab);
    if (len2 == 0.0) return dist(a, p);
    double t = dot(p - a, ab) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return dist(a + t * ab, p);
}

double seg_seg_dist(Point2 a, Point2 b, Point2 c, Point2 d) {
    if (segments_intersect(a, b, c, d)) return 0.0;
    return std::min({seg_point_dist(a, b, c), seg_point_dist(a, b, d),
                     seg_point_dist(c, d, a), seg_point_dist(c, d, b)});
}

Bbox bbox_of(const std::vector<Point2>& pts) {
    Bbox bb{pts.front().x, pts.front().y, pts.front().x, pts.front().y};
    for (const auto& p : pts) bb.expand(p);
    return bb;
}

double polyline_length(const Polyline& pl) {
    double s = 0.0;
    for (size_t i = 1; i < pl.size(); ++i) s += dist(pl[i - 1], pl[i]);
    return s;
}

Point2 polyline_point_at(const Polyline& pl, double s) {
    if (pl.empty()) throw Error("polyline_point_at: empty polyline");
    if (s <= 0.0) return pl.front();
    for (size_t i = 1; i < pl.size(); ++i) {
        double l = dist(pl[i - 1], pl[i]);
        if (s <= l) {
            double t = (l == 0.0) ? 0.0 : s / l;
            return pl[i - 1] + t * (pl[i] - pl[i - 1]);
        }
        s -= l;
    }
    return pl.back();
}

double polygon_signed_area(const Polygon& poly) {
    double s = 0.0;
    for (size_t i = 0; i < poly.size(); ++i) {
        Point2 a = poly[i];
        Point2 b = poly[(i + 1) % poly.size()];
        s += cross(a, b);
    }
    return 0.5 * s;
}

bool polygon_is_simple(const Polygon& poly) {
    size_t n = poly.size();
    if (n < 3) return false;
    for (size_t i = 0; i < n; ++i) {
        Point2 a1 = poly[i], a2 = poly[(i + 1) % n];
        if (a1 == a2) return false;
        for (size_t k = i + 1; k < n; ++k) {
            Point2 b1 = poly[k], b2 = poly[(k + 1) % n];
            bool adjacent = (k == i + 1) || (i == 0 && k == n - 1);
            if (adjacent) {
                // shared vertex is fine; anything more means a spur or fold
                Point2 shared = (k == i + 1) ? a2 : a1;
                Point2 afree = (k == i + 1) ? a1 : a2;
                Point2 bfree = (k == i + 1) ? b2 : b1;
                if (orient(shared, afree, bfree) == 0 &&
                    dot(afree - shared, bfree - shared) > 0.0)
                    return false;
                continue;
            }
            if (segments_intersect(a1, a2, b1, b2)) return false;
        }
    }
    return true;
}

int point_in_polygon(const Polygon& poly, Point2 p) {
    size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        if (on_segment(poly[i], poly[(i + 1) % n], p)) return 0;
    }
    // even-odd with a half-open vertical rule; boundary already handled
    bool inside = false;
    for (size_t i = 0; i < n; ++i) {
        Point2 a = poly[i], b = poly[(i + 1) % n];
        if ((a.y > p.y) != (b.y > p.y)) {
            double xx = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (xx > p.x) inside = !inside;
        }
    }
    return inside ? 1 : -1;
}

double polygon_boundary_dist(const Polygon& poly, Point2 p) {
    double best = std::numeric_limits<double>::infinity();
    size_t n = poly.size();
    for (size_t i = 0; i < n; ++i)
        best = std::min(best, seg_point_dist(poly[i], poly[(i + 1) % n], p));
    return best;
}

double point_to_polygon_dist(const Polygon& poly, Point2 p) {
    if (point_in_polygon(poly, p) >= 0) return 0.0;
    return polygon_boundary_dist(poly, p);
}

double polygon_diameter(const Polygon& poly) {
    double best = 0.0;
    for (size_t i = 0; i < poly.size(); ++i)
        for (size_t k = i + 1; k < poly.size(); ++k)
            best = std::max(best, dist(poly[i], poly[k]));
    return best;
}

std::vector<std::pair<double, double>> segment_inside_intervals(
    const Polygon& poly, Point2 a, Point2 b) {
    Point2 ab = b - a;
    double len2 = dot(ab, ab);
    std::vector<double> cuts{0.0, 1.0};
    size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        Point2 e1 = poly[i], e2 = poly[(i + 1) % n];
        if (!segments_intersect(a, b, e1, e2)) continue;
        double d = cross(ab, e2 - e1);
        if (d != 0.0) {
            double t = cross(e1 - a, e2 - e1) / d;
            cuts.push_back(std::clamp(t, 0.0, 1.0));
        } else if (len2 > 0.0) {
            // collinear overlap: both edge endpoints projected onto [a,b]
            cuts.push_back(std::clamp(dot(e1 - a, ab) / len2, 0.0, 1.0));
            cuts.push_back(std::clamp(dot(e2 - a, ab) / len2, 0.0, 1.0));
        }
    }
    std::sort(cuts.begin(), cuts.end());
    std::vector<std::pair<double, double>> out;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        double t0 = cuts[i], t1 = cuts[i + 1];
        if (t1 - t0 <= 0.0) continue;
        Point2 mid = a + (0.5 * (t0 + t1)) * ab;
        if (point_in_polygon(poly, mid) >= 0) {
            if (!out.empty() && out.back().second == t0)
                out.back().second = t1;
            else
                out.emplace_back(t0, t1);
        }
    }
    return out;
}

// ------------------------------------------------------------------

static double interp_profile(const std::vector<ProfileStation>& st, double x,
                             double ProfileStation::*field) {
    if (st.empty()) throw Error("profile: no stations");
    if (x <= st.front().x) return st.front().*field;
    if (x >= st.back().x) return st.back().*field;
    size_t lo = 0, hi = st.size() - 1;
    while (hi - lo > 1) {
        size_t m = (lo + hi) / 2;
        (st[m].x <= x ? lo : hi) = m;
    }
    double t = (x - st[lo].x) / (st[hi].x - st[lo].x);
    return st[lo].*field + t * (st[hi].*field - st[lo].*field);
}

double DecorationLandmarks::wall_up(double x) const {
    return a + interp_profile(profile, x, &ProfileStation::wall);
}
double DecorationLandmarks::mid_up(double x) const {
    return a + interp_profile(profile, x, &ProfileStation::mid);
}
double DecorationLandmarks::tent_up(double x) const {
    return a + interp_profile(profile, x, &ProfileStation::tent);
}
double DecorationLandmarks::width_at(double x) const {
    return interp_profile(profile, x, &ProfileStation::wall) -
           interp_profile(profile, x, &ProfileStation::mid);
}

const DecorationLandmarks* Landmarks::find(int j) const {
    for (const auto& d : decorations)
        if (d.j == j) return &d;
    return nullptr;
}

// ------------------------------------------------------------------

static void validate_ring(const Polygon& poly, const char* what) {
    if (poly.size() < 3) throw SpecInvalid(std::string(what) + ": fewer than 3 vertices");
    for (size_t i = 0; i < poly.size(); ++i)
        if (poly[i] == poly[(i + 1) % poly.size()])
            throw SpecInvalid(std::string(what) + ": repeated consecutive vertex");
    if (polygon_signed_area(poly) == 0.0)
        throw SpecInvalid(std::string(what) + ": zero area");
    if (!polygon_is_simple(poly))
        throw SpecInvalid(std::string(what) + ": self-intersecting");
}

static void validate_slit(const Polyline& pl) {
    if (pl.size() < 2) throw SpecInvalid("slit: fewer than 2 vertices");
    for (size_t i = 0; i + 1 < pl.size(); ++i)
        if (pl[i] == pl[i + 1])
            throw SpecInvalid("slit: repeated consecutive vertex");
    for (size_t i = 0; i + 1 < pl.size(); ++i)
        for (size_t k = i + 2; k + 1 < pl.size(); ++k)
            if (segments_intersect(pl[i], pl[i + 1], pl[k], pl[k + 1]))
                throw SpecInvalid("slit: self-intersecting");
}

void PlanarDomain::finalize() {
    if (outer.empty()) throw SpecInvalid("domain: no outer polygon");
    for (const auto& poly : outer) validate_ring(poly, "outer polygon");
    for (const auto& poly : holes) validate_ring(poly, "hole");
    for (const auto& pl : slits) validate_slit(pl);

    segs.clear();
    auto add_ring = [&](const Polygon& poly) {
        for (size_t i = 0; i < poly.size(); ++i) {
            Point2 a = poly[i], b = poly[(i + 1) % poly.size()];
            segs.push_back({a, b, bbox_of({a, b})});
        }
    };
    for (const auto& poly : outer) add_ring(poly);
    for (const auto& poly : holes) add_ring(poly);
    for (const auto& pl : slits)
        for (size_t i = 0; i + 1 < pl.size(); ++i)
            segs.push_back({pl[i], pl[i + 1], bbox_of({pl[i], pl[i + 1]})});

    box = segs.front().box;
    for (const auto& s : segs) {
        box.expand(s.a);
        box.expand(s.b);
    }
}

PlanarDomain make_domain(std::vector<Polygon> outer, std::vector<Polygon> holes,
                         std::vector<Polyline> slits) {
    PlanarDomain dom;
    dom.outer = std::move(outer);
    dom.holes = std::move(holes);
    dom.slits = std::move(slits);
    dom.finalize();
    return dom;
}

bool contains(const PlanarDomain& dom, Point2 p) {
    bool in_outer = false;
    for (const auto& poly : dom.outer) {
        int side = point_in_polygon(poly, p);
        if (side == 0) return false;
        if (side > 0) { in_outer = true; break; }
    }
    if (!in_outer) return false;
    for (const auto& poly : dom.holes)
        if (point_in_polygon(poly, p) >= 0) return false;
    for (const auto& pl : dom.slits)
        for (size_t i = 0; i + 1 < pl.size(); ++i)
            if (on_segment(pl[i], pl[i + 1], p)) return false;
    return true;
}

double boundary_distance_raw(const PlanarDomain& dom, Point2 p) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : dom.segs) {
        if (s.box.dist(p) >= best) continue;
        best = std::min(best, seg_point_dist(s.a, s.b, p));
    }
    return best;
}

double distance_to_boundary(const PlanarDomain& dom, Point2 p) {
    if (!contains(dom, p)) throw PointOutsideDomain("distance_to_boundary: point not in domain");
    return boundary_distance_raw(dom, p);
}

bool segment_blocked(const PlanarDomain& dom, Point2 a, Point2 b) {
    Bbox bb = bbox_of({a, b});
    for (const auto& s : dom.segs) {
        if (!bb.intersects(s.box)) continue;
        if (segments_intersect(a, b, s.a, s.b)) return true;
    }
    return false;
}

const Polyline& corridor_midline(const PlanarDomain& dom, int j, int corridor) {
    const DecorationLandmarks* d = dom.landmarks.find(j);
    if (!d) throw NoSuchCorridor("no decoration with index " + std::to_string(j));
    if (corridor < 1 || corridor > 4)
        throw NoSuchCorridor("corridor id must be 1..4, got " + std::to_string(corridor));
    return d->midline[static_cast<size_t>(corridor - 1)];
}

} // namespace wslab
