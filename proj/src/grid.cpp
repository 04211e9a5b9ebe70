#include "wslab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#ifdef WSLAB_HAVE_OPENMP
#include <omp.h>
#endif

namespace wslab {

const std::vector<std::pair<int, int>>& forward_offsets() {
    static const std::vector<std::pair<int, int>> offs = {
        {1, 0}, {0, 1}, {1, 1}, {1, -1}, {2, 1}, {2, -1}, {1, 2}, {1, -2}};
    return offs;
}

double auto_h(const PlanarDomain& dom, const Bbox& window) {
    double w = std::numeric_limits<double>::infinity();
    for (const auto& d : dom.landmarks.decorations)
        if (d.box.intersects(window)) w = std::min(w, d.min_width);
    if (std::isfinite(w)) return w / 8.0;
    return std::min(window.x1 - window.x0, window.y1 - window.y0) / 64.0;
}

// y-intervals of the vertical line x = x0 inside the union of the polygons
static std::vector<std::pair<double, double>> line_intervals(
    const std::vector<Polygon>& polys, double x) {
    std::vector<std::pair<double, double>> iv;
    std::vector<double> cr;
    for (const auto& poly : polys) {
        cr.clear();
        size_t n = poly.size();
        for (size_t i = 0; i < n; ++i) {
            Point2 a = poly[i], b = poly[(i + 1) % n];
            if ((a.x > x) != (b.x > x))
                cr.push_back(a.y + (x - a.x) * (b.y - a.y) / (b.x - a.x));
        }
        std::sort(cr.begin(), cr.end());
        for (size_t i = 0; i + 1 < cr.size(); i += 2)
            iv.emplace_back(cr[i], cr[i + 1]);
    }
    std::sort(iv.begin(), iv.end());
    std::vector<std::pair<double, double>> merged;
    for (const auto& p : iv) {
        if (!merged.empty() && p.first <= merged.back().second)
            merged.back().second = std::max(merged.back().second, p.second);
        else
            merged.push_back(p);
    }
    return merged;
}

static bool in_intervals_open(const std::vector<std::pair<double, double>>& iv, double y) {
    for (const auto& p : iv) {
        if (y <= p.first) return false;
        if (y < p.second) return true;
    }
    return false;
}

static bool in_intervals_closed(const std::vector<std::pair<double, double>>& iv, double y) {
    for (const auto& p : iv) {
        if (y < p.first) return false;
        if (y <= p.second) return true;
    }
    return false;
}

// Refuse meshes that cannot resolve a corridor running through the window.
static void check_resolution(const PlanarDomain& dom, const Bbox& window, double h) {
    for (const auto& d : dom.landmarks.decorations) {
        if (!d.box.intersects(window)) continue;
        for (const auto& ml : d.midline) {
            for (size_t i = 0; i + 1 < ml.size(); ++i) {
                double xlo = std::max(ml[i].x, window.x0);
                double xhi = std::min(ml[i + 1].x, window.x1);
                if (xlo > xhi) continue;
                for (double xx : {xlo, xhi}) {
                    double t = (ml[i + 1].x == ml[i].x)
                                   ? 0.0
                                   : (xx - ml[i].x) / (ml[i + 1].x - ml[i].x);
                    double yy = ml[i].y + t * (ml[i + 1].y - ml[i].y);
                    if (xx <= window.x0 || xx >= window.x1 || yy <= window.y0 ||
                        yy >= window.y1)
                        continue;
                    double w = d.width_at(xx);
                    if (h > w / 6.0) {
                        char buf[200];
                        std::snprintf(buf, sizeof buf,
                                      "mesh h=%g too coarse for corridor of width %g "
                                      "(decoration j=%d); need h <= width/6",
                                      h, w, d.j);
                        throw ResolutionTooCoarse(buf);
                    }
                }
            }
        }
    }
}

static void check_midline_connectivity(const PlanarDomain& dom, const GridGraph& g) {
    for (const auto& d : dom.landmarks.decorations) {
        if (!d.box.intersects(g.window)) continue;
        for (const auto& ml : d.midline) {
            const Point2 *first = nullptr, *last = nullptr;
            for (const auto& p : ml) {
                if (p.x < g.window.x0 + 2.0 * g.h || p.x > g.window.x1 - 2.0 * g.h ||
                    p.y < g.window.y0 + 2.0 * g.h || p.y > g.window.y1 - 2.0 * g.h)
                    continue;
                if (!first) first = &p;
                last = &p;
            }
            if (!first || first == last) continue;
            uint32_t u, v;
            try {
                u = snap_node(g, *first);
                v = snap_node(g, *last);
            } catch (const SnapFailed&) {
                throw ResolutionTooCoarse("corridor midline has no nearby grid node; mesh too coarse");
            }
            if (g.comp[u] != g.comp[v])
                throw ResolutionTooCoarse("corridor midline disconnected on the grid; mesh too coarse");
        }
    }
}

GridGraph build_grid(const PlanarDomain& dom, const Bbox& window, double h,
                     ExecMode mode) {
    if (!(h > 0.0)) throw SpecInvalid("mesh width must be positive");
    if (!(window.x1 > window.x0 && window.y1 > window.y0))
        throw SpecInvalid("grid window is empty");
    check_resolution(dom, window, h);

    GridGraph g;
    g.window = window;
    g.h = h;

    int nx = static_cast<int>(std::floor((window.x1 - window.x0) / h + 1e-9));
    int ny = static_cast<int>(std::floor((window.y1 - window.y0) / h + 1e-9));

    auto column_nodes = [&](int ix, std::vector<GridNode>& out) {
        double x = window.x0 + ix * h;
        auto oiv = line_intervals(dom.outer, x);
        if (oiv.empty()) return;
        auto hiv = line_intervals(dom.holes, x);
        for (int iy = 0; iy <= ny; ++iy) {
            double y = window.y0 + iy * h;
            if (!in_intervals_open(oiv, y)) continue;
            if (in_intervals_closed(hiv, y)) continue;
            double delta = boundary_distance_raw(dom, {x, y});
            if (delta >= 0.5 * h) out.push_back({ix, iy, x, y, delta});
        }
    };

    if (mode == ExecMode::Serial) {
        for (int ix = 0; ix <= nx; ++ix) column_nodes(ix, g.nodes);
    } else {
        std::vector<std::vector<GridNode>> per_col(static_cast<size_t>(nx) + 1);
#ifdef WSLAB_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic, 4)
#endif
        for (int ix = 0; ix <= nx; ++ix) column_nodes(ix, per_col[static_cast<size_t>(ix)]);
        for (auto& col : per_col)
            g.nodes.insert(g.nodes.end(), col.begin(), col.end());
    }
    if (g.nodes.empty()) throw EmptyGrid("no grid node in the window");

    g.index.reserve(g.nodes.size() * 2);
    for (uint32_t i = 0; i < g.nodes.size(); ++i)
        g.index.emplace((static_cast<uint64_t>(static_cast<uint32_t>(g.nodes[i].ix)) << 32) |
                            static_cast<uint32_t>(g.nodes[i].iy),
                        i);

    // bucket boundary segments by column so edge tests stay local
    std::vector<std::vector<uint32_t>> seg_bucket(static_cast<size_t>(nx) + 1);
    for (uint32_t s = 0; s < dom.segs.size(); ++s) {
        const Bbox& bb = dom.segs[s].box;
        int lo = std::max(0, static_cast<int>(std::floor((bb.x0 - window.x0) / h)) - 2);
        int hi = std::min(nx, static_cast<int>(std::ceil((bb.x1 - window.x0) / h)) + 2);
        for (int ix = lo; ix <= hi; ++ix)
            seg_bucket[static_cast<size_t>(ix)].push_back(s);
    }
    auto edge_blocked = [&](const GridNode& a, const GridNode& b) {
        Point2 pa{a.x, a.y}, pb{b.x, b.y};
        Bbox bb = bbox_of({pa, pb});
        for (uint32_t s : seg_bucket[static_cast<size_t>(std::min(a.ix, b.ix))]) {
            const BoundarySeg& seg = dom.segs[s];
            if (!bb.intersects(seg.box)) continue;
            if (segments_intersect(pa, pb, seg.a, seg.b)) return true;
        }
        return false;
    };

    const auto& offs = forward_offsets();
    uint32_t n = static_cast<uint32_t>(g.nodes.size());
    std::vector<uint32_t> fwd_to(n * 8, GridGraph::npos);
    std::vector<double> fwd_len(n * 8, 0.0);

    auto node_edges = [&](uint32_t i) {
        const GridNode& a = g.nodes[i];
        for (size_t k = 0; k < offs.size(); ++k) {
            uint32_t t = g.find_node(a.ix + offs[k].first, a.iy + offs[k].second);
            if (t == GridGraph::npos) continue;
            const GridNode& b = g.nodes[t];
            if (edge_blocked(a, b)) continue;
            fwd_to[i * 8 + k] = t;
            fwd_len[i * 8 + k] = dist({a.x, a.y}, {b.x, b.y});
        }
    };

    if (mode == ExecMode::Serial) {
        for (uint32_t i = 0; i < n; ++i) node_edges(i);
    } else {
#ifdef WSLAB_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic, 256)
#endif
        for (int64_t i = 0; i < static_cast<int64_t>(n); ++i)
            node_edges(static_cast<uint32_t>(i));
    }

    std::vector<uint32_t> deg(n, 0);
    for (uint32_t i = 0; i < n; ++i)
        for (size_t k = 0; k < 8; ++k)
            if (fwd_to[i * 8 + k] != GridGraph::npos) {
                ++deg[i];
                ++deg[fwd_to[i * 8 + k]];
            }
    g.adj_off.assign(n + 1, 0);
    for (uint32_t i = 0; i < n; ++i) g.adj_off[i + 1] = g.adj_off[i] + deg[i];
    g.adj_to.assign(g.adj_off[n], 0);
    g.adj_len.assign(g.adj_off[n], 0.0);
    std::vector<uint32_t> fill(n, 0);
    for (uint32_t i = 0; i < n; ++i)
        for (size_t k = 0; k < 8; ++k) {
            uint32_t t = fwd_to[i * 8 + k];
            if (t == GridGraph::npos) continue;
            double len = fwd_len[i * 8 + k];
            g.adj_to[g.adj_off[i] + fill[i]] = t;
            g.adj_len[g.adj_off[i] + fill[i]] = len;
            ++fill[i];
            g.adj_to[g.adj_off[t] + fill[t]] = i;
            g.adj_len[g.adj_off[t] + fill[t]] = len;
            ++fill[t];
        }

    g.comp.assign(n, -1);
    g.n_comp = 0;
    std::vector<uint32_t> stack;
    for (uint32_t s = 0; s < n; ++s) {
        if (g.comp[s] >= 0) continue;
        int c = g.n_comp++;
        stack.assign(1, s);
        g.comp[s] = c;
        while (!stack.empty()) {
            uint32_t u = stack.back();
            stack.pop_back();
            for (uint32_t e = g.adj_off[u]; e < g.adj_off[u + 1]; ++e)
                if (g.comp[g.adj_to[e]] < 0) {
                    g.comp[g.adj_to[e]] = c;
                    stack.push_back(g.adj_to[e]);
                }
        }
    }

    check_midline_connectivity(dom, g);
    return g;
}

uint32_t snap_node(const GridGraph& g, Point2 p) {
    double h = g.h;
    int cx = static_cast<int>(std::floor((p.x - g.window.x0) / h));
    int cy = static_cast<int>(std::floor((p.y - g.window.y0) / h));
    uint32_t best = GridGraph::npos;
    double best_d = 0.0;
    for (int ix = cx - 2; ix <= cx + 3; ++ix)
        for (int iy = cy - 2; iy <= cy + 3; ++iy) {
            uint32_t t = g.find_node(ix, iy);
            if (t == GridGraph::npos) continue;
            const GridNode& nd = g.nodes[t];
            double d = dist({nd.x, nd.y}, p);
            if (d > 2.0 * h) continue;
            if (best == GridGraph::npos || d < best_d ||
                (d == best_d &&
                 lex_less({nd.x, nd.y}, {g.nodes[best].x, g.nodes[best].y}))) {
                best = t;
                best_d = d;
            }
        }
    if (best == GridGraph::npos) {
        char buf[120];
        std::snprintf(buf, sizeof buf, "no grid node within 2h of (%.17g, %.17g)", p.x, p.y);
        throw SnapFailed(buf);
    }
    return best;
}

} // namespace wslab
