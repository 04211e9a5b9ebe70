#include "wslab/decorations.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace wslab {

double ScaleRule::eval(int j) const {
    return c * (times_j ? static_cast<double>(j) : 1.0) * std::exp2(-exp * j);
}

std::string family_tag(Family f) {
    switch (f) {
        case Family::Ex32: return "ex32";
        case Family::Thm43ThinShort: return "thm43";
        case Family::Thm43FatLong: return "ex44";
        case Family::Ex45: return "ex45";
        case Family::Ex46: return "ex46";
    }
    throw SpecInvalid("unknown family enum");
}

Family family_from_tag(const std::string& tag) {
    if (tag == "ex32") return Family::Ex32;
    if (tag == "thm43") return Family::Thm43ThinShort;
    if (tag == "ex44") return Family::Thm43FatLong;
    if (tag == "ex45") return Family::Ex45;
    if (tag == "ex46") return Family::Ex46;
    throw SpecInvalid("unknown family tag '" + tag + "'");
}

static void check_allowable_pair(double p, double q, const char* which,
                                 bool need_p_ge2, bool need_q_ge2) {
    char buf[160];
    if (!(p > 0.0 && p <= q - 2.0)) {
        std::snprintf(buf, sizeof buf, "%s exponents not allowable: need 0 < p <= q-2, got p=%g q=%g", which, p, q);
        throw SpecInvalid(buf);
    }
    if (need_p_ge2 && !(p >= 2.0)) {
        std::snprintf(buf, sizeof buf, "%s exponents not allowable: need p >= 2, got p=%g", which, p);
        throw SpecInvalid(buf);
    }
    if (need_q_ge2 && !(q >= 2.0)) {
        std::snprintf(buf, sizeof buf, "%s exponents not allowable: need q >= 2, got q=%g", which, q);
        throw SpecInvalid(buf);
    }
}

ExponentProfile exponent_profile(const DonorParams& d) {
    ExponentProfile ep;
    if (d.family == Family::Ex32) {
        // fixed shape: R_j = 4^{-j-1}, r_j = 8^{-j-1}; one approach layer of
        // the same dimensions as the bent part
        ep.diag = {{2.0, 0.25, false}, {3.0, 0.125, false}};
        ep.layers = {ep.diag};
        return ep;
    }
    if (!(d.alpha0 > 0.0 && d.alpha0 < 1.0))
        throw SpecInvalid("alpha0 must lie in (0,1)");
    check_allowable_pair(d.p, d.q, "base", true, false);
    ep.diag = {{d.p, 1.0, false}, {d.q, 1.0, false}};
    switch (d.family) {
        case Family::Thm43ThinShort:
            ep.layers = {{{d.p + 1.0 - d.alpha0, 1.0, false},
                          {d.q + 1.0, 1.0, false}}};
            break;
        case Family::Ex45:
            ep.diag.r.times_j = true;
            ep.layers = {{{d.p + 1.0 - d.alpha0, 1.0, false},
                          {d.q + 1.0, 1.0, false}}};
            break;
        case Family::Thm43FatLong:
            ep.layers = {{{d.p - 1.0 + d.alpha0, 1.0, false},
                          {d.q - 1.0, 1.0, false}}};
            break;
        case Family::Ex46:
            if (!(d.alpha1 > d.alpha0 && d.alpha1 < 1.0))
                throw SpecInvalid("ex46 needs alpha0 < alpha1 < 1");
            ep.layers = {{{d.p + 1.0 - d.alpha0, 1.0, false},
                          {d.q + 1.0, 1.0, false}},
                         {{d.p - 1.0 + d.alpha1, 1.0, false},
                          {d.q - 1.0, 1.0, false}}};
            break;
        default:
            throw SpecInvalid("unhandled family");
    }
    for (const auto& l : ep.layers)
        check_allowable_pair(l.R.exp, l.r.exp, "layer", false, true);
    return ep;
}

// ------------------------------------------------------------------

static std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string spec_canonical_echo(const DecoratedSquareSpec& spec) {
    std::string s = "mode=";
    switch (spec.mode) {
        case CombineMode::Single: s += "single"; break;
        case CombineMode::Union: s += "union"; break;
        case CombineMode::Intersection: s += "intersection"; break;
    }
    s += ";j=" + std::to_string(spec.j_min) + ".." + std::to_string(spec.j_max);
    s += ";donors=[";
    for (size_t i = 0; i < spec.donors.size(); ++i) {
        const auto& d = spec.donors[i];
        if (i) s += ",";
        s += family_tag(d.family);
        if (d.family != Family::Ex32) {
            s += "(a0=" + fmt_g(d.alpha0);
            if (d.family == Family::Ex46) s += ",a1=" + fmt_g(d.alpha1);
            s += ",p=" + fmt_g(d.p) + ",q=" + fmt_g(d.q) + ")";
        }
    }
    s += "];a=";
    if (spec.a_list.empty()) {
        s += "default";
    } else {
        for (size_t i = 0; i < spec.a_list.size(); ++i)
            s += (i ? "," : "") + fmt_g(spec.a_list[i]);
    }
    return s;
}

DecoratedSquareSpec single_spec(Family f, double alpha0, int j_min, int j_max,
                                double p, double q) {
    DecoratedSquareSpec spec;
    DonorParams d;
    d.family = f;
    d.alpha0 = alpha0;
    d.p = p;
    d.q = q;
    spec.donors = {d};
    spec.mode = CombineMode::Single;
    spec.j_min = j_min;
    spec.j_max = j_max;
    return spec;
}

std::vector<DecorationDims> resolve_dims(const DecoratedSquareSpec& spec) {
    if (spec.donors.empty()) throw SpecInvalid("spec has no donors");
    if (spec.j_min < 1 || spec.j_min > spec.j_max)
        throw SpecInvalid("need 1 <= j_min <= j_max");
    if (spec.mode == CombineMode::Single && spec.donors.size() != 1)
        throw SpecInvalid("single mode takes exactly one donor");
    size_t nj = static_cast<size_t>(spec.j_max - spec.j_min + 1);
    size_t slots = spec.mode == CombineMode::Intersection
                       ? nj * spec.donors.size()
                       : nj;
    if (!spec.a_list.empty() && spec.a_list.size() != slots)
        throw SpecInvalid("a_list must have one entry per decoration slot");

    std::vector<ExponentProfile> profiles;
    for (const auto& d : spec.donors) profiles.push_back(exponent_profile(d));

    auto slot_a = [&](int j) {
        return spec.a_list.empty() ? std::exp2(-j)
                                   : spec.a_list[static_cast<size_t>(j - spec.j_min)];
    };

    std::vector<DecorationDims> out;
    for (int j = spec.j_min; j <= spec.j_max; ++j) {
        if (spec.mode == CombineMode::Union) {
            // donors must agree on the bent part; their approach layers pool
            // into one decoration
            for (size_t k = 1; k < profiles.size(); ++k) {
                const ScaleRule &R0 = profiles[0].diag.R, &Rk = profiles[k].diag.R;
                const ScaleRule &r0 = profiles[0].diag.r, &rk = profiles[k].diag.r;
                if (R0.exp != Rk.exp || R0.c != Rk.c || R0.times_j != Rk.times_j ||
                    r0.exp != rk.exp || r0.c != rk.c || r0.times_j != rk.times_j)
                    throw SpecInvalid("union donors must share the diagonal part");
            }
            DecorationDims dd;
            dd.j = j;
            dd.a = slot_a(j);
            dd.diagonal = {profiles[0].diag.R.eval(j), profiles[0].diag.r.eval(j)};
            for (const auto& prof : profiles)
                for (const auto& l : prof.layers)
                    dd.layers.push_back({l.R.eval(j), l.r.eval(j)});
            // innermost first = shortest extent first; exact duplicates merge
            std::sort(dd.layers.begin(), dd.layers.end(),
                      [](const LayerDims& a, const LayerDims& b) { return a.R < b.R; });
            dd.layers.erase(std::unique(dd.layers.begin(), dd.layers.end(),
                                        [](const LayerDims& a, const LayerDims& b) {
                                            return a.R == b.R && a.r == b.r;
                                        }),
                            dd.layers.end());
            for (size_t i = 0; i + 1 < dd.layers.size(); ++i)
                if (dd.layers[i].R == dd.layers[i + 1].R)
                    throw SpecInvalid("union layers must have strictly nested extents");
            out.push_back(std::move(dd));
        } else {
            size_t nd = spec.donors.size();
            for (size_t d = 0; d < nd; ++d) {
                DecorationDims dd;
                if (spec.mode == CombineMode::Single) {
                    dd.j = j;
                    dd.a = slot_a(j);
                } else {
                    // intersection realizes the donor sequence round-robin:
                    // consecutive sequence slots cycle through the donors
                    // while the donor-local index advances
                    int seq = (j - spec.j_min) * static_cast<int>(nd) +
                              static_cast<int>(d) + 1;
                    dd.j = seq;
                    dd.a = spec.a_list.empty()
                               ? std::exp2(-seq)
                               : spec.a_list[static_cast<size_t>(seq - 1)];
                }
                dd.diagonal = {profiles[d].diag.R.eval(j), profiles[d].diag.r.eval(j)};
                for (const auto& l : profiles[d].layers)
                    dd.layers.push_back({l.R.eval(j), l.r.eval(j)});
                out.push_back(std::move(dd));
            }
        }
    }

    for (const auto& dd : out) {
        char buf[200];
        if (!(dd.diagonal.R >= 4.0 * dd.diagonal.r)) {
            std::snprintf(buf, sizeof buf, "decoration j=%d: need R >= 4r on the bent part (R=%g, r=%g)",
                          dd.j, dd.diagonal.R, dd.diagonal.r);
            throw SpecInvalid(buf);
        }
        for (const auto& l : dd.layers) {
            if (!(l.R >= 3.0 * l.r)) {
                std::snprintf(buf, sizeof buf, "decoration j=%d: layer too short for its width (R=%g, r=%g)",
                              dd.j, l.R, l.r);
                throw SpecInvalid(buf);
            }
        }
        double narrowest = dd.diagonal.r;
        for (const auto& l : dd.layers) narrowest = std::min(narrowest, l.r);
        if (narrowest < 1e-300)
            throw SpecInvalid("corridor width underflows double precision");
    }
    return out;
}

// ------------------------------------------------------------------
// Profile construction. Regions run outermost rectangular layer first, then
// inward, ending with the left half of the bent part; the right half is the
// mirror image about the apex. Where two adjacent regions have different
// widths, the boundary curves interpolate linearly across a pinch of
// horizontal extent max(width) placed on the wider region's side.

namespace {

struct Region {
    double len = 0.0;
    double w = 0.0;
    bool diag = false;
};

struct StationList {
    std::vector<ProfileStation> st;
    void push(double x, double wall, double mid, double tent) {
        if (!st.empty()) {
            if (x == st.back().x) {
                if (wall == st.back().wall && mid == st.back().mid && tent == st.back().tent)
                    return; // harmless duplicate
                throw SpecInvalid("decoration regions too short for their pinches");
            }
            if (x < st.back().x)
                throw SpecInvalid("decoration regions too short for their pinches");
        }
        st.push_back({x, wall, mid, tent});
    }
};

} // namespace

static DecorationLandmarks build_one(const DecorationDims& dd,
                                     const std::string& family_label,
                                     Polygon* diamond_out) {
    std::vector<Region> regions;
    for (auto it = dd.layers.rbegin(); it != dd.layers.rend(); ++it)
        regions.push_back({it->R, it->r, false});
    regions.push_back({dd.diagonal.R, dd.diagonal.r, true});

    double a = dd.a;
    double Rd = dd.diagonal.R;
    double rd = dd.diagonal.r;
    double w0 = regions.front().w;

    StationList sl;
    sl.push(1.0, 2.0 * w0, w0, 0.0);
    double x = 1.0;
    for (size_t i = 0; i + 1 < regions.size(); ++i) {
        double xj = x + regions[i].len;
        double wA = regions[i].w, wB = regions[i + 1].w;
        if (wA == wB) {
            sl.push(xj, 2.0 * wA, wA, 0.0);
        } else if (wA > wB) {
            sl.push(xj - wA, 2.0 * wA, wA, 0.0);
            sl.push(xj, 2.0 * wB, wB, 0.0);
        } else {
            sl.push(xj, 2.0 * wA, wA, 0.0);
            if (regions[i + 1].diag)
                sl.push(xj + wB, wB + 2.0 * rd, wB + rd, wB);
            else
                sl.push(xj + wB, 2.0 * wB, wB, 0.0);
        }
        x = xj;
    }
    double apex = x + Rd;
    double diag_left = x;
    sl.push(apex, Rd + 2.0 * rd, Rd + rd, Rd);

    // mirror about the apex
    std::vector<ProfileStation> full = sl.st;
    for (auto it = sl.st.rbegin() + 1; it != sl.st.rend(); ++it)
        full.push_back({2.0 * apex - it->x, it->wall, it->mid, it->tent});
    double x_right = full.back().x;

    DecorationLandmarks lm;
    lm.j = dd.j;
    lm.family = family_label;
    lm.a = a;
    lm.x_left = 1.0;
    lm.x_right = x_right;
    lm.diagonal = dd.diagonal;
    lm.layers = dd.layers;
    lm.profile = full;

    if (diamond_out)
        *diamond_out = {{diag_left, a},
                        {apex, a + Rd},
                        {2.0 * apex - diag_left, a},
                        {apex, a - Rd}};

    // slits: straight one on y = a, bent one threading the corridors
    double lx = 1.0 + 2.0 * w0;
    if (!(lx < diag_left))
        throw SpecInvalid("outermost layer too short to seat the straight slit");
    lm.slit_L = {{lx, a}, {x_right, a}};

    double xu_l = 1.0 + w0;
    double xu_r = x_right - w0;
    Polyline u;
    auto push_u = [&u](Point2 p) {
        if (u.empty() || !(u.back() == p)) u.push_back(p);
    };
    push_u({xu_r, lm.mid_up(xu_r)});
    for (auto it = full.rbegin(); it != full.rend(); ++it)
        if (it->x > xu_l && it->x < xu_r) push_u({it->x, a + it->mid});
    push_u({xu_l, a + w0});
    push_u({xu_l, a - w0});
    for (const auto& s : full)
        if (s.x > xu_l && s.x < xu_r) push_u({s.x, a - s.mid});
    push_u({xu_r, 2.0 * a - lm.mid_up(xu_r)});
    lm.slit_U = u;

    // Corridor midlines. Corridors 1 and 4 run from the mouth; 2 and 3 are
    // sealed on the left by the bent slit's connector, so their midlines
    // start half a width past it. All stop half a width short of the right
    // wall.
    double x_hi = x_right - 0.5 * w0;
    auto build_mid = [&](double xs, double xe, int corridor) {
        Polyline ml;
        auto put = [&](double x) {
            double yw = lm.wall_up(x), ym = lm.mid_up(x), yt = lm.tent_up(x);
            double y = (corridor == 4 || corridor == 1) ? 0.5 * (yw + ym)
                                                        : 0.5 * (ym + yt);
            if (corridor <= 2) y = 2.0 * a - y;
            if (ml.empty() || !(ml.back() == Point2{x, y})) ml.push_back({x, y});
        };
        put(xs);
        for (const auto& s : full)
            if (s.x > xs && s.x < xe) put(s.x);
        put(xe);
        return ml;
    };
    lm.midline[3] = build_mid(1.0, x_hi, 4);
    lm.midline[2] = build_mid(xu_l + 0.5 * w0, x_hi, 3);
    lm.midline[1] = build_mid(xu_l + 0.5 * w0, x_hi, 2);
    lm.midline[0] = build_mid(1.0, x_hi, 1);

    lm.min_width = rd;
    for (const auto& l : dd.layers) lm.min_width = std::min(lm.min_width, l.r);

    double maxw = 0.0;
    for (const auto& s : full) maxw = std::max(maxw, s.wall);
    lm.box = {1.0, a - maxw, x_right, a + maxw};
    return lm;
}

PlanarDomain build_domain(const DecoratedSquareSpec& spec) {
    std::vector<DecorationDims> dims = resolve_dims(spec);

    std::string label;
    if (spec.mode == CombineMode::Union && spec.donors.size() > 1)
        label = "union";

    PlanarDomain dom;
    for (size_t i = 0; i < dims.size(); ++i) {
        std::string fl = label;
        if (fl.empty()) {
            size_t donor = (spec.mode == CombineMode::Intersection)
                               ? i % spec.donors.size()
                               : 0;
            fl = family_tag(spec.donors[donor].family);
        }
        Polygon diamond;
        DecorationLandmarks lm = build_one(dims[i], fl, &diamond);
        dom.landmarks.decorations.push_back(std::move(lm));
        dom.holes.push_back(std::move(diamond));
    }

    // vertical fit: mouth bands must be disjoint and inside the square's side
    std::vector<const DecorationLandmarks*> order;
    for (const auto& d : dom.landmarks.decorations) order.push_back(&d);
    std::sort(order.begin(), order.end(),
              [](const DecorationLandmarks* u, const DecorationLandmarks* v) {
                  return u->a < v->a;
              });
    for (size_t i = 0; i < order.size(); ++i) {
        const auto* d = order[i];
        if (!(d->box.y0 > 0.0 && d->box.y1 < 1.0))
            throw SpecInvalid("decoration j=" + std::to_string(d->j) +
                              " does not fit inside the square's side");
        if (i + 1 < order.size() && !(d->box.y1 < order[i + 1]->box.y0))
            throw SpecInvalid("decorations j=" + std::to_string(d->j) + " and j=" +
                              std::to_string(order[i + 1]->j) + " overlap");
    }

    Polygon outer;
    outer.push_back({0.0, 0.0});
    outer.push_back({1.0, 0.0});
    for (const auto* d : order) {
        const auto& pf = d->profile;
        outer.push_back({1.0, d->a - pf.front().wall});
        for (size_t i = 1; i < pf.size(); ++i)
            outer.push_back({pf[i].x, d->a - pf[i].wall});
        for (size_t i = pf.size(); i-- > 0;)
            outer.push_back({pf[i].x, d->a + pf[i].wall});
    }
    outer.push_back({1.0, 1.0});
    outer.push_back({0.0, 1.0});
    dom.outer = {std::move(outer)};

    for (const auto& d : dom.landmarks.decorations) {
        dom.slits.push_back(d.slit_L);
        dom.slits.push_back(d.slit_U);
    }
    dom.landmarks.spec_echo = spec_canonical_echo(spec);
    dom.finalize();

    // connectivity sanity: every corridor midline must lie in the open domain
    for (const auto& d : dom.landmarks.decorations)
        for (const auto& ml : d.midline) {
            for (const auto& p : ml)
                if (!contains(dom, p))
                    throw SpecInvalid("internal: corridor midline leaves the domain");
            for (size_t i = 0; i + 1 < ml.size(); ++i)
                if (segment_blocked(dom, ml[i], ml[i + 1]))
                    throw SpecInvalid("internal: corridor midline blocked");
        }
    return dom;
}

} // namespace wslab
