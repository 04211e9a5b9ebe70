#include "wslab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "wslab/errors.hpp"
#include "wslab/grid.hpp"
#include "wslab/metrics.hpp"

namespace wslab {

namespace {

constexpr double kIdentityTol = 1e-12; // exact log-space identity slack
constexpr double kBoundaryTol = 1e-9;  // sample-vs-interval-endpoint slack
constexpr double kMergeTol = 1e-12;    // interval endpoints treated as equal
constexpr double kBracketFactor = 8.0; // agreement factor at the hard pair
constexpr double kTrivialK = 20.0;     // pairs closer than this are skipped
constexpr double kDesignC = 10.0;      // the families are built for this constant
constexpr double kRigLog2Floor = -40.0; // narrowest buildable corridor width

const double kAbsent = std::numeric_limits<double>::quiet_NaN();

std::string fmt_num(double v) {
    char b[40];
    std::snprintf(b, sizeof b, "%g", v);
    return b;
}

std::string fmt_int(long long v) {
    char b[32];
    std::snprintf(b, sizeof b, "%lld", v);
    return b;
}

Verdict fold_checks(const std::vector<CheckReport>& checks) {
    Verdict out = Verdict::Pass;
    for (const auto& c : checks) {
        Verdict v = c.overall();
        if (v == Verdict::Fail) return Verdict::Fail;
        if (v == Verdict::Approx) out = Verdict::Approx;
    }
    return out;
}

double rule_log2(const ScaleRule& s, int j) {
    double lg = std::log2(s.c) - s.exp * j;
    if (s.times_j) lg += std::log2(static_cast<double>(j));
    return lg;
}

} // namespace

double exact_L_log2(int j, double alpha, double p, double q, bool times_j) {
    if (j < 1) throw SpecInvalid("exact_L: j must be >= 1");
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw SpecInvalid("exact_L: alpha must lie in [0,1]");
    if (!(p > 0.0 && q > 0.0))
        throw SpecInvalid("exact_L: exponents must be positive");
    double lg = j * (q * (1.0 - alpha) - p);
    if (times_j) lg -= (1.0 - alpha) * std::log2(static_cast<double>(j));
    return lg;
}

double exact_L(int j, double alpha, double p, double q, bool times_j) {
    return std::exp2(exact_L_log2(j, alpha, p, q, times_j));
}

// ------------------------------------------------------------------
// alpha-set calculus

namespace {

// Admissible alphas contributed by one approach layer measured against the
// bent part. The trip-cost ratio bent/layer scales like 2^{j*eps(alpha)}
// with eps(alpha) = dp - (1-alpha) dq, times j^{+-(1-alpha)} when exactly
// one of the two widths carries a j factor. The layer keeps dominating
// (ratio bounded in j) iff eps < 0, or eps = 0 and the j factor does not
// tip the ratio upward.
void append_layer_interval(std::vector<AlphaInterval>& out, double dp, double dq,
                           bool t_diag, bool t_layer) {
    bool tie_ok = t_diag || !t_layer;
    if (dq == 0.0) {
        if (dp < 0.0 || (dp == 0.0 && tie_ok))
            out.push_back({0.0, 1.0, true, false});
        return;
    }
    double astar = 1.0 - dp / dq;
    if (dq > 0.0) {
        // eps < 0 below astar
        if (astar >= 1.0) {
            out.push_back({0.0, 1.0, true, false});
        } else if (astar > 0.0 || (astar == 0.0 && tie_ok)) {
            out.push_back({0.0, astar, true, tie_ok});
        }
    } else {
        // eps < 0 above astar
        if (astar < 0.0 || (astar == 0.0 && tie_ok)) {
            out.push_back({0.0, 1.0, true, false});
        } else if (astar < 1.0) {
            out.push_back({astar, 1.0, tie_ok, false});
        }
    }
}

std::vector<AlphaInterval> normalize_set(std::vector<AlphaInterval> iv) {
    std::sort(iv.begin(), iv.end(),
              [](const AlphaInterval& a, const AlphaInterval& b) {
                  if (a.lo != b.lo) return a.lo < b.lo;
                  return a.lo_closed && !b.lo_closed;
              });
    std::vector<AlphaInterval> out;
    for (const auto& cur : iv) {
        if (!out.empty()) {
            AlphaInterval& prev = out.back();
            bool touches = cur.lo < prev.hi + kMergeTol &&
                           (cur.lo < prev.hi - kMergeTol || prev.hi_closed ||
                            cur.lo_closed);
            if (touches) {
                if (cur.hi > prev.hi + kMergeTol) {
                    prev.hi = cur.hi;
                    prev.hi_closed = cur.hi_closed;
                } else if (cur.hi > prev.hi - kMergeTol) {
                    prev.hi_closed = prev.hi_closed || cur.hi_closed;
                }
                continue;
            }
        }
        out.push_back(cur);
    }
    return out;
}

std::vector<AlphaInterval> intersect_sets(const std::vector<AlphaInterval>& a,
                                          const std::vector<AlphaInterval>& b) {
    std::vector<AlphaInterval> out;
    size_t i = 0, k = 0;
    while (i < a.size() && k < b.size()) {
        const AlphaInterval& x = a[i];
        const AlphaInterval& y = b[k];
        AlphaInterval r;
        if (x.lo > y.lo + kMergeTol) {
            r.lo = x.lo;
            r.lo_closed = x.lo_closed;
        } else if (y.lo > x.lo + kMergeTol) {
            r.lo = y.lo;
            r.lo_closed = y.lo_closed;
        } else {
            r.lo = std::max(x.lo, y.lo);
            r.lo_closed = x.lo_closed && y.lo_closed;
        }
        if (x.hi < y.hi - kMergeTol) {
            r.hi = x.hi;
            r.hi_closed = x.hi_closed;
        } else if (y.hi < x.hi - kMergeTol) {
            r.hi = y.hi;
            r.hi_closed = y.hi_closed;
        } else {
            r.hi = std::min(x.hi, y.hi);
            r.hi_closed = x.hi_closed && y.hi_closed;
        }
        if (r.lo < r.hi - kMergeTol ||
            (r.hi - r.lo <= kMergeTol && r.lo <= r.hi && r.lo_closed && r.hi_closed))
            out.push_back(r);
        if (x.hi < y.hi) ++i; else ++k;
    }
    return out;
}

std::string set_text(const std::vector<AlphaInterval>& s) {
    if (s.empty()) return "(empty)";
    std::string t;
    for (size_t i = 0; i < s.size(); ++i) {
        if (i) t += " u ";
        t += s[i].lo_closed ? "[" : "(";
        t += fmt_num(s[i].lo);
        t += ",";
        t += fmt_num(s[i].hi);
        t += s[i].hi_closed ? "]" : ")";
    }
    return t;
}

std::vector<AlphaInterval> donor_alpha_set(const DonorParams& d) {
    ExponentProfile ep = exponent_profile(d);
    std::vector<AlphaInterval> s;
    for (const auto& l : ep.layers)
        append_layer_interval(s, l.R.exp - ep.diag.R.exp, l.r.exp - ep.diag.r.exp,
                              ep.diag.r.times_j, l.r.times_j);
    return normalize_set(std::move(s));
}

// Worst per-layer exponent gap at one alpha: the best (most negative) layer
// per donor, then the worst donor under intersection, best under pooling.
double set_exponent(const DecoratedSquareSpec& spec, double alpha) {
    bool inter = spec.mode == CombineMode::Intersection;
    double acc = inter ? -std::numeric_limits<double>::infinity()
                       : std::numeric_limits<double>::infinity();
    for (const auto& d : spec.donors) {
        ExponentProfile ep = exponent_profile(d);
        double best = std::numeric_limits<double>::infinity();
        for (const auto& l : ep.layers) {
            double eps = (l.R.exp - ep.diag.R.exp) -
                         (1.0 - alpha) * (l.r.exp - ep.diag.r.exp);
            best = std::min(best, eps);
        }
        acc = inter ? std::max(acc, best) : std::min(acc, best);
    }
    return acc;
}

} // namespace

AlphaSetProbe alpha_set_probe(const DecoratedSquareSpec& spec,
                              const std::vector<double>& alphas) {
    if (spec.donors.empty())
        throw SpecInvalid("alpha_set_probe: spec has no donors");
    AlphaSetProbe probe;
    bool first = true;
    for (const auto& d : spec.donors) {
        std::vector<AlphaInterval> s = donor_alpha_set(d);
        if (first) {
            probe.set = std::move(s);
            first = false;
        } else if (spec.mode == CombineMode::Intersection) {
            probe.set = intersect_sets(probe.set, s);
        } else {
            probe.set.insert(probe.set.end(), s.begin(), s.end());
            probe.set = normalize_set(std::move(probe.set));
        }
    }
    probe.text = set_text(probe.set);
    probe.samples.reserve(alphas.size());
    for (double a : alphas) probe.samples.emplace_back(a, alpha_in_set(probe, a));
    return probe;
}

bool alpha_in_set(const AlphaSetProbe& probe, double alpha) {
    for (const auto& iv : probe.set) {
        bool lo_ok = alpha > iv.lo + kBoundaryTol ||
                     (alpha > iv.lo - kBoundaryTol && iv.lo_closed);
        bool hi_ok = alpha < iv.hi - kBoundaryTol ||
                     (alpha < iv.hi + kBoundaryTol && iv.hi_closed);
        if (lo_ok && hi_ok) return true;
    }
    return false;
}

DecoratedSquareSpec combine_specs(CombineMode mode,
                                  const std::vector<DecoratedSquareSpec>& specs) {
    if (mode == CombineMode::Single)
        throw SpecInvalid("combine_specs: mode must be union or intersection");
    if (specs.empty()) throw SpecInvalid("combine_specs: no inputs");
    if (specs.size() == 1) return specs.front();
    DecoratedSquareSpec out;
    out.mode = mode;
    out.j_min = specs.front().j_min;
    out.j_max = specs.front().j_max;
    for (const auto& s : specs) {
        if (s.donors.empty())
            throw SpecInvalid("combine_specs: input has no donors");
        if (s.mode != CombineMode::Single && s.mode != mode && s.donors.size() > 1)
            throw SpecInvalid("combine_specs: cannot nest mixed combine modes");
        if (s.j_min != out.j_min || s.j_max != out.j_max)
            throw SpecInvalid("combine_specs: inputs must share the j range");
        if (!s.a_list.empty())
            throw SpecInvalid(
                "combine_specs: explicit attachment heights are not combinable");
        out.donors.insert(out.donors.end(), s.donors.begin(), s.donors.end());
    }
    resolve_dims(out); // validates the pooled spec
    return out;
}

DecoratedSquareSpec combine_specs(const DecoratedSquareSpec& a,
                                  const DecoratedSquareSpec& b, CombineMode mode) {
    return combine_specs(mode, {a, b});
}

// ------------------------------------------------------------------
// hard-pair measurement rig
//
// The designed pair straddles the looped slit's upper arm inside the
// approach layer, so every route rounds the slit tip at the far right (the
// mirror route through the lower corridors costs the same). One grid at the
// layer resolution cannot cover the whole decoration at larger j, so the
// route is measured in three windows stitched at the wide side of each
// pinch: A (left layer), B (bent section), C (right layer and tip turn).

namespace {

double midline_height(const Polyline& ml, double x) {
    if (ml.size() < 2 || x < ml.front().x - 1e-12 || x > ml.back().x + 1e-12)
        throw SpecInvalid("midline query outside its range");
    for (size_t i = 0; i + 1 < ml.size(); ++i) {
        if (x <= ml[i + 1].x) {
            double run = ml[i + 1].x - ml[i].x;
            if (run <= 0.0) return ml[i + 1].y;
            double t = (x - ml[i].x) / run;
            return ml[i].y + t * (ml[i + 1].y - ml[i].y);
        }
    }
    return ml.back().y;
}

struct ObstructionRig {
    PlanarDomain dom;
    int j = 0;
    Point2 y, z;           // the designed pair: roof corridor over inner corridor
    Point2 a4, a3, b4, b3; // stitch anchors at the wide side of each pinch
    double hA = 0.0, hB = 0.0;
    GridGraph gA, gB, gC;
    bool grids = false;
    Polyline leg4, leg3; // midline route halves (roof corridor, inner corridor)
    Polyline route;      // concatenation, y .. tip turn .. z
};

const DecorationLandmarks& rig_marks(const ObstructionRig& rig) {
    return rig.dom.landmarks.decorations.front();
}

ObstructionRig build_rig(const DonorParams& donor, int j, bool with_grids) {
    DecoratedSquareSpec spec;
    spec.donors = {donor};
    spec.j_min = j;
    spec.j_max = j;
    ObstructionRig rig;
    rig.dom = build_domain(spec);
    rig.j = j;
    const DecorationLandmarks& lm = rig_marks(rig);
    if (lm.layers.size() != 1)
        throw SpecInvalid("hard-pair rig needs a one-layer decoration");
    double Rp = lm.layers[0].R, rp = lm.layers[0].r;
    double R = lm.diagonal.R, r = lm.diagonal.r;
    double a = lm.a;
    rig.y = {1.0 + 0.5 * Rp, a + 1.5 * rp};
    rig.z = {1.0 + 0.5 * Rp, a + 0.5 * rp};
    // anchors sit one bent-corridor width outside each pinch on its wider
    // side, where both adjoining windows resolve the local width
    double apex = 1.0 + Rp + R;
    double xa = r >= rp ? 1.0 + Rp + r : 1.0 + Rp - rp;
    double xb = 2.0 * apex - xa;
    const Polyline& mid4 = lm.midline[3];
    const Polyline& mid3 = lm.midline[2];
    rig.a4 = {xa, midline_height(mid4, xa)};
    rig.a3 = {xa, midline_height(mid3, xa)};
    rig.b4 = {xb, midline_height(mid4, xb)};
    rig.b3 = {xb, midline_height(mid3, xb)};
    rig.leg4.push_back(rig.y);
    for (const auto& p : mid4)
        if (p.x > rig.y.x) rig.leg4.push_back(p);
    for (auto it = mid3.rbegin(); it != mid3.rend(); ++it)
        if (it->x > rig.z.x) rig.leg3.push_back(*it);
    rig.leg3.push_back(rig.z);
    rig.route = rig.leg4;
    rig.route.insert(rig.route.end(), rig.leg3.begin(), rig.leg3.end());
    rig.hA = rp / 8.0;
    rig.hB = r / 8.0;
    if (with_grids) {
        double wall_a = lm.wall_up(xa) - a;
        for (const auto& s : lm.profile)
            if (s.x <= xa + 4.0 * rig.hA) wall_a = std::max(wall_a, s.wall);
        Bbox winA{1.0 - 8.0 * rig.hA, a - 2.0 * rig.hA, xa + 4.0 * rig.hA,
                  a + wall_a + 8.0 * rig.hA};
        Bbox winC{xb - 4.0 * rig.hA, a - 2.0 * rig.hA, lm.x_right + 4.0 * rig.hA,
                  a + wall_a + 8.0 * rig.hA};
        Bbox winB{xa - 4.0 * rig.hB, a - 2.0 * rig.hB, xb + 4.0 * rig.hB,
                  a + R + 2.0 * r + 8.0 * rig.hB};
        rig.gA = build_grid(rig.dom, winA, rig.hA);
        rig.gB = build_grid(rig.dom, winB, rig.hB);
        rig.gC = build_grid(rig.dom, winC, rig.hA);
        rig.grids = true;
    }
    return rig;
}

double composed_grid_d(const ObstructionRig& rig, double alpha) {
    double v = 0.0;
    v += d_alpha_grid(rig.gA, rig.y, rig.a4, alpha).value;
    v += d_alpha_grid(rig.gB, rig.a4, rig.b4, alpha).value;
    v += d_alpha_grid(rig.gC, rig.b4, rig.b3, alpha).value;
    v += d_alpha_grid(rig.gB, rig.b3, rig.a3, alpha).value;
    v += d_alpha_grid(rig.gA, rig.a3, rig.z, alpha).value;
    return v;
}

// Per-segment analytic bound along one midline leg: length times the worst
// weight on the segment. The clearance charge is half the smaller end
// width, reduced by the steeper of the two bounding profile curves, so it
// never exceeds the true clearance anywhere on the segment.
double charged_leg(const DecorationLandmarks& lm, const Polyline& leg,
                   int corridor, double alpha) {
    double total = 0.0;
    for (size_t i = 0; i + 1 < leg.size(); ++i) {
        double len = dist(leg[i], leg[i + 1]);
        if (len == 0.0) continue;
        double x0 = leg[i].x, x1 = leg[i + 1].x;
        double u0, u1, l0, l1;
        if (corridor == 4) {
            u0 = lm.wall_up(x0);
            u1 = lm.wall_up(x1);
            l0 = lm.mid_up(x0);
            l1 = lm.mid_up(x1);
        } else {
            u0 = lm.mid_up(x0);
            u1 = lm.mid_up(x1);
            l0 = lm.tent_up(x0);
            l1 = lm.tent_up(x1);
        }
        double minw = std::min(u0 - l0, u1 - l1);
        double dx = std::fabs(x1 - x0);
        double slope = 0.0;
        if (dx > 0.0)
            slope = std::max(std::fabs(u1 - u0), std::fabs(l1 - l0)) / dx;
        double clearance = 0.5 * minw / std::sqrt(1.0 + slope * slope);
        total += len * std::pow(clearance, alpha - 1.0);
    }
    return total;
}

double route_upper_bound(const ObstructionRig& rig, double alpha) {
    const DecorationLandmarks& lm = rig_marks(rig);
    double turn_w = lm.width_at(rig.leg4.back().x);
    double turn = dist(rig.leg4.back(), rig.leg3.front()) *
                  std::pow(0.5 * turn_w, alpha - 1.0);
    return charged_leg(lm, rig.leg4, 4, alpha) + turn +
           charged_leg(lm, rig.leg3, 3, alpha);
}

std::vector<double> right_slice_diams(const PlanarDomain& dom, int j) {
    CorridorSlices cs = make_corridor_slices(dom, j);
    std::vector<double> out;
    out.reserve(cs.right.size());
    for (const auto& s : cs.right) out.push_back(s.d_S);
    return out;
}

double diam_power_sum(const std::vector<double>& diams, double alpha) {
    double s = 0.0;
    for (double d : diams) s += std::pow(d, alpha);
    return s;
}

std::string cell_label(int j, double alpha, const char* what) {
    std::string s = "j=";
    s += fmt_int(j);
    s += " alpha=";
    s += fmt_num(alpha);
    s += ": ";
    s += what;
    return s;
}

} // namespace

// ------------------------------------------------------------------

ExperimentReport scaling_table(Family family, double alpha0, double p, double q,
                               const std::vector<double>& alphas,
                               const std::vector<int>& js, int grid_j_max,
                               uint64_t seed) {
    DonorParams donor;
    donor.family = family;
    donor.alpha0 = alpha0;
    donor.p = p;
    donor.q = q;
    ExponentProfile ep = exponent_profile(donor);
    if (ep.layers.size() != 1)
        throw SpecInvalid("scaling_table: needs a one-layer family");
    if (js.empty() || alphas.empty())
        throw SpecInvalid("scaling_table: empty j or alpha list");
    for (double a : alphas)
        if (!(a >= 0.0 && a < 1.0))
            throw SpecInvalid("scaling_table: alphas must lie in [0,1)");
    for (int j : js)
        if (j < 1) throw SpecInvalid("scaling_table: j must be >= 1");

    ExperimentReport rep;
    rep.scenario = "scaling-" + family_tag(family);
    rep.seed = seed;
    rep.params_echo = "family=" + family_tag(family) + ";alpha0=" + fmt_num(alpha0) +
                      ";p=" + fmt_num(p) + ";q=" + fmt_num(q) +
                      ";grid_j_max=" + fmt_int(grid_j_max);
    rep.columns = {"j",       "alpha",         "L",
                   "L_prime", "log2_ratio_over_j", "d_alpha_upper",
                   "d_alpha_grid", "sigma_alpha"};
    rep.grid_note =
        "measured columns use three stitched windows (left layer, bent "
        "section, right layer) at h = local corridor width / 8; rows with "
        "j above grid_j_max carry the exact and charged columns only, and "
        "the charged column is dropped too once the narrowest corridor "
        "width falls below the geometric resolution floor";
    rep.notes =
        "exact columns are closed-form log-space evaluations; the grid "
        "column composes five window legs along the only route class; the "
        "charged column bounds the same route segment by segment";

    CheckReport identity;
    identity.scenario = rep.scenario + "-identity";
    CheckReport agree;
    agree.scenario = rep.scenario + "-grid";

    bool t_diag = ep.diag.r.times_j;
    bool t_layer = ep.layers[0].r.times_j;
    double max_err = 0.0;
    for (int j : js) {
        double l2R = rule_log2(ep.diag.R, j), l2r = rule_log2(ep.diag.r, j);
        double l2Rp = rule_log2(ep.layers[0].R, j);
        double l2rp = rule_log2(ep.layers[0].r, j);
        // decorations sit near x = 1 where doubles are 2^-52 apart; below
        // kRigLog2Floor the corridor polygons degenerate, so only the
        // closed-form columns are emitted for such j
        bool constructible = std::min(l2r, l2rp) >= kRigLog2Floor;
        bool measure = j <= grid_j_max;
        if (measure && !constructible)
            throw SpecInvalid(
                "scaling_table: grid measurement requested below the "
                "geometric resolution floor");
        std::optional<ObstructionRig> rig;
        if (constructible) rig = build_rig(donor, j, measure);
        std::vector<double> diams;
        if (measure) diams = right_slice_diams(rig->dom, rig->j);
        for (double A : alphas) {
            double l2L = l2R - (1.0 - A) * l2r;
            double l2Lp = l2Rp - (1.0 - A) * l2rp;
            double L = std::exp2(l2L), Lp = std::exp2(l2Lp);
            double ratio = (l2L - l2Lp) / j;
            double expect;
            switch (family) {
                case Family::Ex32: expect = 0.0; break;
                case Family::Thm43FatLong: expect = alpha0 - A; break;
                default: expect = A - alpha0; break;
            }
            if (t_diag != t_layer) {
                double tdiff = (t_diag ? 1.0 : 0.0) - (t_layer ? 1.0 : 0.0);
                expect -= tdiff * (1.0 - A) * std::log2(static_cast<double>(j)) / j;
            }
            max_err = std::max(max_err, std::fabs(ratio - expect));
            double upper = rig ? route_upper_bound(*rig, A) : kAbsent;
            double dgrid = kAbsent, sig = kAbsent;
            if (measure) {
                dgrid = composed_grid_d(*rig, A);
                sig = diam_power_sum(diams, A);
                double sum = L + Lp;
                double worst =
                    std::max({upper / dgrid, dgrid / upper, upper / sum,
                              sum / upper, dgrid / sum, sum / dgrid});
                auto& e = agree.add(
                    cell_label(j, A,
                               "charged bound, grid distance and exact sum "
                               "agree pairwise"),
                    worst <= kBracketFactor ? Verdict::Pass : Verdict::Fail);
                e.measured = {{"d_alpha_upper", upper},
                              {"d_alpha_grid", dgrid},
                              {"exact_sum", sum},
                              {"worst_pair_ratio", worst}};
                double quad = len_alpha_polyline(rig->dom, rig->route, A);
                auto& e2 = agree.add(
                    cell_label(j, A, "charged bound dominates the route quadrature"),
                    upper >= quad ? Verdict::Pass : Verdict::Fail);
                e2.measured = {{"d_alpha_upper", upper}, {"route_len_alpha", quad}};
                double sr = sig / Lp;
                auto& e3 = agree.add(
                    cell_label(j, A,
                               "right-slice diameter sum tracks the layer trip cost"),
                    sr >= 1.0 / kBracketFactor && sr <= kBracketFactor
                        ? Verdict::Pass
                        : Verdict::Fail);
                e3.measured = {{"sigma_alpha", sig}, {"L_prime", Lp}, {"ratio", sr}};
            }
            rep.rows.push_back(
                {static_cast<double>(j), A, L, Lp, ratio, upper, dgrid, sig});
        }
    }
    auto& ie = identity.add("per-j log2 trip-cost ratio matches the exponent relation",
                            max_err <= kIdentityTol ? Verdict::Pass : Verdict::Fail);
    ie.measured = {{"max_abs_err", max_err}, {"tol", kIdentityTol}};
    rep.checks.push_back(identity);
    if (!agree.entries.empty()) rep.checks.push_back(agree);
    rep.overall = fold_checks(rep.checks);
    return rep;
}

ExperimentReport run_positive_checks(int j_min, int j_max, int pairs_per_j,
                                     double C_cap, uint64_t seed) {
    if (j_min < 1 || j_max < j_min || pairs_per_j < 0)
        throw SpecInvalid("run_positive_checks: bad parameters");
    if (!(C_cap >= 1.0)) throw SpecInvalid("run_positive_checks: C cap below 1");
    DecoratedSquareSpec spec = single_spec(Family::Ex32, 0.5, j_min, j_max);
    PlanarDomain dom = build_domain(spec);

    ExperimentReport rep;
    rep.scenario = "ex32";
    rep.seed = seed;
    rep.params_echo = spec_canonical_echo(spec) +
                      ";pairs_per_j=" + fmt_int(pairs_per_j) +
                      ";C=" + fmt_num(kDesignC) + ";C_cap=" + fmt_num(C_cap);
    rep.columns = {"j",       "pair",        "k0",               "n_slices",
                   "least_C", "least_C_123", "pass_at_design_C", "component_ok"};
    rep.grid_note = "per-j window is the decoration box widened 4 r_j into the "
                    "square, h = r_j / 8";
    rep.notes =
        "pairs are drawn uniformly from the decoration box with "
        "mt19937_64(seed+j), two 53-bit doubles per point, keeping interior "
        "points with clearance at least r_j/4; pairs with quasihyperbolic "
        "distance at most 20 are discarded as trivially served; least_C is "
        "the smallest constant under the cap at which the counting, diameter "
        "and separation checks AND the crossing/clearance checks all hold, "
        "found by bisection";

    for (const auto& lm : dom.landmarks.decorations) {
        int j = lm.j;
        double r = lm.min_width;
        double h = r / 8.0;
        Bbox win{lm.box.x0 - 4.0 * r, lm.box.y0 - 2.0 * h, lm.box.x1 + 2.0 * h,
                 lm.box.y1 + 2.0 * h};
        GridGraph g = build_grid(dom, win, h);
        std::mt19937_64 rng(seed + static_cast<uint64_t>(j));
        auto draw = [&]() {
            for (;;) {
                double ux = static_cast<double>(rng() >> 11) * 0x1.0p-53;
                double uy = static_cast<double>(rng() >> 11) * 0x1.0p-53;
                Point2 pt{lm.box.x0 + ux * (lm.box.x1 - lm.box.x0),
                          lm.box.y0 + uy * (lm.box.y1 - lm.box.y0)};
                if (!contains(dom, pt)) continue;
                if (distance_to_boundary(dom, pt) < 0.25 * r) continue;
                return pt;
            }
        };

        CheckReport sc;
        sc.scenario = "ex32-j" + fmt_int(j);
        int made = 0, trivial = 0, attempts = 0;
        int cap = 400 * std::max(1, pairs_per_j);
        int pass_c = 0, pass_comp = 0, have_least = 0;
        double worst_least = 0.0;
        while (made < pairs_per_j && attempts < cap) {
            ++attempts;
            Point2 py = draw();
            Point2 pz = draw();
            double k0 = d_alpha_grid(g, py, pz, 0.0).value;
            if (k0 <= kTrivialK) {
                ++trivial;
                continue;
            }
            WsliceDataset ds = admissible_for_pair(dom, g, j, py, pz, kDesignC, 0.0);
            PairMeasurements m = measure_pair(dom, g, ds);
            bool at_design = passes_at(m, kDesignC, 0.0);
            std::optional<double> least123 = min_passing_C(m, 0.0, C_cap);
            // crossing-length and clearance-ball checks are monotone in C too
            // (larger C loosens both), so the least C serving all five
            // conditions is found by bisecting above the counting threshold
            auto wsplus_ok = [&](double C) {
                WsliceDataset d2 = ds;
                d2.C = C;
                return check_wsplus(dom, g, d2).overall() != Verdict::Fail;
            };
            std::optional<double> star;
            if (least123) {
                double lo = *least123;
                if (wsplus_ok(lo)) {
                    star = lo;
                } else if (wsplus_ok(C_cap)) {
                    double bad = lo, good = C_cap;
                    while (good - bad > 1e-3) {
                        double mid = 0.5 * (bad + good);
                        (wsplus_ok(mid) ? good : bad) = mid;
                    }
                    star = good;
                }
            }
            WsliceDataset at_star = ds;
            at_star.C = star.value_or(C_cap);
            bool comp =
                check_ws1plus(dom, g, at_star, 200,
                              seed + 1000ull * static_cast<uint64_t>(j) +
                                  static_cast<uint64_t>(made))
                    .overall() != Verdict::Fail;
            rep.rows.push_back({static_cast<double>(j), static_cast<double>(made),
                                k0, static_cast<double>(ds.slices.size()),
                                star ? *star : kAbsent,
                                least123 ? *least123 : kAbsent,
                                at_design ? 1.0 : 0.0, comp ? 1.0 : 0.0});
            if (at_design) ++pass_c;
            if (comp) ++pass_comp;
            if (star) {
                ++have_least;
                worst_least = std::max(worst_least, *star);
            }
            ++made;
        }
        auto& e0 = sc.add("requested sample count reached",
                          made == pairs_per_j ? Verdict::Pass : Verdict::Fail);
        e0.measured = {{"requested", static_cast<double>(pairs_per_j)},
                       {"made", static_cast<double>(made)},
                       {"trivial_skipped", static_cast<double>(trivial)},
                       {"attempts", static_cast<double>(attempts)}};
        if (made > 0) {
            auto& e1 = sc.add(
                "all five conditions hold at one constant under the cap for "
                "every pair",
                have_least == made ? Verdict::Pass : Verdict::Fail);
            e1.measured = {{"max_least_C", worst_least},
                           {"cap", C_cap},
                           {"fraction", static_cast<double>(have_least) / made}};
            auto& e2 = sc.add("fraction passing untuned at the design constant",
                              Verdict::Approx);
            e2.measured = {{"fraction", static_cast<double>(pass_c) / made},
                           {"design_C", kDesignC}};
            e2.note = "informational: the design constant is not expected to "
                      "survive discretization; the uniform constant above is "
                      "the reproducible claim";
            double frac = static_cast<double>(pass_comp) / made;
            auto& e3 = sc.add("sampled-path component heuristic",
                              frac >= 0.95 ? Verdict::Approx : Verdict::Fail);
            e3.measured = {{"fraction", frac}};
            e3.note = "randomized via-node routes; supporting evidence only";
        }
        rep.checks.push_back(sc);

        WitnessResult w = slice_failure_witness(dom, g, j, kDesignC);
        rep.checks.push_back(w.report);
        CheckReport wa;
        wa.scenario = "ex32-j" + fmt_int(j) + "-witness";
        double aspect = lm.diagonal.R / lm.diagonal.r;
        bool expect_imp = aspect > 2.0 * kDesignC;
        bool got_imp = w.verdict == "impossible";
        auto& we = wa.add("witness verdict matches the aspect threshold",
                          got_imp == expect_imp ? Verdict::Pass : Verdict::Fail);
        we.measured = {{"aspect", aspect},
                       {"threshold", 2.0 * kDesignC},
                       {"impossible", got_imp ? 1.0 : 0.0}};
        rep.checks.push_back(wa);
    }
    rep.overall = fold_checks(rep.checks);
    return rep;
}

ExperimentReport run_witness_scan(int j_min, int j_max, double C) {
    if (j_min < 1 || j_max < j_min)
        throw SpecInvalid("run_witness_scan: bad j range");
    if (!(C >= 1.0)) throw SpecInvalid("run_witness_scan: C below 1");
    DecoratedSquareSpec spec = single_spec(Family::Ex32, 0.5, j_min, j_max);
    PlanarDomain dom = build_domain(spec);

    ExperimentReport rep;
    rep.scenario = "thm43";
    rep.params_echo = spec_canonical_echo(spec) + ";C=" + fmt_num(C);
    rep.columns = {"j",    "aspect", "delta_u",         "k_uy",
                   "k_uz", "min_cross_choke", "avoid_ball_crossing", "impossible"};
    rep.grid_note = "per-j window is the decoration box widened 4 r_j into the "
                    "square, h = r_j / 8";

    CheckReport growth;
    growth.scenario = "thm43-growth";
    double prev_k = -1.0;
    bool increasing = true;
    for (const auto& lm : dom.landmarks.decorations) {
        int j = lm.j;
        double r = lm.min_width;
        double h = r / 8.0;
        Bbox win{lm.box.x0 - 4.0 * r, lm.box.y0 - 2.0 * h, lm.box.x1 + 2.0 * h,
                 lm.box.y1 + 2.0 * h};
        GridGraph g = build_grid(dom, win, h);
        WitnessResult w = slice_failure_witness(dom, g, j, C);
        double aspect = lm.diagonal.R / lm.diagonal.r;
        bool imp = w.verdict == "impossible";
        rep.rows.push_back({static_cast<double>(j), aspect, w.delta_u, w.k_uy,
                            w.k_uz, w.min_cross_chokepoint,
                            w.avoid_path_ball_crossing, imp ? 1.0 : 0.0});
        rep.checks.push_back(w.report);

        CheckReport per;
        per.scenario = "thm43-j" + fmt_int(j);
        double want_delta = lm.diagonal.r / (2.0 * std::sqrt(2.0));
        auto& d = per.add(
            "roof-point clearance is the corridor half-width over sqrt 2",
            std::fabs(w.delta_u - want_delta) <= 1e-9 ? Verdict::Pass : Verdict::Fail);
        d.measured = {{"delta_u", w.delta_u}, {"expected", want_delta}};
        bool expect_imp = aspect > 2.0 * C;
        auto& v = per.add("verdict matches the aspect threshold",
                          imp == expect_imp ? Verdict::Pass : Verdict::Fail);
        v.measured = {{"aspect", aspect}, {"threshold", 2.0 * C}};
        rep.checks.push_back(per);

        if (prev_k >= 0.0 && w.k_uy <= prev_k) increasing = false;
        prev_k = w.k_uy;
    }
    auto& ge = growth.add("roof-point distance grows strictly with j",
                          increasing ? Verdict::Pass : Verdict::Fail);
    ge.measured = {{"last_k_uy", prev_k}};
    rep.checks.push_back(growth);
    rep.overall = fold_checks(rep.checks);
    return rep;
}

ExperimentReport run_alpha_set(const DecoratedSquareSpec& spec,
                               const std::vector<double>& alphas,
                               const std::vector<int>& js) {
    AlphaSetProbe probe = alpha_set_probe(spec, alphas);

    ExperimentReport rep;
    rep.scenario = "alpha-set";
    rep.params_echo = spec_canonical_echo(spec);
    rep.columns = {"alpha", "in_set", "exponent"};
    for (size_t i = 0; i < alphas.size(); ++i)
        rep.rows.push_back({alphas[i], probe.samples[i].second ? 1.0 : 0.0,
                            set_exponent(spec, alphas[i])});
    rep.notes = "membership is an exact exponent classification; grid rows are "
                "finite-j measurements offered as corroboration, not proof";

    CheckReport cr;
    cr.scenario = "alpha-set";
    auto& e = cr.add("predicted admissible alpha set", Verdict::Pass);
    e.note = probe.text;
    rep.checks.push_back(cr);

    if (!js.empty()) {
        bool rig_capable = spec.mode == CombineMode::Single &&
                           spec.donors.size() == 1 &&
                           exponent_profile(spec.donors[0]).layers.size() == 1;
        if (!rig_capable) {
            CheckReport skip;
            skip.scenario = "alpha-set-grid";
            auto& n = skip.add(
                "grid corroboration applies to single-donor one-layer specs only",
                Verdict::Approx);
            n.note = "skipped for this spec shape";
            rep.checks.push_back(skip);
        } else {
            CheckReport gr;
            gr.scenario = "alpha-set-grid";
            for (int j : js) {
                if (j < 1 || j > 3) continue; // larger rigs exceed the budget
                ObstructionRig rig = build_rig(spec.donors[0], j, true);
                std::vector<double> diams = right_slice_diams(rig.dom, rig.j);
                for (double A : alphas) {
                    double dg = composed_grid_d(rig, A);
                    double sg = diam_power_sum(diams, A);
                    auto& ge = gr.add(
                        cell_label(j, A,
                                   "measured slice sum against the pair distance"),
                        Verdict::Approx);
                    ge.measured = {{"d_alpha_grid", dg},
                                   {"sigma_alpha", sg},
                                   {"ratio", sg / dg}};
                    ge.note = alpha_in_set(probe, A) ? "inside the predicted set"
                                                     : "outside the predicted set";
                }
            }
            if (!gr.entries.empty()) rep.checks.push_back(gr);
        }
    }
    rep.overall = fold_checks(rep.checks);
    return rep;
}

ExperimentReport run_combine(const DecoratedSquareSpec& a,
                             const DecoratedSquareSpec& b, CombineMode mode,
                             const std::vector<double>& alphas) {
    DecoratedSquareSpec combined = combine_specs(mode, {a, b});
    AlphaSetProbe pa = alpha_set_probe(a, alphas);
    AlphaSetProbe pb = alpha_set_probe(b, alphas);
    AlphaSetProbe pc = alpha_set_probe(combined, alphas);

    ExperimentReport rep;
    rep.scenario =
        mode == CombineMode::Union ? "combine-union" : "combine-intersection";
    rep.params_echo =
        "a={" + spec_canonical_echo(a) + "};b={" + spec_canonical_echo(b) + "}";
    rep.columns = {"alpha", "in_a", "in_b", "in_combined", "expected"};

    CheckReport cr;
    cr.scenario = rep.scenario;
    int mismatches = 0;
    for (size_t i = 0; i < alphas.size(); ++i) {
        bool ia = pa.samples[i].second;
        bool ib = pb.samples[i].second;
        bool ic = pc.samples[i].second;
        bool want = mode == CombineMode::Union ? (ia || ib) : (ia && ib);
        if (ic != want) ++mismatches;
        rep.rows.push_back({alphas[i], ia ? 1.0 : 0.0, ib ? 1.0 : 0.0,
                            ic ? 1.0 : 0.0, want ? 1.0 : 0.0});
    }
    auto& e = cr.add("combined membership matches the pointwise algebra",
                     mismatches == 0 ? Verdict::Pass : Verdict::Fail);
    e.measured = {{"samples", static_cast<double>(alphas.size())},
                  {"mismatches", static_cast<double>(mismatches)}};

    std::vector<AlphaInterval> want_set;
    if (mode == CombineMode::Union) {
        want_set = pa.set;
        want_set.insert(want_set.end(), pb.set.begin(), pb.set.end());
        want_set = normalize_set(std::move(want_set));
    } else {
        want_set = intersect_sets(pa.set, pb.set);
    }
    std::string want_text = set_text(want_set);
    auto& e2 = cr.add("combined interval set equals the interval algebra of the parts",
                      want_text == pc.text ? Verdict::Pass : Verdict::Fail);
    e2.note = "combined " + pc.text + " vs algebra " + want_text;
    rep.checks.push_back(cr);
    rep.overall = fold_checks(rep.checks);
    return rep;
}

ExperimentReport run_width_modifier_study(double alpha0, double p, double q,
                                          const std::vector<int>& js) {
    if (js.size() < 2)
        throw SpecInvalid("run_width_modifier_study: need at least two js");
    DonorParams donor;
    donor.family = Family::Ex45;
    donor.alpha0 = alpha0;
    donor.p = p;
    donor.q = q;
    exponent_profile(donor); // validates the quadruple

    ExperimentReport rep;
    rep.scenario = "ex45";
    rep.params_echo =
        "alpha0=" + fmt_num(alpha0) + ";p=" + fmt_num(p) + ";q=" + fmt_num(q);
    rep.columns = {"j", "times_L_over_Lp", "times_Lp_over_L", "div_L_over_Lp",
                   "div_Lp_over_L"};
    rep.notes =
        "at alpha = alpha0 the plain exponents tie, so the j factor attached "
        "to the bent width decides the endpoint: multiplied by j the "
        "trip-cost ratio L/L' decays and alpha0 stays admissible, divided by "
        "j it grows and alpha0 drops out; both ratio orientations are "
        "tabulated so the trend is read off the numbers, not a label";

    double pp = p + 1.0 - alpha0, qp = q + 1.0;
    std::vector<double> times_ratio, div_ratio;
    for (int j : js) {
        if (j < 1) throw SpecInvalid("run_width_modifier_study: j must be >= 1");
        double l2Lp = exact_L_log2(j, alpha0, pp, qp, false);
        double l2Lt = exact_L_log2(j, alpha0, p, q, true);
        double l2Ld = j * (q * (1.0 - alpha0) - p) +
                      (1.0 - alpha0) * std::log2(static_cast<double>(j));
        double t1 = std::exp2(l2Lt - l2Lp);
        double d1 = std::exp2(l2Ld - l2Lp);
        times_ratio.push_back(t1);
        div_ratio.push_back(d1);
        rep.rows.push_back(
            {static_cast<double>(j), t1, 1.0 / t1, d1, 1.0 / d1});
    }

    CheckReport cr;
    cr.scenario = "ex45";
    bool dec = true, inc = true;
    for (size_t i = 1; i < times_ratio.size(); ++i) {
        if (times_ratio[i] >= times_ratio[i - 1]) dec = false;
        if (div_ratio[i] <= div_ratio[i - 1]) inc = false;
    }
    auto& e1 = cr.add("bent width times j: ratio L over L' decays, alpha0 admissible",
                      dec ? Verdict::Pass : Verdict::Fail);
    e1.measured = {{"first", times_ratio.front()}, {"last", times_ratio.back()}};
    e1.note = "predicted set [0," + fmt_num(alpha0) + "]";
    auto& e2 = cr.add("bent width over j: ratio L over L' grows, alpha0 excluded",
                      inc ? Verdict::Pass : Verdict::Fail);
    e2.measured = {{"first", div_ratio.front()}, {"last", div_ratio.back()}};
    e2.note = "predicted set [0," + fmt_num(alpha0) + ")";
    rep.checks.push_back(cr);
    rep.overall = fold_checks(rep.checks);
    return rep;
}

ToyInstance serpentine_toy() {
    ToyInstance t;
    Polygon rect = {{0.0, 0.0}, {0.32, 0.0}, {0.32, 0.26}, {0.0, 0.26}};
    Polyline s1 = {{0.08, 0.0}, {0.08, 0.20}};
    Polyline s2 = {{0.16, 0.26}, {0.16, 0.06}};
    Polyline s3 = {{0.24, 0.0}, {0.24, 0.20}};
    t.domain = make_domain({rect}, {}, {s1, s2, s3});
    t.x = {0.02, 0.02};
    t.y = {0.30, 0.02};
    t.C = 2.0;
    t.alpha = 0.0;
    t.h = 0.02;
    return t;
}

} // namespace wslab
