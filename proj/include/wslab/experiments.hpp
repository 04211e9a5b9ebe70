#pragma once

#include <cstdint>
#include <optional>

#include "wslab/decorations.hpp"
#include "wslab/report.hpp"
#include "wslab/slices.hpp"

namespace wslab {

// Generic tabular result: column names plus numeric rows (NaN = not
// computed), with attached condition reports. Serialized by the io module.
struct ExperimentReport {
    std::string scenario;
    std::string params_echo;
    uint64_t seed = 0;
    std::string grid_note;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<CheckReport> checks;
    std::string notes;
    Verdict overall = Verdict::Pass;
};

// Corridor trip cost R_j / r_j^(1-alpha) with R_j = 2^(-j p) and
// r_j = 2^(-j q), optionally r_j = j 2^(-j q). Computed in log space.
double exact_L_log2(int j, double alpha, double p, double q, bool times_j = false);
double exact_L(int j, double alpha, double p, double q, bool times_j = false);

// ------------------------------------------------------------------
// alpha-set calculus

struct AlphaInterval {
    double lo = 0.0, hi = 0.0;
    bool lo_closed = true, hi_closed = false;
};

struct AlphaSetProbe {
    std::vector<AlphaInterval> set; // canonical disjoint intervals in [0,1)
    std::vector<std::pair<double, bool>> samples;
    std::string text; // e.g. "[0,0.5] u [0.75,1)" or "(empty)"
};

// Exact classification of the parameter set where the decoration family
// admits the corridor datasets: per approach layer, the trip-cost ratio
// diagonal/layer stays bounded in j iff the layer's exponent gap is
// favorable; union mode pools layers, intersection mode intersects donors.
AlphaSetProbe alpha_set_probe(const DecoratedSquareSpec& spec,
                              const std::vector<double>& alphas);

bool alpha_in_set(const AlphaSetProbe& probe, double alpha);

// Concatenates donor lists under the given mode. Inputs must share the j
// range and carry no explicit attachment heights; nesting a union inside an
// intersection (or vice versa) is rejected. A single input comes back
// unchanged.
DecoratedSquareSpec combine_specs(CombineMode mode,
                                  const std::vector<DecoratedSquareSpec>& specs);
DecoratedSquareSpec combine_specs(const DecoratedSquareSpec& a,
                                  const DecoratedSquareSpec& b, CombineMode mode);

// ------------------------------------------------------------------
// experiment drivers

// Exact trip costs L, L' and the per-j log ratio (which must equal
// alpha - alpha0 identically); optionally, for j <= grid_j_max, measured
// grid distances at the designed hard pair plus the right-slice diameter
// sum, computed by composing per-window grids along the only route.
ExperimentReport scaling_table(Family family, double alpha0, double p, double q,
                               const std::vector<double>& alphas,
                               const std::vector<int>& js, int grid_j_max = 0,
                               uint64_t seed = 1);

// Positive direction on the original decoration: seeded point pairs inside
// decoration j, slice selection per the corridor case table, least passing C
// by bisection, strong variants at that C.
ExperimentReport run_positive_checks(int j_min, int j_max, int pairs_per_j,
                                     double C_cap, uint64_t seed);

// Negative direction: the designed failure pair per j, with the measured
// choke-point crossing, the roof-point clearance, and the distance growth.
ExperimentReport run_witness_scan(int j_min, int j_max, double C = 10.0);

// Exact alpha-set classification for a spec plus sampled membership. For
// j in js with j <= 3 and a single-donor one-layer spec, adds measured
// grid d_alpha / sigma_alpha confirmation entries at the designed pair.
ExperimentReport run_alpha_set(const DecoratedSquareSpec& spec,
                               const std::vector<double>& alphas,
                               const std::vector<int>& js = {});

// Combine algebra: probe(a op b) against the pointwise algebra of the parts.
ExperimentReport run_combine(const DecoratedSquareSpec& a,
                             const DecoratedSquareSpec& b, CombineMode mode,
                             const std::vector<double>& alphas);

// The four trip-cost trajectories for the j-scaled width variant (modifier
// on either width, ratio in either orientation), with the boundedness
// classification that decides its alpha-set.
ExperimentReport run_width_modifier_study(double alpha0, double p, double q,
                                          const std::vector<int>& js);

// Miniature comb-shaped corridor domain (under 200 grid nodes at the policy
// resolution) whose designed endpoint pair defeats every axis-aligned strip
// dataset: the forced serpentine route is long while any disjoint strip
// family stays cheap. Used to demonstrate the restricted exhaustion search
// coming up empty.
struct ToyInstance {
    PlanarDomain domain;
    Point2 x, y;
    double C = 2.0;
    double alpha = 0.0;
    double h = 0.0;
};
ToyInstance serpentine_toy();

} // namespace wslab
