#pragma once

#include <string>
#include <vector>

#include "wslab/geometry.hpp"

namespace wslab {

// Families of right-edge decorations. ex32 is the fixed-dimension original;
// the others scale by exponent pairs and differ in which side of the bent
// corridor carries the extra rectangular approach layers.
enum class Family { Ex32, Thm43ThinShort, Thm43FatLong, Ex45, Ex46 };

std::string family_tag(Family f);
Family family_from_tag(const std::string& tag); // throws SpecInvalid

// 2^{-exp*j} scaled by const factor c, optionally by j as well
struct ScaleRule {
    double exp = 0.0;
    double c = 1.0;
    bool times_j = false;
    double eval(int j) const;
};

struct LayerRule {
    ScaleRule R; // half-extent
    ScaleRule r; // corridor width
};

// Resolved per-family scaling: bent part plus rectangular layers,
// innermost (next to the bend) first.
struct ExponentProfile {
    LayerRule diag;
    std::vector<LayerRule> layers;
};

struct DonorParams {
    Family family = Family::Ex32;
    double alpha0 = 0.5;  // ignored by ex32
    double alpha1 = 0.75; // ex46 only, must be > alpha0
    double p = 3.0;
    double q = 6.0;
};

ExponentProfile exponent_profile(const DonorParams& d); // validates allowability

enum class CombineMode { Single, Union, Intersection };

struct DecoratedSquareSpec {
    std::vector<DonorParams> donors; // exactly 1 unless mode says otherwise
    CombineMode mode = CombineMode::Single;
    int j_min = 2;
    int j_max = 4;
    std::vector<double> a_list; // optional explicit attachment heights, one per j
};

// Concrete dimensions of one decoration after combining donors and scaling.
struct DecorationDims {
    int j = 0;
    double a = 0.0;
    LayerDims diagonal;
    std::vector<LayerDims> layers; // innermost first
};

// Resolve and validate every decoration the spec asks for. Union mode pools
// donor layers into one decoration per j (requires identical diagonals and
// strictly decreasing layer extents going inward); intersection mode emits
// one decoration per donor per j at separate attachment heights.
std::vector<DecorationDims> resolve_dims(const DecoratedSquareSpec& spec);

// Build the decorated-square domain: one simple outer polygon tracing the
// unit square with each decoration's outline spliced into the right edge,
// one diamond hole per decoration, two slits per decoration. Landmarks are
// filled for every decoration.
PlanarDomain build_domain(const DecoratedSquareSpec& spec);

// Canonical one-line parameter echo (stable across runs, used for output
// naming and provenance).
std::string spec_canonical_echo(const DecoratedSquareSpec& spec);

// Convenience: single-donor spec for a family with default exponents.
DecoratedSquareSpec single_spec(Family f, double alpha0 = 0.5, int j_min = 2,
                                int j_max = 4, double p = 3.0, double q = 6.0);

} // namespace wslab
