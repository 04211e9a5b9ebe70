#pragma once

#include <stdexcept>
#include <string>

namespace wslab {

// Base for everything thrown by this library on bad input or unusable
// configurations. Numerical failures inside otherwise valid computations
// (e.g. quadrature depth exhaustion) also land here.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Query point is not in the open domain.
struct PointOutsideDomain : Error {
    using Error::Error;
};

// A polyline handed to a length/uniformity routine leaves the domain or
// crosses a wall or slit.
struct PathExitsDomain : Error {
    using Error::Error;
};

// Construction parameters violate a validity constraint (overlapping
// decorations, exponent ranges, layer widths that do not fit, ...).
struct SpecInvalid : Error {
    using Error::Error;
};

// Grid window contains no usable node.
struct EmptyGrid : Error {
    using Error::Error;
};

// Mesh width too coarse for a corridor that passes through the window;
// results would be connectivity garbage, so we refuse.
struct ResolutionTooCoarse : Error {
    using Error::Error;
};

// Snapped endpoints lie in different grid components.
struct Disconnected : Error {
    using Error::Error;
};

// No grid node within the snap radius of a query point.
struct SnapFailed : Error {
    using Error::Error;
};

// Domain has no decoration with the requested index / corridor id.
struct NoSuchCorridor : Error {
    using Error::Error;
};

// Unparseable or wrong-format interchange file.
struct BadFile : Error {
    using Error::Error;
};

// Crossing-length query with an endpoint inside (or on) the region; the
// minimum would be ill-defined.
struct EndpointInsideSlice : Error {
    using Error::Error;
};

// Domain has no decoration with the requested index.
struct NoSuchDecoration : Error {
    using Error::Error;
};

// Pair handed to the slice selector does not lie inside the decoration.
struct PointsNotInDecoration : Error {
    using Error::Error;
};

// Pair violates the near-boundary exclusion (delta < r_j/4), where the
// corridor case analysis is not valid.
struct TooCloseToBoundary : Error {
    using Error::Error;
};

// Slice-condition checks are defined at alpha = 0 only.
struct AlphaNotZero : Error {
    using Error::Error;
};

// Operation only applies to a specific decoration family.
struct WrongFamily : Error {
    using Error::Error;
};

// Grid window does not contain the dataset's slices and endpoints.
struct GridDoesNotCoverDataset : Error {
    using Error::Error;
};

} // namespace wslab
