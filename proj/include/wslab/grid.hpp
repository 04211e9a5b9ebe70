#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "wslab/geometry.hpp"

namespace wslab {

enum class ExecMode { Serial, OpenMP };

struct GridNode {
    int ix = 0;
    int iy = 0;
    double x = 0.0;
    double y = 0.0;
    double delta = 0.0; // distance to the domain boundary
};

// Lattice graph over a rectangular window. Nodes sit on the h-lattice
// anchored at the window's min corner, keep distance >= h/2 to the boundary,
// and connect by king and knight moves whose open segments stay inside the
// domain. Node order is deterministic: by column, then by row.
struct GridGraph {
    Bbox window;
    double h = 0.0;
    std::vector<GridNode> nodes;
    std::vector<uint32_t> adj_off; // CSR, size nodes.size()+1
    std::vector<uint32_t> adj_to;
    std::vector<double> adj_len;   // Euclidean edge lengths
    std::vector<int> comp;         // connected component per node
    int n_comp = 0;
    std::unordered_map<uint64_t, uint32_t> index; // (ix,iy) -> node id

    static constexpr uint32_t npos = 0xffffffffu;
    uint32_t find_node(int ix, int iy) const {
        auto it = index.find((static_cast<uint64_t>(static_cast<uint32_t>(ix)) << 32) |
                             static_cast<uint32_t>(iy));
        return it == index.end() ? npos : it->second;
    }
    size_t size() const { return nodes.size(); }
};

// Default mesh width for a window: narrowest corridor of any decoration
// whose box meets the window divided by 8, else the window's short side / 64.
double auto_h(const PlanarDomain& dom, const Bbox& window);

// Builds the lattice graph. Throws EmptyGrid when no node survives and
// ResolutionTooCoarse when a corridor passing through the window is thinner
// than 6h or ends up disconnected along its midline.
GridGraph build_grid(const PlanarDomain& dom, const Bbox& window, double h,
                     ExecMode mode = ExecMode::OpenMP);

// Nearest node within 2h of p (ties: lexicographically smallest position).
// Throws SnapFailed.
uint32_t snap_node(const GridGraph& g, Point2 p);

// The 16 neighbor offsets (8 forward + mirror images).
const std::vector<std::pair<int, int>>& forward_offsets();

} // namespace wslab
