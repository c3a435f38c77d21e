#pragma once

// Reconstruction stencils. Members carry a translation so that periodic
// neighbours are placed geometrically next to the target cell.

#include "hgks/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace hgks {

struct StencilEntry {
    int cell = -1;
    Vec3 shift = Vec3::Zero();

    bool same(const StencilEntry& o) const { return cell == o.cell && (shift - o.shift).norm() < 1e-9; }
};

using Stencil = std::vector<StencilEntry>;  // entry 0 is always the target cell

struct CellStencils {
    Stencil weno_big;
    std::vector<Stencil> weno_sub;
    Stencil hweno_big;
    std::vector<Stencil> hweno_sub;
    /// Fewer than two WENO sub-stencils survived at a boundary: the cell
    /// falls back to a single linear least-squares fit.
    bool weno_linear_fallback = false;
};

struct StencilTable {
    std::vector<CellStencils> cells;
};

namespace detail {

inline bool contains(const Stencil& s, const StencilEntry& e) {
    return std::any_of(s.begin(), s.end(), [&](const StencilEntry& x) { return x.same(e); });
}

inline void push_unique(Stencil& s, const StencilEntry& e) {
    if (!contains(s, e)) s.push_back(e);
}

// Face neighbours of `e` in local face order (-1 cells on boundary faces).
inline std::vector<StencilEntry> face_neighbours(const Mesh& mesh, const StencilEntry& e) {
    std::vector<StencilEntry> out;
    const Cell& c = mesh.cells[e.cell];
    for (int k = 0; k < c.num_faces; ++k) {
        const CellFace cf = mesh.cell_face(e.cell, k);
        StencilEntry n;
        n.cell = cf.neighbor;
        n.shift = e.shift + cf.shift;
        out.push_back(n);
    }
    return out;
}

}  // namespace detail

inline CellStencils build_cell_stencils(const Mesh& mesh, int ci) {
    CellStencils cs;
    const StencilEntry self{ci, Vec3::Zero()};
    const auto nbrs = detail::face_neighbours(mesh, self);

    cs.hweno_big.push_back(self);
    cs.weno_big.push_back(self);
    for (const auto& n : nbrs) {
        if (n.cell < 0) continue;
        detail::push_unique(cs.hweno_big, n);
        detail::push_unique(cs.weno_big, n);
        cs.hweno_sub.push_back({self, n});
    }
    for (const auto& n : nbrs) {
        if (n.cell < 0) continue;
        for (const auto& nn : detail::face_neighbours(mesh, n)) {
            if (nn.cell < 0 || nn.same(self)) continue;
            detail::push_unique(cs.weno_big, nn);
        }
    }

    const Cell& cell = mesh.cells[ci];
    if (cell.kind == CellKind::hexahedron) {
        // Octant stencils: one of the two polar faces plus two adjacent
        // lateral faces.
        for (int pole : {0, 1}) {
            for (int m = 0; m < 4; ++m) {
                const int a = 2 + m, b = 2 + (m + 1) % 4;
                if (nbrs[pole].cell < 0 || nbrs[a].cell < 0 || nbrs[b].cell < 0) continue;
                Stencil s{self};
                detail::push_unique(s, nbrs[pole]);
                detail::push_unique(s, nbrs[a]);
                detail::push_unique(s, nbrs[b]);
                cs.weno_sub.push_back(s);
            }
        }
    } else {
        // Three face neighbours (one face excluded) plus the other three
        // neighbours of the m-th face neighbour.
        static constexpr int kExcluded[4] = {3, 2, 0, 1};
        for (int m = 0; m < 4; ++m) {
            bool complete = true;
            Stencil s{self};
            for (int p = 0; p < 4; ++p) {
                if (p == kExcluded[m]) continue;
                if (nbrs[p].cell < 0) complete = false;
                else detail::push_unique(s, nbrs[p]);
            }
            if (!complete) continue;
            std::vector<StencilEntry> extra;
            for (const auto& nn : detail::face_neighbours(mesh, nbrs[m])) {
                if (nn.cell < 0 || nn.same(self)) continue;
                extra.push_back(nn);
            }
            if (extra.size() < 3) continue;
            std::stable_sort(extra.begin(), extra.end(),
                             [](const StencilEntry& x, const StencilEntry& y) { return x.cell < y.cell; });
            for (std::size_t k = 0; k < 3; ++k) detail::push_unique(s, extra[k]);
            cs.weno_sub.push_back(s);
        }
    }
    if (cs.weno_sub.size() < 2) {
        cs.weno_sub.clear();
        cs.weno_linear_fallback = true;
    }
    return cs;
}

inline StencilTable build_stencils(const Mesh& mesh) {
    StencilTable t;
    t.cells.resize(mesh.num_cells());
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) t.cells[c] = build_cell_stencils(mesh, static_cast<int>(c));
    return t;
}

}  // namespace hgks
