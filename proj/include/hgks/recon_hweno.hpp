#pragma once

// Compact third-order HWENO reconstruction. Candidates use cell averages and
// cell-averaged gradients of the target cell and its face neighbours only.
// The target-cell average is a hard constraint (built into the zero-mean
// basis); neighbour averages and all derivative data, scaled by h, are met in
// the least-squares sense.

#include "hgks/recon_weno.hpp"

#include <vector>

namespace hgks {

/// Per-cell averaged Cartesian gradients of the conserved variables.
using GradientField = std::vector<Grad5>;

namespace detail {

inline Eigen::MatrixXd hermite_rows(const Mesh& mesh, const LocalBasis& basis, const Stencil& s, int ncols) {
    const Eigen::Index navg = static_cast<Eigen::Index>(s.size()) - 1;
    Eigen::MatrixXd a(navg + 3 * static_cast<Eigen::Index>(s.size()), ncols);
    a.topRows(navg) = average_rows(mesh, basis, s, ncols);
    for (std::size_t k = 0; k < s.size(); ++k) {
        const Cell& c = mesh.cells[s[k].cell];
        // d/dx_j = (1/h0) d/dxi_j, scaled by h_k.
        const BasisGrad g = basis.cell_average_gradient(c, s[k].shift) * (c.h / basis.h);
        for (int j = 0; j < 3; ++j)
            a.row(navg + 3 * static_cast<Eigen::Index>(k) + j) = g.col(j).head(ncols).transpose();
    }
    return a;
}

inline Coeffs apply_hermite_fit(const Mesh& mesh, const FitOperator& f, const std::vector<Vec5>& q,
                                const GradientField& grad) {
    const Vec5& q0 = q[f.members[0].cell];
    const Eigen::Index navg = static_cast<Eigen::Index>(f.members.size()) - 1;
    Eigen::MatrixXd rhs(navg + 3 * static_cast<Eigen::Index>(f.members.size()), kNumVars);
    for (std::size_t k = 1; k < f.members.size(); ++k)
        rhs.row(static_cast<Eigen::Index>(k) - 1) = (q[f.members[k].cell] - q0).transpose();
    for (std::size_t k = 0; k < f.members.size(); ++k) {
        const int c = f.members[k].cell;
        rhs.middleRows(navg + 3 * static_cast<Eigen::Index>(k), 3) = mesh.cells[c].h * grad[c];
    }
    Coeffs out = Coeffs::Zero();
    out.topRows(f.op.rows()) = f.op * rhs;
    return out;
}

}  // namespace detail

class HwenoReconstructor {
public:
    HwenoReconstructor(const Mesh& mesh, const StencilTable& stencils, ReconParams prm = {})
        : mesh_(&mesh), prm_(prm) {
        const std::size_t n = mesh.num_cells();
        bases_.resize(n);
        big_.resize(n);
        subs_.resize(n);
        for (std::size_t c = 0; c < n; ++c) {
            bases_[c] = LocalBasis::of(mesh.cells[c]);
            const CellStencils& cs = stencils.cells[c];
            big_[c].members = cs.hweno_big;
            if (auto op = least_squares_operator(detail::hermite_rows(mesh, bases_[c], cs.hweno_big, kQuadTerms))) {
                big_[c].op = *op;
            } else {
                auto lin = least_squares_operator(detail::hermite_rows(mesh, bases_[c], cs.hweno_big, kLinTerms));
                if (!lin) throw MeshError("HWENO: cell " + std::to_string(c) + " has no solvable stencil");
                big_[c].op = *lin;
                big_[c].quadratic = false;
                continue;
            }
            for (const Stencil& s : cs.hweno_sub) {
                auto op = least_squares_operator(detail::hermite_rows(mesh, bases_[c], s, kLinTerms));
                if (op) subs_[c].push_back(FitOperator{s, *op, false});
            }
        }
    }

    const LocalBasis& basis(int c) const { return bases_[c]; }
    const FitOperator& big_operator(int c) const { return big_[c]; }
    const std::vector<FitOperator>& sub_operators(int c) const { return subs_[c]; }
    const ReconParams& params() const { return prm_; }

    ReconPolynomial fit_big(int c, const std::vector<Vec5>& q, const GradientField& g) const {
        ReconPolynomial p;
        p.cell = c;
        p.basis = bases_[c];
        p.mean = q[c];
        p.coeffs = detail::apply_hermite_fit(*mesh_, big_[c], q, g);
        p.quadratic = big_[c].quadratic;
        return p;
    }

    std::vector<ReconPolynomial> fit_subs(int c, const std::vector<Vec5>& q, const GradientField& g) const {
        std::vector<ReconPolynomial> out;
        for (const FitOperator& f : subs_[c]) {
            ReconPolynomial p;
            p.cell = c;
            p.basis = bases_[c];
            p.mean = q[c];
            p.coeffs = detail::apply_hermite_fit(*mesh_, f, q, g);
            p.quadratic = false;
            out.push_back(p);
        }
        return out;
    }

    ReconPolynomial reconstruct(int c, const std::vector<Vec5>& q, const GradientField& g) const {
        return combine_candidates(fit_big(c, q, g), fit_subs(c, q, g), prm_);
    }

    void reconstruct_all(const std::vector<Vec5>& q, const GradientField& g, std::vector<ReconPolynomial>& out) const {
        out.resize(q.size());
        const long n = static_cast<long>(q.size());
#pragma omp parallel for schedule(static)
        for (long c = 0; c < n; ++c) out[c] = reconstruct(static_cast<int>(c), q, g);
    }

private:
    const Mesh* mesh_;
    ReconParams prm_;
    std::vector<LocalBasis> bases_;
    std::vector<FitOperator> big_;
    std::vector<std::vector<FitOperator>> subs_;
};

/// Interface point values, per face and quadrature point, in global components.
using FacePointValues = std::vector<std::vector<Vec5>>;

/// Gauss-theorem cell-averaged gradients:
///   |Omega_k| (grad Q)_k = sum_faces sum_G Q(x_G) (n dS)_G,
/// with per-point area vectors so warped quads stay exact on linears.
/// Phase 1 (face values) is supplied by the caller; this is phase 2, a
/// per-cell gather without write contention.
inline GradientField update_gradients(const Mesh& mesh, const FacePointValues& values) {
    GradientField g(mesh.num_cells(), Grad5::Zero());
    const long n = static_cast<long>(mesh.num_cells());
#pragma omp parallel for schedule(static)
    for (long c = 0; c < n; ++c) {
        const Cell& cell = mesh.cells[c];
        Grad5 acc = Grad5::Zero();
        for (int k = 0; k < cell.num_faces; ++k) {
            const CellFace cf = mesh.cell_face(static_cast<int>(c), k);
            const Face& f = mesh.faces[cf.face];
            const double sign = cf.normal.dot(f.frame.n) > 0.0 ? 1.0 : -1.0;
            for (std::size_t q = 0; q < f.quad.size(); ++q) acc += (sign * f.quad[q].sn) * values[cf.face][q].transpose();
        }
        g[c] = acc / cell.volume;
    }
    return g;
}

}  // namespace hgks
