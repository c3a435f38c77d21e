#pragma once

// Non-compact third-order WENO reconstruction: one quadratic on the big
// stencil (face neighbours and their neighbours) and linear candidates on the
// sub-stencils, combined with constant linear weights.

#include "hgks/recon_basis.hpp"

#include <vector>

namespace hgks {

/// Geometry-only least-squares operator of one candidate polynomial.
struct FitOperator {
    Stencil members;           ///< members[0] is the target cell
    Eigen::MatrixXd op;        ///< coefficients = op * rhs
    bool quadratic = true;
};

namespace detail {

inline Eigen::MatrixXd average_rows(const Mesh& mesh, const LocalBasis& basis, const Stencil& s, int ncols) {
    Eigen::MatrixXd a(static_cast<Eigen::Index>(s.size()) - 1, ncols);
    for (std::size_t k = 1; k < s.size(); ++k) {
        const BasisVec row = basis.cell_average_monomials(mesh.cells[s[k].cell], s[k].shift) - basis.mean;
        a.row(static_cast<Eigen::Index>(k) - 1) = row.head(ncols).transpose();
    }
    return a;
}

inline Coeffs apply_average_fit(const FitOperator& f, const std::vector<Vec5>& q) {
    const Vec5& q0 = q[f.members[0].cell];
    Eigen::MatrixXd rhs(static_cast<Eigen::Index>(f.members.size()) - 1, kNumVars);
    for (std::size_t k = 1; k < f.members.size(); ++k)
        rhs.row(static_cast<Eigen::Index>(k) - 1) = (q[f.members[k].cell] - q0).transpose();
    Coeffs c = Coeffs::Zero();
    c.topRows(f.op.rows()) = f.op * rhs;
    return c;
}

}  // namespace detail

class WenoReconstructor {
public:
    WenoReconstructor(const Mesh& mesh, const StencilTable& stencils, ReconParams prm = {})
        : mesh_(&mesh), prm_(prm) {
        const std::size_t n = mesh.num_cells();
        bases_.resize(n);
        big_.resize(n);
        subs_.resize(n);
        for (std::size_t c = 0; c < n; ++c) {
            bases_[c] = LocalBasis::of(mesh.cells[c]);
            const CellStencils& cs = stencils.cells[c];
            big_[c].members = cs.weno_big;
            bool linear = cs.weno_linear_fallback;
            if (!linear) {
                auto op = least_squares_operator(detail::average_rows(mesh, bases_[c], cs.weno_big, kQuadTerms));
                if (op) big_[c].op = *op;
                else linear = true;
            }
            if (linear) {
                auto op = least_squares_operator(detail::average_rows(mesh, bases_[c], cs.weno_big, kLinTerms));
                if (!op) throw MeshError("WENO: cell " + std::to_string(c) + " has no solvable stencil");
                big_[c].op = *op;
                big_[c].quadratic = false;
                continue;  // linear fallback: no candidates
            }
            for (const Stencil& s : cs.weno_sub) {
                auto op = least_squares_operator(detail::average_rows(mesh, bases_[c], s, kLinTerms));
                if (!op) continue;  // coplanar centroids
                subs_[c].push_back(FitOperator{s, *op, false});
            }
            if (subs_[c].size() < 2) subs_[c].clear();
        }
    }

    const LocalBasis& basis(int c) const { return bases_[c]; }
    const FitOperator& big_operator(int c) const { return big_[c]; }
    const std::vector<FitOperator>& sub_operators(int c) const { return subs_[c]; }
    const ReconParams& params() const { return prm_; }

    ReconPolynomial fit_big(int c, const std::vector<Vec5>& q) const {
        ReconPolynomial p;
        p.cell = c;
        p.basis = bases_[c];
        p.mean = q[c];
        p.coeffs = detail::apply_average_fit(big_[c], q);
        p.quadratic = big_[c].quadratic;
        return p;
    }

    std::vector<ReconPolynomial> fit_subs(int c, const std::vector<Vec5>& q) const {
        std::vector<ReconPolynomial> out;
        for (const FitOperator& f : subs_[c]) {
            ReconPolynomial p;
            p.cell = c;
            p.basis = bases_[c];
            p.mean = q[c];
            p.coeffs = detail::apply_average_fit(f, q);
            p.quadratic = false;
            out.push_back(p);
        }
        return out;
    }

    ReconPolynomial reconstruct(int c, const std::vector<Vec5>& q) const {
        return combine_candidates(fit_big(c, q), fit_subs(c, q), prm_);
    }

    void reconstruct_all(const std::vector<Vec5>& q, std::vector<ReconPolynomial>& out) const {
        out.resize(q.size());
        const long n = static_cast<long>(q.size());
#pragma omp parallel for schedule(static)
        for (long c = 0; c < n; ++c) out[c] = reconstruct(static_cast<int>(c), q);
    }

private:
    const Mesh* mesh_;
    ReconParams prm_;
    std::vector<LocalBasis> bases_;
    std::vector<FitOperator> big_;
    std::vector<std::vector<FitOperator>> subs_;
};

}  // namespace hgks
