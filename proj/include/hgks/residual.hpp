#pragma once

// Spatial residual L(Q) = -sum_faces sum_G w_G F_G S, with F_G the
// time-averaged gas-kinetic flux over the face time step. Faces are evaluated
// in parallel into a face buffer; cells then gather their own faces.

#include "hgks/boundary.hpp"
#include "hgks/gks_flux.hpp"
#include "hgks/recon_hweno.hpp"
#include "hgks/recon_weno.hpp"
#include "hgks/stencil.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace hgks {

enum class ReconKind { weno, hweno };

struct SolutionField {
    std::vector<Vec5> q;
    GradientField grad;  ///< cell-averaged gradients, compact scheme only
};

/// Cell-averaged gradients are only meaningful in the compact scheme; this
/// allocates zeros so the two schemes share one field type.
inline SolutionField uniform_field(std::size_t n, const Vec5& q) {
    return SolutionField{std::vector<Vec5>(n, q), GradientField(n, Grad5::Zero())};
}

class Discretization {
public:
    /// `patches[i]` is the boundary condition of mesh patch i. Empty patches
    /// (merged by periodic pairing) are never consulted.
    Discretization(const Mesh& mesh, ReconKind kind, ReconParams recon, Gas gas, CollisionParams collision,
                   std::vector<PatchSpec> patches)
        : mesh_(&mesh), kind_(kind), gas_(gas), collision_(collision), patches_(std::move(patches)) {
        if (patches_.size() != mesh.patches.size()) throw ConfigError("boundary table does not match mesh patches");
        for (std::size_t p = 0; p < mesh.patches.size(); ++p) {
            if (mesh.patches[p].faces.empty()) continue;
            if (patches_[p].kind == PatchKind::periodic)
                throw ConfigError("patch '" + mesh.patches[p].name + "' is periodic but was not paired");
            patches_[p].validate();
        }
        stencils_ = build_stencils(mesh);
        if (kind == ReconKind::weno) weno_.emplace(mesh, stencils_, recon);
        else hweno_.emplace(mesh, stencils_, recon);
    }

    const Mesh& mesh() const { return *mesh_; }
    ReconKind kind() const { return kind_; }
    const Gas& gas() const { return gas_; }
    const CollisionParams& collision() const { return collision_; }
    const std::vector<PatchSpec>& patches() const { return patches_; }

    void reconstruct(const SolutionField& sol, std::vector<ReconPolynomial>& polys) const {
        if (weno_) weno_->reconstruct_all(sol.q, polys);
        else hweno_->reconstruct_all(sol.q, sol.grad, polys);
    }

    /// Residual per cell. Face time step is the smaller of the adjacent cell
    /// steps. When `values` is given it receives the interface point values
    /// at the end of each face's time step.
    void residual(const SolutionField& sol, const std::vector<double>& dt, std::vector<Vec5>& res,
                  FacePointValues* values = nullptr) const {
        const Mesh& mesh = *mesh_;
        std::vector<ReconPolynomial> polys;
        reconstruct(sol, polys);

        const long nf = static_cast<long>(mesh.faces.size());
        face_flux_.resize(nf);
        if (values) values->resize(nf);
        std::vector<int> failed(nf, 0);
#pragma omp parallel for schedule(dynamic, 64)
        for (long fi = 0; fi < nf; ++fi) {
            const Face& f = mesh.faces[fi];
            const int o = f.owner, nb = f.neighbor;
            const double fdt = nb >= 0 ? std::min(dt[o], dt[nb]) : dt[o];
            if (values) (*values)[fi].resize(f.quad.size());
            Vec5 acc = Vec5::Zero();
            try {
                for (std::size_t g = 0; g < f.quad.size(); ++g) {
                    const Vec3& x = f.quad[g].x;
                    Vec5 ql;
                    Grad5 gl;
                    side(polys[o], sol.q[o], x, ql, gl);
                    Vec5 qr;
                    Grad5 gr;
                    if (nb >= 0) {
                        side(polys[nb], sol.q[nb], x - f.shift, qr, gr);
                    } else {
                        const GhostState gs = ghost_state(ql, gl, patches_[f.patch], f.frame.n, gas_);
                        qr = gs.q;
                        gr = gs.grad;
                    }
                    const InterfaceResult r =
                        solve_interface(ql, gl, qr, gr, f.frame, gas_, collision_, fdt, values ? fdt : -1.0);
                    acc += f.quad[g].w * r.flux;
                    if (values) (*values)[fi][g] = r.value;
                }
            } catch (const std::exception&) {
                failed[fi] = 1;
            }
            if (nb < 0 && is_wall(patches_[f.patch].kind)) acc[0] = 0.0;  // impermeable
            face_flux_[fi] = f.area * acc;
        }
        for (long fi = 0; fi < nf; ++fi)
            if (failed[fi] || !face_flux_[fi].allFinite())
                throw SolverError("flux evaluation failed at face " + std::to_string(fi) + " (cell " +
                                  std::to_string(mesh.faces[fi].owner) + ")");

        res.assign(mesh.num_cells(), Vec5::Zero());
        const long nc = static_cast<long>(mesh.num_cells());
#pragma omp parallel for schedule(static)
        for (long c = 0; c < nc; ++c) {
            const Cell& cell = mesh.cells[c];
            Vec5 acc = Vec5::Zero();
            for (int k = 0; k < cell.num_faces; ++k) {
                if (cell.owns[k]) acc -= face_flux_[cell.faces[k]];
                else acc += face_flux_[cell.faces[k]];
            }
            res[c] = acc;
        }
    }

private:
    // Reconstructed state on one side of a face point. A non-physical
    // point value drops that side to the cell average with zero slope.
    void side(const ReconPolynomial& p, const Vec5& mean, const Vec3& x, Vec5& q, Grad5& g) const {
        q = p.value(x);
        g = p.gradient(x);
        if (!is_physical(q) || !q.allFinite()) {
            q = mean;
            g.setZero();
        }
    }

    const Mesh* mesh_;
    ReconKind kind_;
    Gas gas_;
    CollisionParams collision_;
    std::vector<PatchSpec> patches_;
    StencilTable stencils_;
    std::optional<WenoReconstructor> weno_;
    std::optional<HwenoReconstructor> hweno_;
    mutable std::vector<Vec5> face_flux_;
};

}  // namespace hgks
