#pragma once

// Backward-Euler step: (|Omega|/dt I + dF/dQ) dQ = L(Q^n), with the flux
// derivative replaced by Roe's splitting
//   dF/dQ_i  ~ 1/2 (J(Q_i)  + |lambda| I) S,
//   dF/dQ_ip ~ 1/2 (J(Q_ip) - |lambda| I) S,
// |lambda| = |u.n| + a at the arithmetic mean of the two cell states.

#include "hgks/linear.hpp"
#include "hgks/residual.hpp"

#include <algorithm>
#include <string>

namespace hgks {

/// Analytic Jacobian of the inviscid flux F.n with respect to Q, in global
/// components.
inline Mat5 normal_flux_jacobian(const Vec5& q, const Vec3& n, const Gas& gas) {
    const double g1 = gas.gamma - 1.0;
    const double rho = q[0];
    const Vec3 u = q.segment<3>(1) / rho;
    const double un = u.dot(n);
    const double phi = 0.5 * g1 * u.squaredNorm();
    const double p = pressure(q, gas);
    const double hh = (q[4] + p) / rho;
    Mat5 j = Mat5::Zero();
    j(0, 1) = n[0];
    j(0, 2) = n[1];
    j(0, 3) = n[2];
    for (int i = 0; i < 3; ++i) {
        j(1 + i, 0) = -u[i] * un + n[i] * phi;
        for (int k = 0; k < 3; ++k) j(1 + i, 1 + k) = u[i] * n[k] - g1 * n[i] * u[k] + (i == k ? un : 0.0);
        j(1 + i, 4) = g1 * n[i];
    }
    j(4, 0) = un * (phi - hh);
    for (int k = 0; k < 3; ++k) j(4, 1 + k) = hh * n[k] - g1 * u[k] * un;
    j(4, 4) = gas.gamma * un;
    return j;
}

/// Inviscid normal flux F(Q).n in global components.
inline Vec5 normal_flux(const Vec5& q, const Vec3& n, const Gas& gas) {
    const double p = pressure(q, gas);
    const double un = q.segment<3>(1).dot(n) / q[0];
    Vec5 f;
    f[0] = q[0] * un;
    f.segment<3>(1) = q.segment<3>(1) * un + p * n;
    f[4] = (q[4] + p) * un;
    return f;
}

/// |u.n| + a at the arithmetic mean of two states.
inline double face_spectral_radius(const Vec5& qa, const Vec5& qb, const Vec3& n, const Gas& gas) {
    const Vec5 m = 0.5 * (qa + qb);
    if (!is_physical(m)) throw UnphysicalState("averaged interface state is not physical");
    return std::abs(m.segment<3>(1).dot(n) / m[0]) + sound_speed(m, gas);
}

struct FaceBlocks {
    Mat5 self;   ///< derivative with respect to the viewing cell
    Mat5 other;  ///< derivative with respect to the neighbour
};

/// Roe-split blocks of one face seen from the cell with outward normal n
/// (per unit area).
inline FaceBlocks roe_face_blocks(const Vec5& qi, const Vec5& qj, const Vec3& n, const Gas& gas) {
    const double lam = face_spectral_radius(qi, qj, n, gas);
    return {0.5 * (normal_flux_jacobian(qi, n, gas) + lam * Mat5::Identity()),
            0.5 * (normal_flux_jacobian(qj, n, gas) - lam * Mat5::Identity())};
}

/// dt_i = CFL |Omega| / sum_faces (|u.n| + a + nu/d_n) S, d_n = |Omega| / S.
inline double local_time_step(const Mesh& mesh, int c, const Vec5& q, const Gas& gas, double cfl, double mu = 0.0) {
    const Cell& cell = mesh.cells[c];
    const Vec3 u = q.segment<3>(1) / q[0];
    const double a = sound_speed(q, gas);
    const double nu = mu / q[0];
    double sum = 0.0;
    for (int k = 0; k < cell.num_faces; ++k) {
        const CellFace cf = mesh.cell_face(c, k);
        const double s = mesh.faces[cf.face].area;
        const double dn = cell.volume / s;
        sum += (std::abs(u.dot(cf.normal)) + a + nu / dn) * s;
    }
    return cfl * cell.volume / sum;
}

/// Block rows of the backward-Euler matrix. Boundary faces add their
/// interior-side derivative with the ghost state frozen.
inline BlockJacobian assemble_jacobian(const Mesh& mesh, const std::vector<Vec5>& q, const std::vector<double>& dt,
                                       const Gas& gas) {
    BlockJacobian a;
    const long n = static_cast<long>(mesh.num_cells());
    a.rows.resize(n);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) {
        const Cell& cell = mesh.cells[i];
        BlockRow& row = a.rows[i];
        row.diag = (cell.volume / dt[i]) * Mat5::Identity();
        row.count = 0;
        for (int k = 0; k < cell.num_faces; ++k) {
            const CellFace cf = mesh.cell_face(static_cast<int>(i), k);
            const double s = mesh.faces[cf.face].area;
            const Vec5& qj = cf.neighbor >= 0 ? q[cf.neighbor] : q[i];
            const FaceBlocks b = roe_face_blocks(q[i], qj, cf.normal, gas);
            row.diag += s * b.self;
            if (cf.neighbor >= 0) row.add_off(cf.neighbor, s * b.other);
        }
    }
    a.factor();
    return a;
}

inline BigVec flatten(const std::vector<Vec5>& v) {
    BigVec out(5 * static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) seg(out, i) = v[i];
    return out;
}

inline std::vector<Vec5> unflatten(const BigVec& v) {
    std::vector<Vec5> out(v.size() / 5);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = seg(v, i);
    return out;
}

/// (L(Q + sigma v) - L(Q)) / sigma with the time steps frozen; sigma <= 0
/// picks sqrt(eps) (1 + |Q|) / |v|.
inline BigVec frechet_matvec(const Discretization& disc, const SolutionField& sol, const std::vector<double>& dt,
                             const BigVec& v, double sigma = 0.0) {
    if (v.norm() == 0.0) return BigVec::Zero(v.size());
    const BigVec q = flatten(sol.q);
    if (sigma <= 0.0) sigma = std::sqrt(std::numeric_limits<double>::epsilon()) * (1.0 + q.norm()) / v.norm();
    std::vector<Vec5> r0, r1;
    disc.residual(sol, dt, r0);
    SolutionField pert = sol;
    pert.q = unflatten(q + sigma * v);
    disc.residual(pert, dt, r1);
    return (flatten(r1) - flatten(r0)) / sigma;
}

enum class SchemeMode { weno_gmres, hweno_gmres, weno_lusgs };

inline std::string to_string(SchemeMode m) {
    switch (m) {
        case SchemeMode::weno_gmres: return "weno_gmres";
        case SchemeMode::hweno_gmres: return "hweno_gmres";
        case SchemeMode::weno_lusgs: return "weno_lusgs";
    }
    return "unknown";
}

inline ReconKind recon_kind(SchemeMode m) { return m == SchemeMode::hweno_gmres ? ReconKind::hweno : ReconKind::weno; }

struct SolverSettings {
    double cfl = 2.0;
    int krylov = 10;
    int restarts = 3;
    int jacobi_iterations = 2;
    double gmres_rel_tol = 1e-13;
    /// One time step for every cell (the minimum of the local steps).
    bool global_time_step = false;
};

struct StepReport {
    /// Residual norms of the state the step started from, per unit volume
    /// (L_i / |Omega_i|) so that they do not scale with the mesh size.
    double res_rho_l1 = 0.0;  ///< sum |L_rho| / N
    double res_l2 = 0.0;      ///< sqrt(sum |L|^2 / N)
    double dt_min = 0.0;
    int linear_iterations = 0;
    int retries = 0;
};

class ImplicitSolver {
public:
    ImplicitSolver(const Discretization& disc, SchemeMode mode, SolverSettings settings)
        : disc_(&disc), mode_(mode), set_(settings) {
        if (recon_kind(mode) != disc.kind()) throw ConfigError("scheme and reconstruction kind disagree");
    }

    const SolverSettings& settings() const { return set_; }
    SchemeMode mode() const { return mode_; }

    std::vector<double> time_steps(const std::vector<Vec5>& q) const {
        const Mesh& mesh = disc_->mesh();
        const double mu = disc_->collision().model == FlowModel::viscous ? disc_->collision().mu : 0.0;
        std::vector<double> dt(q.size());
        for (std::size_t c = 0; c < q.size(); ++c)
            dt[c] = local_time_step(mesh, static_cast<int>(c), q[c], disc_->gas(), set_.cfl, mu);
        if (set_.global_time_step) std::fill(dt.begin(), dt.end(), *std::min_element(dt.begin(), dt.end()));
        return dt;
    }

    /// One backward-Euler step in place. `step` only labels diagnostics.
    StepReport advance(SolutionField& sol, int step = 0) const {
        const Mesh& mesh = disc_->mesh();
        const std::size_t n = mesh.num_cells();
        std::vector<double> dt = time_steps(sol.q);
        StepReport rep;
        std::vector<Vec5> res;
        FacePointValues values;
        const bool compact = mode_ == SchemeMode::hweno_gmres;

        for (int attempt = 0; attempt < 2; ++attempt) {
            disc_->residual(sol, dt, res, compact ? &values : nullptr);
            if (attempt == 0) {
                for (std::size_t c = 0; c < n; ++c) {
                    const Vec5 r = res[c] / mesh.cells[c].volume;
                    rep.res_rho_l1 += std::abs(r[0]);
                    rep.res_l2 += r.squaredNorm();
                }
                rep.res_rho_l1 /= static_cast<double>(n);
                rep.res_l2 = std::sqrt(rep.res_l2 / static_cast<double>(n));
            }
            const BlockJacobian a = assemble_jacobian(mesh, sol.q, dt, disc_->gas());
            const BigVec b = flatten(res);
            BigVec dq;
            if (mode_ == SchemeMode::weno_lusgs) {
                dq = lusgs_sweep(a, b);
                rep.linear_iterations += 1;
            } else {
                GmresOptions opt;
                opt.krylov = set_.krylov;
                opt.restarts = set_.restarts;
                opt.rel_tol = set_.gmres_rel_tol;
                GmresReport gr;
                dq = gmres_solve(a, b, opt, set_.jacobi_iterations, &gr);
                rep.linear_iterations += gr.iterations;
            }

            std::vector<int> bad;
            std::vector<Vec5> next(n);
            for (std::size_t c = 0; c < n; ++c) {
                next[c] = sol.q[c] + seg(dq, c);
                if (!next[c].allFinite() || !is_physical(next[c])) bad.push_back(static_cast<int>(c));
            }
            if (bad.empty()) {
                sol.q = std::move(next);
                if (compact) sol.grad = update_gradients(mesh, values);
                rep.dt_min = *std::min_element(dt.begin(), dt.end());
                rep.retries = attempt;
                return rep;
            }
            if (attempt == 1)
                throw SolverError("step " + std::to_string(step) + ": unphysical update in cell " +
                                  std::to_string(bad.front()) + " after time-step halving");
            for (int c : bad) dt[c] *= 0.5;
        }
        return rep;
    }

private:
    const Discretization* disc_;
    SchemeMode mode_;
    SolverSettings set_;
};

}  // namespace hgks
