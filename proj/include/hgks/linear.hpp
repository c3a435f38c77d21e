#pragma once

// Block-sparse matrix with one record per cell (diagonal block plus one block
// per face neighbour), and the linear solvers that run on it: block Jacobi,
// left-preconditioned restarted GMRES, and one LUSGS pass.

#include "hgks/core.hpp"

#include <Eigen/LU>

#include <array>
#include <cmath>
#include <vector>

namespace hgks {

using BigVec = Eigen::VectorXd;

struct BlockRow {
    Mat5 diag = Mat5::Zero();
    int count = 0;
    std::array<int, 6> cols{};
    std::array<Mat5, 6> off{};

    void add_off(int col, const Mat5& b) {
        if (count == 6) throw SolverError("block row overflow");
        cols[count] = col;
        off[count] = b;
        ++count;
    }
};

struct BlockJacobian {
    std::vector<BlockRow> rows;
    std::vector<Mat5> diag_inv;

    std::size_t num_cells() const { return rows.size(); }
    Eigen::Index size() const { return static_cast<Eigen::Index>(5 * rows.size()); }

    /// Inverts every diagonal block; call after assembly.
    void factor() {
        diag_inv.resize(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            Eigen::FullPivLU<Mat5> lu(rows[i].diag);
            if (!lu.isInvertible()) throw SolverError("singular diagonal block at cell " + std::to_string(i));
            diag_inv[i] = lu.inverse();
        }
    }

    Eigen::MatrixXd dense() const {
        const Eigen::Index n = size();
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            a.block<5, 5>(5 * i, 5 * i) += rows[i].diag;
            for (int k = 0; k < rows[i].count; ++k) a.block<5, 5>(5 * i, 5 * rows[i].cols[k]) += rows[i].off[k];
        }
        return a;
    }
};

inline auto seg(BigVec& v, std::size_t i) { return v.segment<5>(5 * static_cast<Eigen::Index>(i)); }
inline auto seg(const BigVec& v, std::size_t i) { return v.segment<5>(5 * static_cast<Eigen::Index>(i)); }

/// y = A x.
inline void spmv(const BlockJacobian& a, const BigVec& x, BigVec& y) {
    y.resize(x.size());
    const long n = static_cast<long>(a.rows.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) {
        const BlockRow& r = a.rows[i];
        Vec5 acc = r.diag * seg(x, i);
        for (int k = 0; k < r.count; ++k) acc += r.off[k] * seg(x, r.cols[k]);
        seg(y, i) = acc;
    }
}

/// b^0 = D^-1 b, b^k = D^-1 (b - (L + U) b^{k-1}).
inline BigVec jacobi_precondition(const BlockJacobian& a, const BigVec& b, int kmax) {
    const long n = static_cast<long>(a.rows.size());
    BigVec z(b.size()), prev;
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) seg(z, i) = a.diag_inv[i] * seg(b, i);
    for (int k = 0; k < kmax; ++k) {
        prev = z;
#pragma omp parallel for schedule(static)
        for (long i = 0; i < n; ++i) {
            const BlockRow& r = a.rows[i];
            Vec5 rhs = seg(b, i);
            for (int j = 0; j < r.count; ++j) rhs -= r.off[j] * seg(prev, r.cols[j]);
            seg(z, i) = a.diag_inv[i] * rhs;
        }
    }
    return z;
}

/// One LUSGS pass in ascending cell order: (D + L) x* = r, then (D + U) x = D x*.
inline BigVec lusgs_sweep(const BlockJacobian& a, const BigVec& r) {
    const std::size_t n = a.rows.size();
    BigVec x(r.size());
    for (std::size_t i = 0; i < n; ++i) {
        const BlockRow& row = a.rows[i];
        Vec5 rhs = seg(r, i);
        for (int k = 0; k < row.count; ++k)
            if (static_cast<std::size_t>(row.cols[k]) < i) rhs -= row.off[k] * seg(x, row.cols[k]);
        seg(x, i) = a.diag_inv[i] * rhs;
    }
    for (std::size_t ii = n; ii-- > 0;) {
        const BlockRow& row = a.rows[ii];
        Vec5 up = Vec5::Zero();
        for (int k = 0; k < row.count; ++k)
            if (static_cast<std::size_t>(row.cols[k]) > ii) up += row.off[k] * seg(x, row.cols[k]);
        seg(x, ii) -= a.diag_inv[ii] * up;
    }
    return x;
}

struct GmresOptions {
    int krylov = 10;
    int restarts = 3;  ///< number of Arnoldi cycles
    /// Stop once the preconditioned residual drops below rel_tol times its
    /// initial value.
    double rel_tol = 1e-13;
    bool check_orthogonality = false;
};

struct GmresReport {
    int iterations = 0;
    int cycles = 0;
    bool breakdown = false;
    double initial = 0.0;
    double final = 0.0;
    /// Preconditioned residual estimates, per cycle, starting with the cycle's
    /// initial residual.
    std::vector<std::vector<double>> history;
    double max_orthogonality = 0.0;
};

namespace detail {

inline double dot(const BigVec& a, const BigVec& b) { return a.dot(b); }

inline void givens(double a, double b, double& c, double& s) {
    if (b == 0.0) {
        c = 1.0;
        s = 0.0;
    } else {
        const double r = std::hypot(a, b);
        c = a / r;
        s = b / r;
    }
}

}  // namespace detail

/// Solves A x = b with P^-1 applied on the left. `apply_a(x, y)` computes
/// y = A x, `apply_p(v)` returns P^-1 v.
template <class ApplyA, class ApplyP>
BigVec gmres_solve(const ApplyA& apply_a, const ApplyP& apply_p, const BigVec& b, const GmresOptions& opt,
                   GmresReport* report = nullptr, const BigVec* x0 = nullptr) {
    const Eigen::Index n = b.size();
    const int m = opt.krylov;
    BigVec x = x0 ? *x0 : BigVec::Zero(n);
    GmresReport rep;
    std::vector<BigVec> v(m + 1, BigVec(n));
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m + 1, m);
    Eigen::VectorXd cs(m), sn(m), g(m + 1);
    BigVec w(n), ax(n);

    double target = -1.0;
    for (int cycle = 0; cycle < opt.restarts; ++cycle) {
        if (x.isZero(0.0) && cycle == 0) {
            w = apply_p(b);
        } else {
            apply_a(x, ax);
            w = apply_p(BigVec(b - ax));
        }
        const double beta = w.norm();
        if (!std::isfinite(beta)) throw SolverError("GMRES: non-finite residual");
        if (cycle == 0) {
            rep.initial = beta;
            target = opt.rel_tol * beta;
        }
        rep.final = beta;
        if (beta == 0.0 || beta <= target) break;
        ++rep.cycles;
        rep.history.emplace_back(1, beta);

        v[0] = w / beta;
        g.setZero();
        g[0] = beta;
        h.setZero();
        int j = 0;
        bool done = false;
        for (; j < m; ++j) {
            apply_a(v[j], ax);
            w = apply_p(ax);
            const double before = w.norm();
            for (int i = 0; i <= j; ++i) {  // modified Gram-Schmidt
                h(i, j) = detail::dot(w, v[i]);
                w -= h(i, j) * v[i];
            }
            h(j + 1, j) = w.norm();
            if (h(j + 1, j) < 0.7 * before) {
                // Heavy cancellation: a second pass restores orthogonality.
                for (int i = 0; i <= j; ++i) {
                    const double c = detail::dot(w, v[i]);
                    h(i, j) += c;
                    w -= c * v[i];
                }
                h(j + 1, j) = w.norm();
            }
            if (!std::isfinite(h(j + 1, j))) throw SolverError("GMRES: non-finite Krylov vector");
            const bool happy = h(j + 1, j) <= 1e-14 * beta;
            if (!happy) v[j + 1] = w / h(j + 1, j);

            for (int i = 0; i < j; ++i) {
                const double t = cs[i] * h(i, j) + sn[i] * h(i + 1, j);
                h(i + 1, j) = -sn[i] * h(i, j) + cs[i] * h(i + 1, j);
                h(i, j) = t;
            }
            detail::givens(h(j, j), h(j + 1, j), cs[j], sn[j]);
            h(j, j) = cs[j] * h(j, j) + sn[j] * h(j + 1, j);
            h(j + 1, j) = 0.0;
            g[j + 1] = -sn[j] * g[j];
            g[j] = cs[j] * g[j];
            ++rep.iterations;
            const double res = std::abs(g[j + 1]);
            rep.history.back().push_back(res);
            rep.final = res;
            if (happy) {
                rep.breakdown = true;
                done = true;
                ++j;
                break;
            }
            if (res <= target) {
                done = true;
                ++j;
                break;
            }
        }
        // Upper-triangular solve for the j coefficients and update.
        Eigen::VectorXd y = h.topLeftCorner(j, j).triangularView<Eigen::Upper>().solve(g.head(j));
        for (int i = 0; i < j; ++i) x += y[i] * v[i];

        if (opt.check_orthogonality) {
            const int nb = done && rep.breakdown ? j : j + 1;
            for (int a = 0; a < nb; ++a)
                for (int c = 0; c < a; ++c)
                    rep.max_orthogonality = std::max(rep.max_orthogonality, std::abs(detail::dot(v[a], v[c])));
        }
        if (done) break;
    }
    if (!x.allFinite()) throw SolverError("GMRES: non-finite solution");
    if (report) *report = std::move(rep);
    return x;
}

/// Convenience overload on an assembled matrix with block-Jacobi preconditioning.
inline BigVec gmres_solve(const BlockJacobian& a, const BigVec& b, const GmresOptions& opt, int jacobi_iters,
                          GmresReport* report = nullptr) {
    return gmres_solve([&](const BigVec& x, BigVec& y) { spmv(a, x, y); },
                       [&](const BigVec& r) { return jacobi_precondition(a, r, jacobi_iters); }, b, opt, report);
}

}  // namespace hgks
