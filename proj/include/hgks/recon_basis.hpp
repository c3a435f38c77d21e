#pragma once

// Zero-mean polynomial basis about a target cell, least-squares fit
// operators, smoothness indicators and the nonlinear combination shared by
// the WENO and HWENO reconstructions.
//
// Monomials are taken in the scaled coordinate xi = (x - c0) / h0 with c0 the
// centroid and h0 = |Omega_0|^(1/3) of the target cell, ordered
//   xi1, xi2, xi3, xi1^2, xi2^2, xi3^2, xi1 xi2, xi1 xi3, xi2 xi3.
// Each basis function has its target-cell average subtracted, so every
// candidate polynomial reproduces the target cell average exactly.

#include "hgks/mesh.hpp"
#include "hgks/stencil.hpp"

#include <optional>
#include <vector>

namespace hgks {

inline constexpr int kQuadTerms = 9;
inline constexpr int kLinTerms = 3;

using BasisVec = Eigen::Matrix<double, kQuadTerms, 1>;
using Coeffs = Eigen::Matrix<double, kQuadTerms, kNumVars>;
using BasisGrad = Eigen::Matrix<double, kQuadTerms, 3>;  // d phi_d / d xi_j

namespace detail {
inline constexpr int kPair[3][2] = {{0, 1}, {0, 2}, {1, 2}};
}

struct LocalBasis {
    Vec3 center = Vec3::Zero();
    double h = 1.0;
    Mat3 scaled_moment = Mat3::Zero();  ///< average of xi xi^T over the target cell
    BasisVec mean = BasisVec::Zero();   ///< target-cell averages of the monomials

    static BasisVec monomials(const Vec3& xi) {
        BasisVec m;
        m << xi[0], xi[1], xi[2], xi[0] * xi[0], xi[1] * xi[1], xi[2] * xi[2], xi[0] * xi[1], xi[0] * xi[2],
            xi[1] * xi[2];
        return m;
    }

    static BasisGrad monomial_gradient(const Vec3& xi) {
        BasisGrad g = BasisGrad::Zero();
        for (int j = 0; j < 3; ++j) {
            g(j, j) = 1.0;
            g(3 + j, j) = 2.0 * xi[j];
        }
        for (int p = 0; p < 3; ++p) {
            const int a = detail::kPair[p][0], b = detail::kPair[p][1];
            g(6 + p, a) = xi[b];
            g(6 + p, b) = xi[a];
        }
        return g;
    }

    static LocalBasis of(const Cell& c) {
        LocalBasis b;
        b.center = c.centroid;
        b.h = c.h;
        b.scaled_moment = c.second_moment / (c.h * c.h);
        b.mean = b.cell_average_monomials(c, Vec3::Zero());
        return b;
    }

    Vec3 to_local(const Vec3& x) const { return (x - center) / h; }

    /// Averages of the raw monomials over cell `c` translated by `shift`.
    BasisVec cell_average_monomials(const Cell& c, const Vec3& shift) const {
        const Vec3 d = (c.centroid + shift - center) / h;
        const Mat3 s = c.second_moment / (h * h) + d * d.transpose();
        BasisVec m;
        m << d[0], d[1], d[2], s(0, 0), s(1, 1), s(2, 2), s(0, 1), s(0, 2), s(1, 2);
        return m;
    }

    /// Averages over cell `c` of the derivatives d phi / d xi_j (9 x 3).
    BasisGrad cell_average_gradient(const Cell& c, const Vec3& shift) const {
        return monomial_gradient((c.centroid + shift - center) / h);
    }

    BasisVec phi(const Vec3& x) const { return monomials(to_local(x)) - mean; }
};

/// Polynomial Q0 + sum_d c_d phi_d(x) for all five conserved variables. Linear
/// candidates keep the quadratic rows at zero.
struct ReconPolynomial {
    int cell = -1;
    LocalBasis basis;
    Vec5 mean = Vec5::Zero();
    Coeffs coeffs = Coeffs::Zero();
    bool quadratic = true;

    Vec5 value(const Vec3& x) const { return mean + coeffs.transpose() * basis.phi(x); }

    /// Cartesian gradient (row j = d/dx_j).
    Grad5 gradient(const Vec3& x) const {
        return LocalBasis::monomial_gradient(basis.to_local(x)).transpose() * coeffs / basis.h;
    }

    /// Average of the polynomial over a (translated) cell.
    Vec5 cell_average(const Cell& c, const Vec3& shift = Vec3::Zero()) const {
        return mean + coeffs.transpose() * (basis.cell_average_monomials(c, shift) - basis.mean);
    }
};

/// Least-squares operator X with coefficients = X * rhs for a dense design
/// matrix, via the normal equations. Returns nothing when the normal matrix
/// is rank deficient (pivot ratio below `rank_tol`).
inline std::optional<Eigen::MatrixXd> least_squares_operator(const Eigen::MatrixXd& a, double rank_tol = 1e-10) {
    if (a.rows() < a.cols()) return std::nullopt;
    const Eigen::MatrixXd normal = a.transpose() * a;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(normal);
    if (ldlt.info() != Eigen::Success) return std::nullopt;
    const Eigen::VectorXd d = ldlt.vectorD().cwiseAbs();
    if (!(d.minCoeff() > rank_tol * d.maxCoeff())) return std::nullopt;
    Eigen::MatrixXd op = ldlt.solve(a.transpose());
    if (!op.allFinite()) return std::nullopt;
    return op;
}

/// Smoothness indicator per conserved variable:
///   beta = sum_{|l|=1..r} |Omega|^{2|l|/3 - 1} int_Omega (D^l P)^2 dV,
/// which in scaled coordinates reduces to the cell average of the squared
/// xi-derivatives. r = 2 for quadratics, 1 for linear candidates.
inline Vec5 smoothness_indicator(const ReconPolynomial& p) {
    const Mat3& s = p.basis.scaled_moment;
    Vec5 beta = Vec5::Zero();
    for (int v = 0; v < kNumVars; ++v) {
        const auto c = p.coeffs.col(v);
        for (int j = 0; j < 3; ++j) {
            // d P / d xi_j = c_j + slope . xi, and xi has zero mean on the cell.
            Vec3 slope = Vec3::Zero();
            if (p.quadratic) {
                slope[j] = 2.0 * c[3 + j];
                for (int q = 0; q < 3; ++q) {
                    const int a = detail::kPair[q][0], b = detail::kPair[q][1];
                    if (a == j) slope[b] += c[6 + q];
                    if (b == j) slope[a] += c[6 + q];
                }
            }
            beta[v] += c[j] * c[j] + slope.dot(s * slope);
        }
        if (p.quadratic) {
            for (int j = 0; j < 3; ++j) beta[v] += 4.0 * c[3 + j] * c[3 + j];
            for (int q = 0; q < 3; ++q) beta[v] += c[6 + q] * c[6 + q];
        }
    }
    return beta;
}

struct WenoWeights {
    std::vector<double> linear;      ///< gamma_0 .. gamma_M
    std::vector<double> beta;        ///< beta_0 .. beta_M
    double tau_z = 0.0;
    std::vector<double> normalized;  ///< omega-bar_0 .. omega-bar_M
};

struct ReconParams {
    double linear_weight = 0.025;  ///< gamma_m for every low-order candidate
    double epsilon = 1e-6;
};

/// gamma_0 = 1 - M gamma_m, gamma_m = linear_weight.
inline std::vector<double> linear_weights(int num_sub, double linear_weight) {
    std::vector<double> g(num_sub + 1, linear_weight);
    g[0] = 1.0 - num_sub * linear_weight;
    return g;
}

/// omega_m = gamma_m (1 + tau_Z / (beta_m + eps)),  tau_Z = sum_m |beta_0 - beta_m| / M.
inline WenoWeights nonlinear_weights(const std::vector<double>& beta, const std::vector<double>& gamma, double eps) {
    WenoWeights w;
    w.linear = gamma;
    w.beta = beta;
    const int m = static_cast<int>(beta.size()) - 1;
    w.tau_z = 0.0;
    for (int k = 1; k <= m; ++k) w.tau_z += std::abs(beta[0] - beta[k]);
    if (m > 0) w.tau_z /= m;
    w.normalized.resize(beta.size());
    double sum = 0.0;
    for (std::size_t k = 0; k < beta.size(); ++k) {
        w.normalized[k] = gamma[k] * (1.0 + w.tau_z / (beta[k] + eps));
        sum += w.normalized[k];
    }
    for (double& x : w.normalized) x /= sum;
    return w;
}

/// Effective coefficient vector of one variable,
///   (wbar_0 / gamma_0)(c_0 - sum gamma_m c_m) + sum wbar_m c_m.
inline BasisVec combine_coefficients(const std::vector<BasisVec>& c, const WenoWeights& w) {
    BasisVec high = c[0];
    for (std::size_t m = 1; m < c.size(); ++m) high -= w.linear[m] * c[m];
    BasisVec out = (w.normalized[0] / w.linear[0]) * high;
    for (std::size_t m = 1; m < c.size(); ++m) out += w.normalized[m] * c[m];
    return out;
}

/// Combines the candidates variable by variable into one polynomial.
/// `weights_out`, when given, receives the weights of every variable.
inline ReconPolynomial combine_candidates(const ReconPolynomial& p0, const std::vector<ReconPolynomial>& subs,
                                          const ReconParams& prm, std::vector<WenoWeights>* weights_out = nullptr) {
    ReconPolynomial out = p0;
    if (subs.empty()) return out;
    const auto gamma = linear_weights(static_cast<int>(subs.size()), prm.linear_weight);
    std::vector<Vec5> betas;
    betas.push_back(smoothness_indicator(p0));
    for (const auto& s : subs) betas.push_back(smoothness_indicator(s));
    if (weights_out) weights_out->clear();
    std::vector<BasisVec> c(subs.size() + 1);
    std::vector<double> beta(subs.size() + 1);
    for (int v = 0; v < kNumVars; ++v) {
        for (std::size_t m = 0; m <= subs.size(); ++m) beta[m] = betas[m][v];
        const WenoWeights w = nonlinear_weights(beta, gamma, prm.epsilon);
        c[0] = p0.coeffs.col(v);
        for (std::size_t m = 0; m < subs.size(); ++m) c[m + 1] = subs[m].coeffs.col(v);
        out.coeffs.col(v) = combine_coefficients(c, w);
        if (weights_out) weights_out->push_back(w);
    }
    out.quadratic = p0.quadratic;
    return out;
}

/// Value and gradient at x of the combination with explicitly given weights.
struct PointReconstruction {
    Vec5 value = Vec5::Zero();
    Grad5 gradient = Grad5::Zero();
};

inline PointReconstruction nonlinear_combine(const ReconPolynomial& p0, const std::vector<ReconPolynomial>& subs,
                                             const WenoWeights& w, const Vec3& x) {
    const double g0 = w.linear[0];
    PointReconstruction r;
    r.value = p0.value(x) / g0;
    r.gradient = p0.gradient(x) / g0;
    for (std::size_t m = 0; m < subs.size(); ++m) {
        r.value -= (w.linear[m + 1] / g0) * subs[m].value(x);
        r.gradient -= (w.linear[m + 1] / g0) * subs[m].gradient(x);
    }
    r.value *= w.normalized[0];
    r.gradient *= w.normalized[0];
    for (std::size_t m = 0; m < subs.size(); ++m) {
        r.value += w.normalized[m + 1] * subs[m].value(x);
        r.gradient += w.normalized[m + 1] * subs[m].gradient(x);
    }
    return r;
}

}  // namespace hgks
