#pragma once

// Brute-force references used by the tests and the `oracle` subcommand.
// None of these share code paths with the production routines they check:
// moments come from adaptive quadrature of the Maxwellian, time integrals
// from Gauss-Legendre, Jacobians from central differences, linear solves
// from dense LU.

#include "hgks/core.hpp"
#include "hgks/gks_flux.hpp"
#include "hgks/kinetic.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace hgks::oracle {

struct OracleReport {
    std::string name;
    std::string case_name;
    double value = 0.0;
    double reference = 0.0;
    double relerr = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

namespace detail {

inline double adaptive(const std::function<double(double)>& f, double a, double b) {
    double err = 0.0;
    const double r = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 12, 1e-13, &err);
    return r;
}

// int x^p sqrt(lam/pi) exp(-lam (x - c)^2) dx over the half line or the full line.
inline double gaussian_power(int p, double c, double lam, Half half) {
    const double width = 14.0 / std::sqrt(lam);
    double lo = c - width, hi = c + width;
    if (half == Half::positive) lo = std::max(lo, 0.0);
    if (half == Half::negative) hi = std::min(hi, 0.0);
    if (hi <= lo) return 0.0;
    const double norm = std::sqrt(lam / std::numbers::pi);
    auto f = [&](double x) { return std::pow(x, p) * norm * std::exp(-lam * (x - c) * (x - c)); };
    // Split at the mean and at zero so the integrand is resolved.
    std::vector<double> cuts{lo, hi};
    for (double s : {c, 0.0})
        if (s > lo && s < hi) cuts.push_back(s);
    std::sort(cuts.begin(), cuts.end());
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) sum += adaptive(f, cuts[i], cuts[i + 1]);
    return sum;
}

// <|xi|^{2s}> for an isotropic Gaussian in n (possibly non-integer)
// dimensions, from the radial density r^{n-1} exp(-lam r^2).
inline double internal_power(int s, double n, double lam) {
    if (s == 0) return 1.0;
    if (n <= 0.0) return 0.0;
    const double rmax = 14.0 / std::sqrt(lam);
    auto weight = [&](double r) { return std::pow(r, n - 1.0) * std::exp(-lam * r * r); };
    const double den = adaptive(weight, 0.0, rmax);
    const double num = adaptive([&](double r) { return std::pow(r, 2 * s) * weight(r); }, 0.0, rmax);
    return num / den;
}

}  // namespace detail

/// <u^p v^q w^r xi^{2s}> of the normalised Maxwellian by adaptive quadrature.
inline double moment_quadrature(const PrimitiveState& w, const Gas& gas, int p, int q, int r, int s,
                                Half half = Half::full) {
    return detail::gaussian_power(p, w.vel[0], w.lambda, half) *
           detail::gaussian_power(q, w.vel[1], w.lambda, Half::full) *
           detail::gaussian_power(r, w.vel[2], w.lambda, Half::full) *
           detail::internal_power(s, gas.internal_dof(), w.lambda);
}

/// Nodes and weights of n-point Gauss-Legendre on [-1, 1] (Newton on P_n).
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 1; k <= n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
}

/// (1/dt) int_0^dt of the instantaneous interface flux, 64-point Gauss-Legendre.
inline Vec5 time_quadrature_flux(const InterfaceReconstruction& ir, double tau, double dt, int points = 64) {
    std::vector<double> x, w;
    gauss_legendre(points, x, w);
    Vec5 sum = Vec5::Zero();
    for (int i = 0; i < points; ++i) {
        const double t = 0.5 * dt * (x[i] + 1.0);
        sum += 0.5 * dt * w[i] * instantaneous_flux(ir, tau, t);
    }
    return sum / dt;
}

/// Central-difference Jacobian with per-component step h (1 + |Q_k|).
inline Mat5 fd_jacobian(const std::function<Vec5(const Vec5&)>& f, const Vec5& q, double h = 1e-6) {
    Mat5 j;
    for (int k = 0; k < 5; ++k) {
        const double step = h * (1.0 + std::abs(q[k]));
        Vec5 qp = q, qm = q;
        qp[k] += step;
        qm[k] -= step;
        j.col(k) = (f(qp) - f(qm)) / (2.0 * step);
    }
    return j;
}

/// Dense LU solve; throws on a singular matrix.
inline Eigen::VectorXd dense_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
    if (a.rows() != a.cols() || a.rows() != b.size()) throw std::invalid_argument("dense_solve: dimension mismatch");
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (!lu.isInvertible()) throw std::runtime_error("dense_solve: singular matrix");
    return lu.solve(b);
}

inline double relative_error(double value, double reference) {
    const double scale = std::max(std::abs(reference), 1e-300);
    return std::abs(value - reference) / scale;
}

inline double relative_error(const Eigen::VectorXd& value, const Eigen::VectorXd& reference) {
    const double scale = std::max(reference.cwiseAbs().maxCoeff(), 1e-300);
    return (value - reference).cwiseAbs().maxCoeff() / scale;
}

}  // namespace hgks::oracle
