#pragma once

// Maxwellian moment engine: conversions between conserved and primitive
// variables, moment tables of the equilibrium distribution and the solution
// of the micro-slope systems  <a psi> = dQ / rho.
//
// Moments <...> are taken against the normalised Maxwellian
//   g / rho = (lambda/pi)^{(N+3)/2} exp(-lambda[(u-U)^2 + (v-V)^2 + (w-W)^2 + xi^2]),
// so the density factor is carried separately by the callers.

#include "hgks/core.hpp"

#include <cmath>
#include <sstream>

namespace hgks {

struct PrimitiveState {
    double rho = 1.0;
    Vec3 vel = Vec3::Zero();
    double lambda = 1.0;  ///< inverse temperature, lambda = rho / (2 p)

    double pressure() const { return rho / (2.0 * lambda); }
};

/// Expansion a1 + a2 u + a3 v + a4 w + a5 (u^2 + v^2 + w^2 + xi^2) / 2.
struct MicroSlope {
    Vec5 a = Vec5::Zero();
};

inline double pressure(const Vec5& q, const Gas& gas) {
    const double ke = 0.5 * (q[1] * q[1] + q[2] * q[2] + q[3] * q[3]) / q[0];
    return (gas.gamma - 1.0) * (q[4] - ke);
}

inline double sound_speed(const Vec5& q, const Gas& gas) {
    return std::sqrt(gas.gamma * pressure(q, gas) / q[0]);
}

inline bool is_physical(const Vec5& q) {
    if (!q.allFinite() || !(q[0] > 0.0)) return false;
    const double ke = 0.5 * (q[1] * q[1] + q[2] * q[2] + q[3] * q[3]) / q[0];
    return q[4] - ke > 0.0;
}

inline PrimitiveState conserved_to_primitive(const Vec5& q, const Gas& gas) {
    if (!q.allFinite() || !(q[0] > 0.0)) {
        std::ostringstream os;
        os << "non-positive or non-finite density " << q[0];
        throw UnphysicalState(os.str());
    }
    PrimitiveState w;
    w.rho = q[0];
    w.vel = Vec3(q[1], q[2], q[3]) / q[0];
    const double internal = q[4] - 0.5 * q[0] * w.vel.squaredNorm();
    if (!(internal > 0.0)) {
        std::ostringstream os;
        os << "non-positive internal energy " << internal;
        throw UnphysicalState(os.str());
    }
    w.lambda = gas.total_dof() * q[0] / (4.0 * internal);
    return w;
}

inline Vec5 primitive_to_conserved(const PrimitiveState& w, const Gas& gas) {
    Vec5 q;
    q[0] = w.rho;
    q.segment<3>(1) = w.rho * w.vel;
    q[4] = 0.5 * w.rho * (w.vel.squaredNorm() + gas.total_dof() / (2.0 * w.lambda));
    return q;
}

/// Primitive state from (rho, U, V, W, p).
inline PrimitiveState primitive_from_pressure(double rho, const Vec3& vel, double p) {
    return PrimitiveState{rho, vel, rho / (2.0 * p)};
}

enum class Half { full, positive, negative };

/// Moments of the normalised Maxwellian for one primitive state, in the
/// frame the state's velocity is expressed in (u is the first component).
class MomentTable {
public:
    static constexpr int kMaxU = 7;   // flux terms need u^6, the oracle checks one more
    static constexpr int kMaxVW = 6;
    static constexpr int kMaxXi = 2;  // <xi^0>, <xi^2>, <xi^4>

    MomentTable() = default;

    MomentTable(const PrimitiveState& w, const Gas& gas) { build(w, gas); }

    void build(const PrimitiveState& w, const Gas& gas) {
        const double U = w.vel[0], V = w.vel[1], W = w.vel[2], lam = w.lambda;
        if (!(lam > 0.0) || !std::isfinite(lam) || !w.vel.allFinite()) {
            throw UnphysicalState("moment table requested for invalid primitive state");
        }
        const double half_var = 0.5 / lam;

        full_[0] = 1.0;
        full_[1] = U;
        for (int p = 2; p <= kMaxU; ++p) full_[p] = U * full_[p - 1] + (p - 1) * half_var * full_[p - 2];
        // Half moments follow the same recurrence seeded with erfc. Deep in
        // the tail (mean more than two thermal widths outside the half space)
        // the forward recurrence cancels, so that side is summed backward.
        const double a = std::sqrt(lam) * std::abs(U);
        forward_half(pos_, U, lam, 1.0);
        forward_half(neg_, U, lam, -1.0);
        if (a >= kTailSwitch) tail_half(U > 0.0 ? neg_ : pos_, U, lam, U > 0.0 ? -1.0 : 1.0);
        v_[0] = w_[0] = 1.0;
        v_[1] = V;
        w_[1] = W;
        for (int q = 2; q <= kMaxVW; ++q) {
            const double c = (q - 1) * half_var;
            v_[q] = V * v_[q - 1] + c * v_[q - 2];
            w_[q] = W * w_[q - 1] + c * w_[q - 2];
        }
        const double n = gas.internal_dof();
        xi_[0] = 1.0;
        xi_[1] = n * half_var;
        xi_[2] = (n * n + 2.0 * n) * half_var * half_var;

        for (int p = 0; p <= kMaxU; ++p) {
            if (!std::isfinite(full_[p]) || !std::isfinite(pos_[p]) || !std::isfinite(neg_[p])) {
                throw UnphysicalState("moment table overflow (extreme lambda * U^2)");
            }
        }
    }

    double u(int p, Half h = Half::full) const {
        switch (h) {
            case Half::positive: return pos_[p];
            case Half::negative: return neg_[p];
            default: return full_[p];
        }
    }
    double v(int q) const { return v_[q]; }
    double w(int r) const { return w_[r]; }
    /// <xi^{2s}>
    double xi(int s) const { return xi_[s]; }

    /// <u^p v^q w^r xi^{2s}>
    double m(int p, int q, int r, int s, Half h = Half::full) const {
        return u(p, h) * v_[q] * w_[r] * xi_[s];
    }

    /// <u^p v^q w^r xi^{2s} psi>
    Vec5 psi(int p, int q, int r, int s = 0, Half h = Half::full) const {
        Vec5 out;
        out[0] = m(p, q, r, s, h);
        out[1] = m(p + 1, q, r, s, h);
        out[2] = m(p, q + 1, r, s, h);
        out[3] = m(p, q, r + 1, s, h);
        out[4] = 0.5 * (m(p + 2, q, r, s, h) + m(p, q + 2, r, s, h) + m(p, q, r + 2, s, h) +
                        m(p, q, r, s + 1, h));
        return out;
    }

    /// <u^p v^q w^r (a . psi) psi>
    Vec5 apsi(const MicroSlope& s, int p, int q, int r, Half h = Half::full) const {
        const Vec5& a = s.a;
        return a[0] * psi(p, q, r, 0, h) + a[1] * psi(p + 1, q, r, 0, h) +
               a[2] * psi(p, q + 1, r, 0, h) + a[3] * psi(p, q, r + 1, 0, h) +
               0.5 * a[4] *
                   (psi(p + 2, q, r, 0, h) + psi(p, q + 2, r, 0, h) + psi(p, q, r + 2, 0, h) +
                    psi(p, q, r, 1, h));
    }

private:
    using UTable = std::array<double, kMaxU + 1>;

    static constexpr double kTailSwitch = 2.0;

    // <u^p> over sign * u > 0.
    static void forward_half(UTable& out, double U, double lam, double sign) {
        const double gauss = 0.5 * std::exp(-lam * U * U) / std::sqrt(std::numbers::pi * lam);
        out[0] = 0.5 * std::erfc(-sign * std::sqrt(lam) * U);
        out[1] = U * out[0] + sign * gauss;
        for (int p = 2; p <= kMaxU; ++p) out[p] = U * out[p - 1] + (p - 1) * 0.5 / lam * out[p - 2];
    }

    // Tail half space (mean outside it). With a = sign * sqrt(lam) * (-U) > 0,
    //   <u^p>_{sign u > 0} = sign^p (1/2) lam^{-p/2} p! i^p erfc(a),
    // and the repeated erfc integrals i^n erfc(a) come from Miller's backward
    // recurrence i^{n-2} = 2n i^n + 2a i^{n-1}, normalised by i^0 = erfc(a).
    static void tail_half(UTable& out, double U, double lam, double sign) {
        const double a = -sign * std::sqrt(lam) * U;
        constexpr int kStart = kMaxU + 100;
        std::array<double, kStart + 2> y{};
        y[kStart + 1] = 0.0;
        y[kStart] = 1e-300;
        for (int n = kStart + 1; n >= 2; --n) {
            y[n - 2] = 2.0 * n * y[n] + 2.0 * a * y[n - 1];
            if (y[n - 2] > 1e250) {
                for (int k = n - 2; k <= kStart + 1; ++k) y[k] *= 1e-250;
            }
        }
        const double scale = std::erfc(a) / y[0];
        double fact = 1.0, sp = 1.0, lp = 1.0;
        for (int p = 0; p <= kMaxU; ++p) {
            if (p > 0) {
                fact *= p;
                sp *= sign;
                lp /= std::sqrt(lam);
            }
            out[p] = sp * 0.5 * lp * fact * y[p] * scale;
        }
    }

    std::array<double, kMaxU + 1> full_{};
    std::array<double, kMaxU + 1> pos_{};
    std::array<double, kMaxU + 1> neg_{};
    std::array<double, kMaxVW + 1> v_{};
    std::array<double, kMaxVW + 1> w_{};
    std::array<double, kMaxXi + 1> xi_{};
};

inline MomentTable build_moments(const PrimitiveState& w, const Gas& gas) { return MomentTable(w, gas); }

namespace detail {

// Solves <a psi> = b for the normalised Maxwellian of w.
inline MicroSlope solve_normalised_slope(const PrimitiveState& w, const Vec5& b, const Gas& gas) {
    const double lam = w.lambda;
    const double d = gas.total_dof();
    const Vec3& U = w.vel;
    const double e = 0.5 * (U.squaredNorm() + d / (2.0 * lam));
    const Vec3 r = b.segment<3>(1) - U * b[0];
    const double r5 = b[4] - e * b[0];

    MicroSlope s;
    s.a[4] = 8.0 * lam * lam / d * (r5 - U.dot(r));
    s.a.segment<3>(1) = 2.0 * lam * r - U * s.a[4];
    s.a[0] = b[0] - U.dot(s.a.segment<3>(1)) - e * s.a[4];
    return s;
}

}  // namespace detail

/// Micro slope whose moment <a psi> reproduces the derivative dQ of the
/// conserved variables (both in the frame of w).
inline MicroSlope solve_micro_slope(const PrimitiveState& w, const Vec5& dq, const Gas& gas) {
    return detail::solve_normalised_slope(w, dq / w.rho, gas);
}

/// Time slope A from the compatibility condition
///   <(a1 u + a2 v + a3 w + A) psi> = 0.
inline MicroSlope solve_time_slope(const PrimitiveState& w, const MomentTable& mt, const MicroSlope& a1,
                                   const MicroSlope& a2, const MicroSlope& a3, const Gas& gas) {
    const Vec5 b = -(mt.apsi(a1, 1, 0, 0) + mt.apsi(a2, 0, 1, 0) + mt.apsi(a3, 0, 0, 1));
    return detail::solve_normalised_slope(w, b, gas);
}

inline MicroSlope solve_time_slope(const PrimitiveState& w, const MicroSlope& a1, const MicroSlope& a2,
                                   const MicroSlope& a3, const Gas& gas) {
    return solve_time_slope(w, MomentTable(w, gas), a1, a2, a3, gas);
}

}  // namespace hgks
