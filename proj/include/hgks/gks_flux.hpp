#pragma once

// Gas-kinetic interface solver. At a face quadrature point the distribution
//
//   f = (1 - e^{-t/tau}) g0 + ((t + tau) e^{-t/tau} - tau)(a1 u + a2 v + a3 w) g0
//     + (t - tau + tau e^{-t/tau}) A g0
//     + e^{-t/tau} [1 - (tau + t)(a1 u + a2 v + a3 w) - tau A]_{l,r} g_{l,r} H(+-u)
//
// is evaluated in the face-local frame (u along the face normal). Fluxes are
// its psi u moments integrated in closed form over [0, dt]; interface values
// are its psi moments at a given t.

#include "hgks/core.hpp"
#include "hgks/kinetic.hpp"

#include <algorithm>
#include <array>

namespace hgks {

inline Vec5 rotate_to_local(const Vec5& q, const Frame& f) {
    Vec5 out = q;
    const Vec3 m = q.segment<3>(1);
    out[1] = f.n.dot(m);
    out[2] = f.t1.dot(m);
    out[3] = f.t2.dot(m);
    return out;
}

inline Vec5 rotate_to_global(const Vec5& q, const Frame& f) {
    Vec5 out = q;
    out.segment<3>(1) = q[1] * f.n + q[2] * f.t1 + q[3] * f.t2;
    return out;
}

/// Directional derivatives along (n, t1, t2) of a Cartesian gradient,
/// with momentum components expressed in the local frame.
inline std::array<Vec5, 3> local_slopes(const Grad5& g, const Frame& f) {
    return {rotate_to_local(g.transpose() * f.n, f), rotate_to_local(g.transpose() * f.t1, f),
            rotate_to_local(g.transpose() * f.t2, f)};
}

enum class FlowModel { inviscid, viscous };

struct CollisionParams {
    FlowModel model = FlowModel::inviscid;
    double mu = 0.0;
    double epsilon = 0.1;
    double c = 1.0;
};

struct CollisionTime {
    double tau = 0.0;
    FlowModel model = FlowModel::inviscid;
};

/// p is the equilibrium pressure at the interface (viscous model only).
inline CollisionTime collision_time(const CollisionParams& prm, double dt, double p_l, double p_r, double p) {
    const double jump = std::abs(p_l - p_r) / (p_l + p_r);
    CollisionTime ct;
    ct.model = prm.model;
    if (prm.model == FlowModel::inviscid) {
        ct.tau = prm.epsilon * dt + prm.c * jump * dt;
    } else {
        ct.tau = prm.mu / p + prm.c * jump * dt;
    }
    return ct;
}

/// State, micro slopes and time slope on one side of the interface (or of the
/// equilibrium state g0), all in the face-local frame.
struct KineticSide {
    PrimitiveState w;
    MomentTable mt;
    std::array<MicroSlope, 3> a{};
    MicroSlope A{};
};

struct InterfaceReconstruction {
    KineticSide left;
    KineticSide right;
    KineticSide eq;
    Vec5 q0 = Vec5::Zero();
};

inline KineticSide make_side(const Vec5& q, const std::array<Vec5, 3>& dq, const Gas& gas) {
    KineticSide s;
    s.w = conserved_to_primitive(q, gas);
    s.mt.build(s.w, gas);
    for (int k = 0; k < 3; ++k) s.a[k] = solve_micro_slope(s.w, dq[k], gas);
    s.A = solve_time_slope(s.w, s.mt, s.a[0], s.a[1], s.a[2], gas);
    return s;
}

/// Builds the interface data from left/right conserved states and their
/// directional derivatives, all in the local frame. The equilibrium state
/// follows from the compatibility condition; its slopes are the same
/// half-space blend of the left/right slopes.
inline InterfaceReconstruction make_interface(const Vec5& ql, const std::array<Vec5, 3>& dql, const Vec5& qr,
                                              const std::array<Vec5, 3>& dqr, const Gas& gas) {
    InterfaceReconstruction ir;
    ir.left = make_side(ql, dql, gas);
    ir.right = make_side(qr, dqr, gas);
    const double rl = ir.left.w.rho, rr = ir.right.w.rho;
    ir.q0 = rl * ir.left.mt.psi(0, 0, 0, 0, Half::positive) + rr * ir.right.mt.psi(0, 0, 0, 0, Half::negative);
    std::array<Vec5, 3> dq0;
    for (int k = 0; k < 3; ++k) {
        dq0[k] = rl * ir.left.mt.apsi(ir.left.a[k], 0, 0, 0, Half::positive) +
                 rr * ir.right.mt.apsi(ir.right.a[k], 0, 0, 0, Half::negative);
    }
    ir.eq = make_side(ir.q0, dq0, gas);
    return ir;
}

/// Coefficients multiplying the six families of terms of f, either evaluated
/// at one time or integrated over a window.
struct TimeCoefficients {
    double eq = 0;         // g0
    double eq_slope = 0;   // (a1 u + a2 v + a3 w) g0
    double eq_time = 0;    // A g0
    double kin = 0;        // g_{l,r}
    double kin_slope = 0;  // (a1 u + a2 v + a3 w) g_{l,r}
    double kin_time = 0;   // A g_{l,r}

    static TimeCoefficients at(double tau, double t) {
        const double eta = tau > 0.0 ? std::exp(-t / tau) : 0.0;
        TimeCoefficients c;
        c.eq = 1.0 - eta;
        c.eq_slope = (t + tau) * eta - tau;
        c.eq_time = t - tau + tau * eta;
        c.kin = eta;
        c.kin_slope = -(tau + t) * eta;
        c.kin_time = -tau * eta;
        return c;
    }

    /// Integrals over [0, dt] of the coefficients in `at`.
    static TimeCoefficients integrated(double tau, double dt) {
        double i0 = 0.0, i1 = 0.0;  // int e^{-t/tau}, int t e^{-t/tau}
        if (tau > 0.0) {
            const double x = dt / tau;
            const double eta = std::exp(-x);
            const double one_minus_eta = -std::expm1(-x);
            i0 = tau * one_minus_eta;
            i1 = tau * tau * one_minus_eta - tau * dt * eta;
        }
        TimeCoefficients c;
        c.eq = dt - i0;
        c.eq_slope = i1 + tau * i0 - tau * dt;
        c.eq_time = 0.5 * dt * dt - tau * dt + tau * i0;
        c.kin = i0;
        c.kin_slope = -(tau * i0 + i1);
        c.kin_time = -tau * i0;
        return c;
    }
};

namespace detail {

// <u^pu psi f>, pu = 1 gives the normal flux, pu = 0 the conserved moments.
inline Vec5 kinetic_moments(const InterfaceReconstruction& ir, const TimeCoefficients& c, int pu) {
    auto slope_terms = [pu](const KineticSide& s, Half h) {
        return Vec5(s.mt.apsi(s.a[0], pu + 1, 0, 0, h) + s.mt.apsi(s.a[1], pu, 1, 0, h) +
                    s.mt.apsi(s.a[2], pu, 0, 1, h));
    };
    const KineticSide& e = ir.eq;
    Vec5 out = e.w.rho * (c.eq * e.mt.psi(pu, 0, 0) + c.eq_slope * slope_terms(e, Half::full) +
                          c.eq_time * e.mt.apsi(e.A, pu, 0, 0));
    const KineticSide& l = ir.left;
    out += l.w.rho * (c.kin * l.mt.psi(pu, 0, 0, 0, Half::positive) +
                      c.kin_slope * slope_terms(l, Half::positive) +
                      c.kin_time * l.mt.apsi(l.A, pu, 0, 0, Half::positive));
    const KineticSide& r = ir.right;
    out += r.w.rho * (c.kin * r.mt.psi(pu, 0, 0, 0, Half::negative) +
                      c.kin_slope * slope_terms(r, Half::negative) +
                      c.kin_time * r.mt.apsi(r.A, pu, 0, 0, Half::negative));
    return out;
}

}  // namespace detail

/// Time-averaged flux (1/dt) int_0^dt <u psi f> dt in the local frame.
inline Vec5 evolve_flux(const InterfaceReconstruction& ir, double tau, double dt) {
    return detail::kinetic_moments(ir, TimeCoefficients::integrated(tau, dt), 1) / dt;
}

/// Instantaneous flux <u psi f> at time t.
inline Vec5 instantaneous_flux(const InterfaceReconstruction& ir, double tau, double t) {
    return detail::kinetic_moments(ir, TimeCoefficients::at(tau, t), 1);
}

/// Conserved variables <psi f> at the interface at time t (local frame).
inline Vec5 point_value(const InterfaceReconstruction& ir, double tau, double t) {
    return detail::kinetic_moments(ir, TimeCoefficients::at(tau, t), 0);
}

/// Collisionless flux vector splitting of two equilibrium states.
inline Vec5 kfvs_flux(const PrimitiveState& wl, const PrimitiveState& wr, const Gas& gas) {
    const MomentTable ml(wl, gas), mr(wr, gas);
    return wl.rho * ml.psi(1, 0, 0, 0, Half::positive) + wr.rho * mr.psi(1, 0, 0, 0, Half::negative);
}

/// Inviscid Euler flux of q along the first axis.
inline Vec5 euler_flux_x(const Vec5& q, const Gas& gas) {
    const double p = pressure(q, gas);
    const double u = q[1] / q[0];
    Vec5 f;
    f << q[1], q[1] * u + p, q[2] * u, q[3] * u, (q[4] + p) * u;
    return f;
}

struct InterfaceResult {
    Vec5 flux = Vec5::Zero();   ///< time-averaged, global frame, per unit area
    Vec5 value = Vec5::Zero();  ///< conserved point value at `value_time`, global frame
    double tau = 0.0;
};

/// Full interface evaluation in global components: rotate the left/right
/// reconstructions into the face frame, evolve, rotate back.
inline InterfaceResult solve_interface(const Vec5& ql, const Grad5& gl, const Vec5& qr, const Grad5& gr,
                                       const Frame& frame, const Gas& gas, const CollisionParams& prm, double dt,
                                       double value_time) {
    const Vec5 ql_loc = rotate_to_local(ql, frame);
    const Vec5 qr_loc = rotate_to_local(qr, frame);
    const InterfaceReconstruction ir =
        make_interface(ql_loc, local_slopes(gl, frame), qr_loc, local_slopes(gr, frame), gas);
    const double p_l = ir.left.w.pressure();
    const double p_r = ir.right.w.pressure();
    const CollisionTime ct = collision_time(prm, dt, p_l, p_r, ir.eq.w.pressure());
    InterfaceResult res;
    res.tau = ct.tau;
    res.flux = rotate_to_global(evolve_flux(ir, ct.tau, dt), frame);
    if (value_time >= 0.0) res.value = rotate_to_global(point_value(ir, ct.tau, value_time), frame);
    return res;
}

}  // namespace hgks
