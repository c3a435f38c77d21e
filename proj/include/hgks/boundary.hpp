#pragma once

// Ghost states for boundary faces. The ghost is built at each face
// quadrature point from the interior reconstruction and then fed to the same
// interface solver as interior faces. The face frame normal points out of
// the domain.

#include "hgks/core.hpp"
#include "hgks/kinetic.hpp"

#include <optional>
#include <string>

namespace hgks {

enum class PatchKind {
    farfield_riemann,
    supersonic_inlet,
    supersonic_outlet,
    wall_noslip_isothermal,
    wall_noslip_adiabatic,
    wall_slip_adiabatic,
    periodic,
};

inline std::string to_string(PatchKind k) {
    switch (k) {
        case PatchKind::farfield_riemann: return "farfield_riemann";
        case PatchKind::supersonic_inlet: return "supersonic_inlet";
        case PatchKind::supersonic_outlet: return "supersonic_outlet";
        case PatchKind::wall_noslip_isothermal: return "wall_noslip_isothermal";
        case PatchKind::wall_noslip_adiabatic: return "wall_noslip_adiabatic";
        case PatchKind::wall_slip_adiabatic: return "wall_slip_adiabatic";
        case PatchKind::periodic: return "periodic";
    }
    return "unknown";
}

inline std::optional<PatchKind> parse_patch_kind(const std::string& s) {
    for (PatchKind k : {PatchKind::farfield_riemann, PatchKind::supersonic_inlet, PatchKind::supersonic_outlet,
                        PatchKind::wall_noslip_isothermal, PatchKind::wall_noslip_adiabatic,
                        PatchKind::wall_slip_adiabatic, PatchKind::periodic})
        if (to_string(k) == s) return k;
    return std::nullopt;
}

inline bool is_wall(PatchKind k) {
    return k == PatchKind::wall_noslip_isothermal || k == PatchKind::wall_noslip_adiabatic ||
           k == PatchKind::wall_slip_adiabatic;
}

inline bool needs_reference(PatchKind k) {
    return k == PatchKind::farfield_riemann || k == PatchKind::supersonic_inlet;
}

struct PatchSpec {
    std::string name;
    PatchKind kind = PatchKind::wall_slip_adiabatic;
    std::optional<Vec5> reference;  ///< conserved far-field / inflow state
    double wall_lambda = 0.0;       ///< isothermal walls
    Vec3 wall_velocity = Vec3::Zero();
    std::string partner;            ///< periodic patches

    void validate() const {
        if (needs_reference(kind) && !reference)
            throw ConfigError("patch '" + name + "' (" + to_string(kind) + ") needs a reference state");
        if (reference && !is_physical(*reference))
            throw ConfigError("patch '" + name + "' has an unphysical reference state");
        if (kind == PatchKind::wall_noslip_isothermal && !(wall_lambda > 0.0))
            throw ConfigError("patch '" + name + "' needs a positive wall temperature");
        if (kind == PatchKind::periodic && partner.empty())
            throw ConfigError("periodic patch '" + name + "' has no partner");
    }
};

struct GhostState {
    Vec5 q = Vec5::Zero();
    Grad5 grad = Grad5::Zero();  ///< Cartesian, row = direction
};

namespace detail {

// Characteristic blend of interior and reference states through the
// Riemann invariants u_n +- 2a/(gamma-1).
inline Vec5 farfield_state(const Vec5& qi, const Vec5& qr, const Vec3& n, const Gas& gas) {
    const double g = gas.gamma;
    const PrimitiveState wi = conserved_to_primitive(qi, gas);
    const PrimitiveState wr = conserved_to_primitive(qr, gas);
    const double pi = wi.pressure(), pr = wr.pressure();
    const double ai = std::sqrt(g * pi / wi.rho), ar = std::sqrt(g * pr / wr.rho);
    const double uni = wi.vel.dot(n), unr = wr.vel.dot(n);

    if (std::abs(uni) >= ai) return uni > 0.0 ? qi : qr;  // supersonic: all from upwind

    const double rplus = uni + 2.0 * ai / (g - 1.0);
    const double rminus = unr - 2.0 * ar / (g - 1.0);
    const double un = 0.5 * (rplus + rminus);
    const double a = 0.25 * (g - 1.0) * (rplus - rminus);
    const bool outflow = un > 0.0;
    const PrimitiveState& up = outflow ? wi : wr;
    const double entropy = up.pressure() / std::pow(up.rho, g);
    const Vec3 vt = up.vel - up.vel.dot(n) * n;
    const double rho = std::pow(a * a / (g * entropy), 1.0 / (g - 1.0));
    const double p = rho * a * a / g;
    return primitive_to_conserved(primitive_from_pressure(rho, vt + un * n, p), gas);
}

}  // namespace detail

namespace detail {

// Primitive slopes (rho, u, p) from conserved slopes and back.
struct PrimitiveGrad {
    Vec3 rho, p;
    Mat3 u;  ///< u(i, k) = d u_k / d x_i
};

inline PrimitiveGrad to_primitive_grad(const PrimitiveState& w, const Grad5& g, const Gas& gas) {
    PrimitiveGrad d;
    d.rho = g.col(0);
    d.u = (g.middleCols<3>(1) - d.rho * w.vel.transpose()) / w.rho;
    d.p = (gas.gamma - 1.0) * (g.col(4) - g.middleCols<3>(1) * w.vel + 0.5 * w.vel.squaredNorm() * d.rho);
    return d;
}

inline Grad5 to_conserved_grad(const PrimitiveState& w, const PrimitiveGrad& d, const Gas& gas) {
    Grad5 g;
    g.col(0) = d.rho;
    g.middleCols<3>(1) = d.rho * w.vel.transpose() + w.rho * d.u;
    g.col(4) = d.p / (gas.gamma - 1.0) + 0.5 * w.vel.squaredNorm() * d.rho + w.rho * d.u * w.vel;
    return g;
}

}  // namespace detail

/// Ghost state and ghost gradient at one face point. `n` is the unit normal
/// out of the domain. Wall slopes are the mirror image of the interior slopes
/// in the wall frame, taken in primitive variables so a sliding lid stays
/// consistent.
inline GhostState ghost_state(const Vec5& qi, const Grad5& gi, const PatchSpec& spec, const Vec3& n, const Gas& gas) {
    GhostState gs;
    gs.grad = gi;
    switch (spec.kind) {
        case PatchKind::supersonic_inlet:
            gs.q = *spec.reference;
            return gs;
        case PatchKind::supersonic_outlet:
            gs.q = qi;
            return gs;
        case PatchKind::farfield_riemann:
            gs.q = detail::farfield_state(qi, *spec.reference, n, gas);
            return gs;
        case PatchKind::periodic:
            throw SolverError("periodic patch '" + spec.name + "' reached the ghost-state builder");
        default:
            break;
    }

    const Mat3 reflect = Mat3::Identity() - 2.0 * n * n.transpose();
    const bool slip = spec.kind == PatchKind::wall_slip_adiabatic;
    const Mat3 mom = slip ? reflect : Mat3(-Mat3::Identity());
    const Vec3 uw = slip ? Vec3::Zero() : spec.wall_velocity;

    const PrimitiveState w = conserved_to_primitive(qi, gas);
    const detail::PrimitiveGrad d = detail::to_primitive_grad(w, gi, gas);
    PrimitiveState g = w;
    g.vel = uw + mom * (w.vel - uw);
    detail::PrimitiveGrad dg;
    dg.rho = reflect * d.rho;
    dg.p = reflect * d.p;
    dg.u = reflect * d.u * mom.transpose();
    if (spec.kind == PatchKind::wall_noslip_isothermal) {
        // Ghost held at the wall temperature, with the density that balances
        // the effusion rho / sqrt(lambda) across the wall: heat crosses, mass
        // does not. Its slopes are those of rho(Rx) sqrt(T(Rx) / T_wall).
        const double tg = 0.5 / spec.wall_lambda, ti = w.pressure() / w.rho;
        const double s = std::sqrt(ti / tg);
        g.rho = w.rho * s;
        g.lambda = spec.wall_lambda;
        const Vec3 dti = (d.p - ti * d.rho) / w.rho;
        dg.rho = s * (reflect * (d.rho + 0.5 * w.rho / ti * dti));
        dg.p = tg * dg.rho;
    }
    gs.q = primitive_to_conserved(g, gas);
    gs.grad = detail::to_conserved_grad(g, dg, gas);
    return gs;
}

}  // namespace hgks
