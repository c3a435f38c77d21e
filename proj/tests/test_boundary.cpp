#include "hgks/boundary.hpp"
#include "hgks/gks_flux.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace hgks;

namespace {

const Gas kGas;

Vec5 cons(double rho, const Vec3& u, double p) { return primitive_to_conserved(primitive_from_pressure(rho, u, p), kGas); }

PatchSpec spec(PatchKind k) {
    PatchSpec s;
    s.name = "p";
    s.kind = k;
    return s;
}

Grad5 random_grad(std::mt19937& rng) {
    std::uniform_real_distribution<double> d(-1, 1);
    Grad5 g;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 5; ++j) g(i, j) = d(rng);
    return g;
}

}  // namespace

TEST(Boundary, KindStringsRoundTrip) {
    for (const char* s : {"farfield_riemann", "supersonic_inlet", "supersonic_outlet", "wall_noslip_isothermal",
                          "wall_noslip_adiabatic", "wall_slip_adiabatic", "periodic"}) {
        auto k = parse_patch_kind(s);
        ASSERT_TRUE(k.has_value()) << s;
        EXPECT_EQ(to_string(*k), s);
    }
    EXPECT_FALSE(parse_patch_kind("wall").has_value());
}

TEST(Boundary, SlipWallMirrorsNormalVelocity) {
    const Vec3 n = Vec3(1, 2, -1).normalized();
    const Frame f = Frame::from_normal(n);
    const Vec3 u = 0.3 * f.n + 0.5 * f.t1;
    const GhostState g = ghost_state(cons(1.2, u, 0.9), Grad5::Zero(), spec(PatchKind::wall_slip_adiabatic), n, kGas);
    const PrimitiveState w = conserved_to_primitive(g.q, kGas);
    EXPECT_NEAR(w.vel.dot(f.n), -0.3, 1e-14);
    EXPECT_NEAR(w.vel.dot(f.t1), 0.5, 1e-14);
    EXPECT_NEAR(w.vel.dot(f.t2), 0.0, 1e-14);
    EXPECT_NEAR(w.rho, 1.2, 1e-14);
    EXPECT_NEAR(w.pressure(), 0.9, 1e-13);
}

TEST(Boundary, SupersonicInletIsReference) {
    PatchSpec s = spec(PatchKind::supersonic_inlet);
    s.reference = cons(1.0, Vec3(1.5, 0, 0), 1.0 / kGas.gamma);
    const GhostState g = ghost_state(cons(0.7, Vec3(0.2, 0.1, 0), 0.5), Grad5::Zero(), s, -Vec3::UnitX(), kGas);
    const PrimitiveState w = conserved_to_primitive(g.q, kGas);
    EXPECT_NEAR(w.rho, 1.0, 1e-14);
    EXPECT_NEAR(w.vel[0], 1.5, 1e-14);
    EXPECT_NEAR(w.vel.tail<2>().norm(), 0.0, 1e-14);
    EXPECT_NEAR(w.pressure(), 1.0 / kGas.gamma, 1e-14);
}

TEST(Boundary, SupersonicOutletExtrapolates) {
    const Vec5 qi = cons(0.7, Vec3(2.0, 0.1, 0), 0.5);
    const GhostState g = ghost_state(qi, Grad5::Zero(), spec(PatchKind::supersonic_outlet), Vec3::UnitX(), kGas);
    EXPECT_EQ(g.q, qi);
}

TEST(Boundary, FarfieldIdempotent) {
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> u(-0.8, 0.8);
    for (double ma : {0.3, 0.8, 1.5}) {
        PatchSpec s = spec(PatchKind::farfield_riemann);
        const Vec5 ref = cons(1.0, Vec3(ma, u(rng), 0.2), 1.0 / kGas.gamma);
        s.reference = ref;
        for (int i = 0; i < 20; ++i) {
            const Vec3 n = Vec3(u(rng), u(rng), u(rng)).normalized();
            const GhostState g1 = ghost_state(ref, Grad5::Zero(), s, n, kGas);
            const GhostState g2 = ghost_state(g1.q, Grad5::Zero(), s, n, kGas);
            EXPECT_LE((g1.q - ref).cwiseAbs().maxCoeff(), 1e-13);
            EXPECT_LE((g2.q - ref).cwiseAbs().maxCoeff(), 1e-13);
        }
    }
}

TEST(Boundary, FarfieldUpwindSides) {
    PatchSpec s = spec(PatchKind::farfield_riemann);
    s.reference = cons(1.0, Vec3(0.5, 0, 0), 1.0 / kGas.gamma);
    // Subsonic inflow through the xmin face: tangential velocity from outside.
    const Vec5 qi = cons(1.1, Vec3(0.45, 0.2, 0), 0.75);
    const PrimitiveState in = conserved_to_primitive(ghost_state(qi, Grad5::Zero(), s, -Vec3::UnitX(), kGas).q, kGas);
    EXPECT_NEAR(in.vel[1], 0.0, 1e-14);
    // Subsonic outflow through xmax: tangential and entropy from inside.
    const PrimitiveState out = conserved_to_primitive(ghost_state(qi, Grad5::Zero(), s, Vec3::UnitX(), kGas).q, kGas);
    EXPECT_NEAR(out.vel[1], 0.2, 1e-14);
    const PrimitiveState wi = conserved_to_primitive(qi, kGas);
    EXPECT_NEAR(out.pressure() / std::pow(out.rho, kGas.gamma), wi.pressure() / std::pow(wi.rho, kGas.gamma), 1e-13);
}

TEST(Boundary, NoslipWalls) {
    const Vec3 n = Vec3::UnitY();
    const Vec5 qi = cons(1.1, Vec3(0.2, 0.05, -0.1), 0.8);
    const PrimitiveState wi = conserved_to_primitive(qi, kGas);

    const PrimitiveState a =
        conserved_to_primitive(ghost_state(qi, Grad5::Zero(), spec(PatchKind::wall_noslip_adiabatic), n, kGas).q, kGas);
    EXPECT_LE((a.vel + wi.vel).norm(), 1e-14);
    EXPECT_NEAR(a.rho, wi.rho, 1e-14);
    EXPECT_NEAR(a.lambda, wi.lambda, 1e-13);

    PatchSpec iso = spec(PatchKind::wall_noslip_isothermal);
    iso.wall_lambda = 0.6;
    iso.wall_velocity = Vec3(0.15, 0, 0);
    const PrimitiveState b = conserved_to_primitive(ghost_state(qi, Grad5::Zero(), iso, n, kGas).q, kGas);
    EXPECT_NEAR(b.lambda, 0.6, 1e-13);
    // Equal effusion rho sqrt(T) on both sides.
    EXPECT_NEAR(b.rho / std::sqrt(b.lambda), wi.rho / std::sqrt(wi.lambda), 1e-13);
    EXPECT_LE((0.5 * (b.vel + wi.vel) - iso.wall_velocity).norm(), 1e-14);
}

TEST(Boundary, WallGhostSlopesMirrorNormalDerivative) {
    std::mt19937 rng(2);
    const Vec3 n = Vec3(0.3, -1, 0.5).normalized();
    const Frame f = Frame::from_normal(n);
    const Vec5 qi = cons(1.0, Vec3(0.1, 0.2, 0.3), 0.7);
    const Grad5 gi = random_grad(rng);
    const GhostState g = ghost_state(qi, gi, spec(PatchKind::wall_slip_adiabatic), n, kGas);
    // Density: normal derivative flips, tangential derivatives stay.
    EXPECT_NEAR(g.grad.col(0).dot(f.n), -gi.col(0).dot(f.n), 1e-14);
    EXPECT_NEAR(g.grad.col(0).dot(f.t1), gi.col(0).dot(f.t1), 1e-14);
    EXPECT_NEAR(g.grad.col(4).dot(f.t2), gi.col(4).dot(f.t2), 1e-14);
    // Normal momentum is odd under the mirror, so its normal derivative is kept.
    const Vec3 dmn = gi.middleCols<3>(1) * f.n, gmn = g.grad.middleCols<3>(1) * f.n;
    EXPECT_NEAR(f.n.dot(gmn), f.n.dot(dmn), 1e-14);

    const GhostState e = ghost_state(qi, gi, spec(PatchKind::supersonic_outlet), n, kGas);
    EXPECT_EQ(e.grad, gi);
}

TEST(Boundary, WallMassFluxVanishes) {
    CollisionParams visc;
    visc.model = FlowModel::viscous;
    visc.mu = 1e-3;
    for (const CollisionParams& prm : {CollisionParams{}, visc}) {
        for (PatchKind k : {PatchKind::wall_slip_adiabatic, PatchKind::wall_noslip_adiabatic,
                            PatchKind::wall_noslip_isothermal}) {
            PatchSpec s = spec(k);
            s.wall_lambda = kGas.gamma / 2.0;
            const Vec3 n = Vec3(1, 1, 2).normalized();
            const Frame f = Frame::from_normal(n);
            const Vec5 qi = cons(1.0, Vec3::Zero(), 1.0 / kGas.gamma);
            const GhostState g = ghost_state(qi, Grad5::Zero(), s, n, kGas);
            const InterfaceResult r = solve_interface(qi, Grad5::Zero(), g.q, g.grad, f, kGas, prm, 0.01, -1.0);
            EXPECT_LE(std::abs(r.flux[0]), 1e-10) << to_string(k);
        }
    }
}

TEST(Boundary, MirrorGhostCarriesNoMassFlux) {
    // Arbitrary interior point value and slopes: the geometric mirror image
    // carries no normal mass flux. No-slip ghosts reverse the tangential
    // velocity too, which is not a symmetry, so the residual zeroes their
    // mass flux instead.
    std::mt19937 rng(5);
    CollisionParams visc;
    visc.model = FlowModel::viscous;
    visc.mu = 2e-3;
    for (int trial = 0; trial < 10; ++trial) {
        const Vec3 n = Vec3(0.2 + trial, 1, -0.5).normalized();
        const Frame f = Frame::from_normal(n);
        const Vec5 qi = cons(1.0 + 0.05 * trial, Vec3(0.1, -0.2, 0.05 * trial), 0.7);
        const Grad5 gi = 0.2 * random_grad(rng);
        {
            const PatchKind k = PatchKind::wall_slip_adiabatic;
            const PatchSpec s = spec(k);
            const GhostState g = ghost_state(qi, gi, s, n, kGas);
            for (const CollisionParams& prm : {CollisionParams{}, visc}) {
                const InterfaceResult r = solve_interface(qi, gi, g.q, g.grad, f, kGas, prm, 0.02, -1.0);
                EXPECT_LE(std::abs(r.flux[0]), 1e-13) << to_string(k) << " trial " << trial;
            }
        }
    }
}

TEST(Boundary, IsothermalWallExchangesHeatNotMass) {
    const Vec3 n = Vec3(0.3, 1, 0.1).normalized();
    const Frame f = Frame::from_normal(n);
    PatchSpec s = spec(PatchKind::wall_noslip_isothermal);
    s.wall_lambda = kGas.gamma / 2.0;
    for (double p : {0.6, 1.0 / kGas.gamma, 0.9}) {
        const Vec5 qi = cons(1.0, Vec3::Zero(), p);
        const GhostState g = ghost_state(qi, Grad5::Zero(), s, n, kGas);
        const InterfaceResult r = solve_interface(qi, Grad5::Zero(), g.q, g.grad, f, kGas, CollisionParams{}, 0.01, -1.0);
        EXPECT_LE(std::abs(r.flux[0]), 1e-13) << p;
        // Hotter gas loses energy to the wall, colder gas gains it.
        const double ti = p, tw = 1.0 / kGas.gamma;
        if (std::abs(ti - tw) > 1e-12) EXPECT_GT(r.flux[4] * (ti - tw), 0.0) << p;
    }
}

TEST(Boundary, GhostGradientOfLinearMirrorField) {
    // Sliding wall through the origin with normal y: the ghost slope must be
    // the slope of the mirrored field rho(Rx), u_w - (u(Rx) - u_w), p(Rx).
    const Vec3 n = Vec3::UnitY(), uw(0.15, 0, 0);
    auto field = [](const Vec3& x) {
        return primitive_from_pressure(1.0 + 0.1 * x[0] - 0.2 * x[1], Vec3(0.1 + 0.3 * x[1], 0.05 * x[0], 0.02), 0.7 + 0.1 * x[1]);
    };
    auto ghost_field = [&](const Vec3& x) {
        const Vec3 rx(x[0], -x[1], x[2]);
        PrimitiveState w = field(rx);
        w.vel = uw - (w.vel - uw);
        return primitive_to_conserved(w, kGas);
    };
    const double h = 1e-6;
    Grad5 gi, gg;
    for (int i = 0; i < 3; ++i) {
        const Vec3 e = h * Vec3::Unit(i);
        gi.row(i) = (primitive_to_conserved(field(e), kGas) - primitive_to_conserved(field(-e), kGas)).transpose() / (2 * h);
        gg.row(i) = (ghost_field(e) - ghost_field(-e)).transpose() / (2 * h);
    }
    PatchSpec s = spec(PatchKind::wall_noslip_adiabatic);
    s.wall_velocity = uw;
    const GhostState g = ghost_state(primitive_to_conserved(field(Vec3::Zero()), kGas), gi, s, n, kGas);
    EXPECT_LE((g.q - ghost_field(Vec3::Zero())).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LE((g.grad - gg).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Boundary, SlipWallTangentialFlowHasNoMassFlux) {
    const Vec3 n = Vec3::UnitZ();
    const Frame f = Frame::from_normal(n);
    const Vec5 qi = cons(1.0, Vec3(0.4, -0.2, 0), 1.0 / kGas.gamma);
    const GhostState g = ghost_state(qi, Grad5::Zero(), spec(PatchKind::wall_slip_adiabatic), n, kGas);
    const InterfaceResult r = solve_interface(qi, Grad5::Zero(), g.q, g.grad, f, kGas, CollisionParams{}, 0.01, -1.0);
    EXPECT_LE(std::abs(r.flux[0]), 1e-14);
    EXPECT_NEAR(r.flux[3], 1.0 / kGas.gamma, 1e-12);  // pure pressure on the wall
}

TEST(Boundary, ValidationErrors) {
    EXPECT_THROW(spec(PatchKind::farfield_riemann).validate(), ConfigError);
    EXPECT_THROW(spec(PatchKind::supersonic_inlet).validate(), ConfigError);
    EXPECT_THROW(spec(PatchKind::wall_noslip_isothermal).validate(), ConfigError);
    EXPECT_THROW(spec(PatchKind::periodic).validate(), ConfigError);
    EXPECT_NO_THROW(spec(PatchKind::wall_slip_adiabatic).validate());
    EXPECT_THROW(ghost_state(Vec5::Ones(), Grad5::Zero(), spec(PatchKind::periodic), Vec3::UnitX(), kGas), SolverError);
}
