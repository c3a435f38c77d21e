#pragma once

// Fixed-seed comparisons of production routines against the brute-force
// references in oracles.hpp. Used by `hgks oracle <suite>` and by the tests.

#include "hgks/implicit.hpp"
#include "hgks/oracles.hpp"
#include "hgks/recon_hweno.hpp"

#include <functional>
#include <iomanip>
#include <map>
#include <ostream>
#include <random>

namespace hgks::oracle {

namespace detail {

inline OracleReport report(std::string name, std::string case_name, double value, double reference, double relerr,
                           double tol) {
    return OracleReport{std::move(name), std::move(case_name), value, reference, relerr, tol, relerr <= tol};
}

// Vector comparison, reported through the component with the largest error.
template <class V>
OracleReport vector_report(std::string name, std::string case_name, const V& value, const V& ref, double tol) {
    Eigen::Index k = 0;
    (value - ref).cwiseAbs().maxCoeff(&k);
    return report(std::move(name), std::move(case_name), value[k], ref[k],
                  relative_error(Eigen::VectorXd(value), Eigen::VectorXd(ref)), tol);
}

inline Vec5 random_conserved(std::mt19937& rng, const Gas& gas) {
    std::uniform_real_distribution<double> rho(0.5, 2.0), vel(-0.8, 0.8), p(0.4, 1.5);
    return primitive_to_conserved(primitive_from_pressure(rho(rng), Vec3(vel(rng), vel(rng), vel(rng)), p(rng)), gas);
}

}  // namespace detail

/// Tabulated moments (orders <= 6, full and half) against adaptive quadrature
/// over 200 random states, one row per state with its worst moment.
inline std::vector<OracleReport> moments_suite(unsigned seed = 2024) {
    const Gas gas;
    std::vector<OracleReport> out;
    const PrimitiveState w0{1.0, Vec3(0.7, 0, 0), 1.2};
    const MomentTable t0(w0, gas);
    out.push_back(detail::report("moments", "u0_full", t0.u(0), moment_quadrature(w0, gas, 0, 0, 0, 0),
                                 relative_error(t0.u(0), moment_quadrature(w0, gas, 0, 0, 0, 0)), 1e-10));
    out.push_back(detail::report("moments", "u1_full_U0.7", t0.u(1), 0.7, relative_error(t0.u(1), 0.7), 1e-10));
    const PrimitiveState w1{1.0, Vec3(0.3, 0, 0), 1.2};
    const double closed = 0.09 + 1.0 / 2.4;
    const double quad = moment_quadrature(w1, gas, 2, 0, 0, 0);
    out.push_back(detail::report("moments", "u2_quadrature_vs_closed_form", quad, closed, relative_error(quad, closed), 1e-10));

    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> rho(0.2, 3.0), vel(-2.0, 2.0), lam(0.1, 10.0);
    for (int i = 0; i < 200; ++i) {
        const PrimitiveState w{rho(rng), Vec3(vel(rng), vel(rng), vel(rng)), lam(rng)};
        const MomentTable mt(w, gas);
        OracleReport worst = detail::report("moments", "", 0, 0, -1, 1e-9);
        auto consider = [&](const std::string& what, double v, double r) {
            const double e = relative_error(v, r);
            if (e > worst.relerr) worst = detail::report("moments", "state" + std::to_string(i) + "_" + what, v, r, e, 1e-9);
        };
        for (Half h : {Half::full, Half::positive, Half::negative}) {
            const char* tag = h == Half::full ? "full" : (h == Half::positive ? "pos" : "neg");
            for (int p = 0; p <= 6; ++p)
                consider("u" + std::to_string(p) + "_" + tag, mt.u(p, h), moment_quadrature(w, gas, p, 0, 0, 0, h));
        }
        for (int q = 0; q <= 4; ++q) {
            consider("v" + std::to_string(q), mt.v(q), moment_quadrature(w, gas, 0, q, 0, 0));
            consider("w" + std::to_string(q), mt.w(q), moment_quadrature(w, gas, 0, 0, q, 0));
        }
        for (int s = 0; s <= 2; ++s) consider("xi" + std::to_string(2 * s), mt.xi(s), moment_quadrature(w, gas, 0, 0, 0, s));
        out.push_back(worst);
    }
    return out;
}

/// Time-integrated interface flux against 64-point Gauss-Legendre in time,
/// and the collisionless limit against KFVS, over 50 random interfaces.
inline std::vector<OracleReport> flux_suite(unsigned seed = 2024) {
    const Gas gas;
    std::vector<OracleReport> out;
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> d(-0.3, 0.3), taus(1e-4, 5e-3), dts(1e-3, 2e-2);
    const std::array<Vec5, 3> zero{Vec5::Zero(), Vec5::Zero(), Vec5::Zero()};
    for (int i = 0; i < 50; ++i) {
        const Vec5 ql = detail::random_conserved(rng, gas), qr = detail::random_conserved(rng, gas);
        std::array<Vec5, 3> dl, dr;
        for (int k = 0; k < 3; ++k)
            for (int c = 0; c < 5; ++c) {
                dl[k][c] = d(rng);
                dr[k][c] = d(rng);
            }
        const double tau = taus(rng), dt = dts(rng);
        const InterfaceReconstruction ir = make_interface(ql, dl, qr, dr, gas);
        out.push_back(detail::vector_report("time_quadrature_flux", "interface" + std::to_string(i),
                                            evolve_flux(ir, tau, dt), time_quadrature_flux(ir, tau, dt), 1e-8));
        const InterfaceReconstruction i0 = make_interface(ql, zero, qr, zero, gas);
        out.push_back(detail::vector_report("kfvs_limit", "interface" + std::to_string(i), evolve_flux(i0, 1e6 * dt, dt),
                                            kfvs_flux(i0.left.w, i0.right.w, gas), 1e-6));
    }
    return out;
}

/// Analytic normal Jacobian and Roe-split blocks against central differences.
inline std::vector<OracleReport> jacobian_suite(unsigned seed = 2024) {
    const Gas gas;
    std::vector<OracleReport> out;
    std::mt19937 rng(seed);
    std::normal_distribution<double> nd;
    auto flat = [](const Mat5& m) { return Eigen::Map<const Eigen::VectorXd>(m.data(), 25).eval(); };

    Mat5 lin;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) lin(i, j) = nd(rng);
    const Mat5 fdl = fd_jacobian([&](const Vec5& q) -> Vec5 { return lin * q; }, detail::random_conserved(rng, gas));
    out.push_back(detail::vector_report("fd_jacobian", "linear_flux", flat(fdl), flat(lin), 1e-8));

    for (int i = 0; i < 20; ++i) {
        const Vec5 qi = detail::random_conserved(rng, gas), qj = detail::random_conserved(rng, gas);
        const Vec3 n = Vec3(nd(rng), nd(rng), nd(rng)).normalized();
        const Mat5 j = normal_flux_jacobian(qi, n, gas);
        const Mat5 fd = fd_jacobian([&](const Vec5& q) { return normal_flux(q, n, gas); }, qi);
        out.push_back(detail::vector_report("euler_jacobian", "state" + std::to_string(i), flat(j), flat(fd), 1e-5));

        const double lam = face_spectral_radius(qi, qj, n, gas);
        const FaceBlocks b = roe_face_blocks(qi, qj, n, gas);
        const Mat5 fdi = fd_jacobian([&](const Vec5& q) -> Vec5 { return 0.5 * (normal_flux(q, n, gas) + lam * q); }, qi);
        const Mat5 fdj = fd_jacobian([&](const Vec5& q) -> Vec5 { return 0.5 * (normal_flux(q, n, gas) - lam * q); }, qj);
        out.push_back(detail::vector_report("roe_block_self", "state" + std::to_string(i), flat(b.self), flat(fdi), 1e-5));
        out.push_back(detail::vector_report("roe_block_neighbour", "state" + std::to_string(i), flat(b.other), flat(fdj), 1e-5));
        const FaceBlocks same = roe_face_blocks(qi, qi, n, gas);
        out.push_back(detail::vector_report("roe_split_sum", "state" + std::to_string(i), flat(Mat5(same.self + same.other)),
                                            flat(j), 1e-13));
    }
    return out;
}

/// Dense LU checks and GMRES against the dense solution on a 48-cell mesh.
inline std::vector<OracleReport> linear_suite(unsigned seed = 2024) {
    std::vector<OracleReport> out;
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1, 1);
    auto rand_vec = [&](Eigen::Index n) {
        Eigen::VectorXd v(n);
        for (Eigen::Index i = 0; i < n; ++i) v[i] = u(rng);
        return v;
    };

    const Eigen::VectorXd b = rand_vec(40);
    const Eigen::VectorXd xi = dense_solve(Eigen::MatrixXd::Identity(40, 40), b);
    out.push_back(detail::vector_report("dense_solve", "identity", xi, b, 1e-15));

    Eigen::MatrixXd m(60, 60);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
    const Eigen::MatrixXd spd = m * m.transpose() + 60.0 * Eigen::MatrixXd::Identity(60, 60);
    const Eigen::VectorXd bs = rand_vec(60);
    const Eigen::VectorXd xs = dense_solve(spd, bs);
    const double res = (spd * xs - bs).norm() / bs.norm();
    out.push_back(detail::report("dense_solve", "random_spd_residual", res, 0.0, res, 1e-12));

    bool threw = false;
    try {
        dense_solve(Eigen::MatrixXd::Zero(5, 5), Eigen::VectorXd::Ones(5));
    } catch (const std::runtime_error&) {
        threw = true;
    }
    out.push_back(detail::report("dense_solve", "singular_rejected", threw ? 1 : 0, 1, threw ? 0.0 : 1.0, 0.0));

    // Roe matrix of a random flow on a perturbed 2x2x2 tet box (48 cells).
    const Gas gas;
    BoxSpec spec;
    spec.divisions = {2, 2, 2};
    spec.split = BoxSplit::tet;
    spec.perturbation = 0.2;
    spec.seed = seed;
    const Mesh mesh = generate_box_mesh(spec);
    std::vector<Vec5> q(mesh.num_cells());
    for (auto& x : q) x = detail::random_conserved(rng, gas);
    std::vector<double> dt(q.size());
    for (std::size_t c = 0; c < q.size(); ++c) dt[c] = local_time_step(mesh, static_cast<int>(c), q[c], gas, 2.0);
    const BlockJacobian a = assemble_jacobian(mesh, q, dt, gas);
    const BigVec rhs = rand_vec(a.size());
    GmresOptions opt;
    opt.krylov = 30;
    opt.restarts = 10;
    opt.check_orthogonality = true;
    GmresReport rep;
    const BigVec x = gmres_solve(a, rhs, opt, 2, &rep);
    out.push_back(detail::vector_report("gmres", "roe_matrix_48_cells", Eigen::VectorXd(x), dense_solve(a.dense(), rhs), 1e-8));
    out.push_back(detail::report("gmres", "arnoldi_orthogonality", rep.max_orthogonality, 0.0, rep.max_orthogonality, 1e-10));
    double worst_rise = 0.0;
    for (const auto& h : rep.history)
        for (std::size_t k = 1; k < h.size(); ++k) worst_rise = std::max(worst_rise, (h[k] - h[k - 1]) / h[0]);
    out.push_back(detail::report("gmres", "residual_non_increasing", worst_rise, 0.0, std::max(worst_rise, 0.0), 1e-14));
    return out;
}

/// Gauss-theorem gradients of an exactly linear field from exact interface
/// values, on perturbed tet and hex boxes.
inline std::vector<OracleReport> gradient_suite(unsigned seed = 2024) {
    std::vector<OracleReport> out;
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1, 1);
    Eigen::Matrix<double, 3, 5> g;
    Vec5 c0;
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 5; ++k) g(i, k) = u(rng);
    for (int k = 0; k < 5; ++k) c0[k] = u(rng);
    for (BoxSplit split : {BoxSplit::tet, BoxSplit::hex}) {
        BoxSpec spec;
        spec.divisions = {3, 3, 3};
        spec.split = split;
        spec.perturbation = 0.25;
        spec.seed = seed;
        const Mesh mesh = generate_box_mesh(spec);
        FacePointValues values(mesh.faces.size());
        for (std::size_t f = 0; f < mesh.faces.size(); ++f)
            for (const QuadPoint& qp : mesh.faces[f].quad) values[f].push_back(c0 + g.transpose() * qp.x);
        const GradientField grad = update_gradients(mesh, values);
        double worst = 0.0;
        for (const Grad5& gc : grad) worst = std::max(worst, (gc - g).cwiseAbs().maxCoeff());
        const char* name = split == BoxSplit::tet ? "linear_field_tet" : "linear_field_hex";
        out.push_back(detail::report("gradient_update", name, worst, 0.0, worst / g.cwiseAbs().maxCoeff(), 1e-12));
    }
    return out;
}

inline const std::map<std::string, std::function<std::vector<OracleReport>()>>& suites() {
    static const std::map<std::string, std::function<std::vector<OracleReport>()>> s{
        {"moments", [] { return moments_suite(); }},   {"flux", [] { return flux_suite(); }},
        {"jacobian", [] { return jacobian_suite(); }}, {"linear", [] { return linear_suite(); }},
        {"gradient", [] { return gradient_suite(); }},
    };
    return s;
}

inline std::vector<OracleReport> run_suite(const std::string& name) {
    if (name == "all") {
        std::vector<OracleReport> all;
        for (const auto& [n, f] : suites()) {
            auto r = f();
            all.insert(all.end(), r.begin(), r.end());
        }
        return all;
    }
    auto it = suites().find(name);
    if (it == suites().end()) throw std::invalid_argument("unknown oracle suite '" + name + "'");
    return it->second();
}

inline void print_table(std::ostream& out, const std::vector<OracleReport>& rows) {
    out << "oracle,case,value,reference,relerr,pass\n";
    const auto flags = out.flags();
    out << std::setprecision(12);
    for (const auto& r : rows)
        out << r.name << ',' << r.case_name << ',' << r.value << ',' << r.reference << ',' << std::scientific
            << std::setprecision(3) << r.relerr << std::defaultfloat << std::setprecision(12) << ','
            << (r.pass ? "true" : "false") << '\n';
    out.flags(flags);
}

}  // namespace hgks::oracle
