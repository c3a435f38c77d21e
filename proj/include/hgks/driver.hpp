#pragma once

// Outer steady-state loop and file output.

#include "hgks/config.hpp"
#include "hgks/implicit.hpp"
#include "hgks/mesh_io.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>

namespace hgks {

struct ResidualRecord {
    int step = 0;
    double time_s = 0.0;
    double res_rho_l1 = 0.0;
    double res_l2 = 0.0;
};

using ResidualHistory = std::vector<ResidualRecord>;

inline void write_residual_csv(std::ostream& out, const ResidualHistory& h) {
    out << "step,time_s,res_rho_l1,res_l2\n" << std::setprecision(17);
    for (const auto& r : h) out << r.step << ',' << r.time_s << ',' << r.res_rho_l1 << ',' << r.res_l2 << '\n';
}

inline void write_residual_csv(const std::string& path, const ResidualHistory& h) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out.imbue(std::locale::classic());
    write_residual_csv(out, h);
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

/// Legacy ASCII VTK unstructured grid with cell data rho, p, velocity, and
/// the density gradient when cell gradients are supplied.
inline void write_vtk(std::ostream& out, const Mesh& mesh, const SolutionField& sol, const Gas& gas,
                      bool with_gradients = false) {
    const std::size_t n = mesh.num_cells();
    if (sol.q.size() != n) throw std::invalid_argument("write_vtk: field size does not match the mesh");
    for (std::size_t c = 0; c < n; ++c) {
        if (!sol.q[c].allFinite())
            throw std::runtime_error("write_vtk: non-finite state in cell " + std::to_string(c) + ", refusing to write");
        if (with_gradients && !sol.grad.at(c).allFinite())
            throw std::runtime_error("write_vtk: non-finite gradient in cell " + std::to_string(c));
    }
    out.imbue(std::locale::classic());
    out << "# vtk DataFile Version 3.0\nhgks solution\nASCII\nDATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << mesh.nodes.size() << " double\n" << std::setprecision(17);
    for (const Vec3& x : mesh.nodes) out << x[0] << ' ' << x[1] << ' ' << x[2] << '\n';
    std::size_t size = 0;
    for (const Cell& c : mesh.cells) size += 1 + c.num_nodes;
    out << "CELLS " << n << ' ' << size << '\n';
    for (const Cell& c : mesh.cells) {
        out << c.num_nodes;
        for (int k = 0; k < c.num_nodes; ++k) out << ' ' << c.nodes[k];
        out << '\n';
    }
    out << "CELL_TYPES " << n << '\n';
    for (const Cell& c : mesh.cells) out << (c.kind == CellKind::tetrahedron ? 10 : 12) << '\n';
    out << "CELL_DATA " << n << '\n';
    out << "SCALARS rho double 1\nLOOKUP_TABLE default\n";
    for (const Vec5& q : sol.q) out << q[0] << '\n';
    out << "SCALARS p double 1\nLOOKUP_TABLE default\n";
    for (const Vec5& q : sol.q) out << pressure(q, gas) << '\n';
    out << "VECTORS velocity double\n";
    for (const Vec5& q : sol.q) out << q[1] / q[0] << ' ' << q[2] / q[0] << ' ' << q[3] / q[0] << '\n';
    if (with_gradients) {
        out << "VECTORS grad_rho double\n";
        for (const Grad5& g : sol.grad) out << g(0, 0) << ' ' << g(1, 0) << ' ' << g(2, 0) << '\n';
    }
}

inline void write_vtk(const std::string& path, const Mesh& mesh, const SolutionField& sol, const Gas& gas,
                      bool with_gradients = false) {
    std::ostringstream buf;
    write_vtk(buf, mesh, sol, gas, with_gradients);  // validate before touching the file
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << buf.str();
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

/// Mesh of a case with periodic pairs applied.
inline Mesh build_case_mesh(const CaseConfig& cfg) {
    Mesh m = cfg.mesh.file.empty() ? generate_box_mesh(cfg.mesh.box) : load_mesh(cfg.mesh.file);
    for (const auto& [a, b] : cfg.mesh.periodic) make_periodic(m, a, b);
    return m;
}

/// Boundary table indexed by mesh patch id. Every non-empty mesh patch needs
/// a spec and every spec must name a mesh patch.
inline std::vector<PatchSpec> patch_table(const Mesh& mesh, const CaseConfig& cfg) {
    std::vector<PatchSpec> table(mesh.patches.size());
    for (const auto& [name, spec] : cfg.patches) {
        const int id = mesh.patch_id(name);
        if (id < 0) throw ConfigError("patch '" + name + "' in [patches] does not exist in the mesh");
        table[id] = spec;
    }
    for (std::size_t p = 0; p < mesh.patches.size(); ++p) {
        if (mesh.patches[p].faces.empty()) continue;
        if (!cfg.patches.count(mesh.patches[p].name))
            throw ConfigError("mesh patch '" + mesh.patches[p].name + "' has no boundary condition in [patches]");
    }
    return table;
}

struct RunResult {
    SolutionField field;
    ResidualHistory history;
    bool converged = false;
    int steps = 0;
    std::vector<std::string> files;
};

struct RunOptions {
    std::ostream* log = nullptr;  ///< progress lines, optional
    int log_every = 100;
    /// Called after every step with the updated field; return false to stop.
    std::function<bool(int, const SolutionField&, const ResidualRecord&)> observer;
};

inline RunResult run_case(const CaseConfig& cfg, const Mesh& mesh, const RunOptions& opt = {}) {
    const Discretization disc(mesh, recon_kind(cfg.scheme), cfg.recon, cfg.gas, cfg.collision, patch_table(mesh, cfg));
    const ImplicitSolver solver(disc, cfg.scheme, cfg.solver);
    RunResult out;
    out.field = uniform_field(mesh.num_cells(), cfg.reference_conserved());
    const bool compact = cfg.scheme == SchemeMode::hweno_gmres;

    std::filesystem::path dir(cfg.output_dir);
    if (cfg.write_files) std::filesystem::create_directories(dir);
    auto snapshot = [&](int step) {
        if (!cfg.write_files) return;
        std::ostringstream name;
        name << cfg.prefix << '_' << std::setw(6) << std::setfill('0') << step << ".vtk";
        const std::string path = (dir / name.str()).string();
        write_vtk(path, mesh, out.field, cfg.gas, compact);
        out.files.push_back(path);
    };

    const auto t0 = std::chrono::steady_clock::now();
    int step = 0;
    for (; step < cfg.max_steps; ++step) {
        StepReport rep;
        try {
            rep = solver.advance(out.field, step);
        } catch (const UnphysicalState& e) {
            throw SolverError("step " + std::to_string(step) + ": " + e.what());
        }
        ResidualRecord rec{step, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(),
                           rep.res_rho_l1, rep.res_l2};
        out.history.push_back(rec);
        if (opt.log && (step % opt.log_every == 0))
            *opt.log << "step " << step << "  res_rho_l1 " << std::scientific << std::setprecision(4) << rec.res_rho_l1
                     << "  res_l2 " << rec.res_l2 << std::defaultfloat << "  t " << rec.time_s << " s\n";
        if (!std::isfinite(rec.res_rho_l1)) throw SolverError("step " + std::to_string(step) + ": residual is not finite");
        if (cfg.vtk_every > 0 && step > 0 && step % cfg.vtk_every == 0) snapshot(step);
        if (opt.observer && !opt.observer(step, out.field, rec)) {
            ++step;
            break;
        }
        if (step >= cfg.min_steps && rec.res_rho_l1 <= cfg.threshold) {
            out.converged = true;
            ++step;
            break;
        }
    }
    out.steps = step;
    snapshot(step);
    if (cfg.write_files) {
        const std::string csv = (dir / (cfg.prefix + "_residual.csv")).string();
        write_residual_csv(csv, out.history);
        out.files.push_back(csv);
    }
    return out;
}

inline RunResult run_case(const CaseConfig& cfg, const RunOptions& opt = {}) {
    const Mesh mesh = build_case_mesh(cfg);
    return run_case(cfg, mesh, opt);
}

}  // namespace hgks
