// hgks command line: run a case, generate or check a mesh, run the oracles.

#include "hgks/driver.hpp"
#include "hgks/oracle_suites.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace hgks;

namespace {

int cmd_run(const std::string& path, bool quiet) {
    const CaseConfig cfg = load_config(path);
    const Mesh mesh = build_case_mesh(cfg);
    std::cout << "mesh: " << mesh.num_cells() << " cells, scheme " << to_string(cfg.scheme) << '\n';
    RunOptions opt;
    if (!quiet) opt.log = &std::cout;
    const RunResult r = run_case(cfg, mesh, opt);
    const ResidualRecord& last = r.history.back();
    std::cout << (r.converged ? "converged" : "stopped at max_steps") << " after " << r.steps << " steps, res_rho_l1 "
              << last.res_rho_l1 << ", " << last.time_s << " s\n";
    for (const auto& f : r.files) std::cout << "wrote " << f << '\n';
    return r.converged ? 0 : 2;
}

int cmd_check(const std::string& path) {
    const Mesh mesh = load_mesh(path);
    const MeshSummary s = summarize(mesh);
    std::cout << "cells " << s.tets + s.hexes << " (tets " << s.tets << ", hexes " << s.hexes << ")\n"
              << "faces " << s.faces << " (boundary " << s.boundary_faces << ")\n"
              << std::setprecision(12) << "volume " << s.volume << "\nmin cell volume " << s.min_volume
              << "\nmax closure |sum S n| " << s.max_closure << '\n';
    for (const auto& [name, n] : s.patches) std::cout << "patch " << name << ' ' << n << '\n';
    if (!(s.min_volume > 0.0)) throw MeshError("non-positive cell volume");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hgks: implicit gas-kinetic finite volume solver"};
    app.require_subcommand(1);

    std::string config;
    bool quiet = false;
    auto* run = app.add_subcommand("run", "run a case from an INI config");
    run->add_option("config", config, "case file")->required();
    run->add_flag("-q,--quiet", quiet, "no per-step log");

    BoxSpec box;
    std::string split = "tet", out;
    std::vector<double> extent{1, 1, 1}, origin{0, 0, 0};
    auto* gen = app.add_subcommand("genmesh", "generate a structured mesh");
    auto* gbox = gen->add_subcommand("box", "unit-style box split into tets or hexes");
    gen->require_subcommand(1);
    gbox->add_option("--nx", box.divisions[0])->required()->check(CLI::PositiveNumber);
    gbox->add_option("--ny", box.divisions[1])->required()->check(CLI::PositiveNumber);
    gbox->add_option("--nz", box.divisions[2])->required()->check(CLI::PositiveNumber);
    gbox->add_option("--split", split)->check(CLI::IsMember({"tet", "hex"}));
    gbox->add_option("--out", out)->required();
    gbox->add_option("--extent", extent)->expected(3);
    gbox->add_option("--origin", origin)->expected(3);
    gbox->add_option("--perturbation", box.perturbation, "interior node jitter, fraction of spacing")
        ->check(CLI::Range(0.0, 0.45));
    gbox->add_option("--seed", box.seed);

    std::string mesh_path;
    auto* check = app.add_subcommand("check", "load a mesh and print diagnostics");
    check->add_option("mesh", mesh_path)->required();

    std::string suite;
    auto* orc = app.add_subcommand("oracle", "run oracle comparisons and print the table");
    orc->add_option("suite", suite)->required()->check(
        CLI::IsMember({"all", "moments", "flux", "jacobian", "linear", "gradient"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*run) return cmd_run(config, quiet);
        if (*gbox) {
            box.split = split == "tet" ? BoxSplit::tet : BoxSplit::hex;
            box.extent = Vec3(extent[0], extent[1], extent[2]);
            box.lower = Vec3(origin[0], origin[1], origin[2]);
            const MeshData d = generate_box_data(box);
            write_mesh(out, d);
            std::cout << "wrote " << out << ": " << d.tets.size() << " tets, " << d.hexes.size() << " hexes\n";
            return 0;
        }
        if (*check) return cmd_check(mesh_path);
        if (*orc) {
            const auto rows = oracle::run_suite(suite);
            oracle::print_table(std::cout, rows);
            for (const auto& r : rows)
                if (!r.pass) return 1;
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
