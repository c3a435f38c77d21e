#pragma once

// Case configuration: INI sections [mesh] [scheme] [physics] [solver]
// [patches] [output], key = value, '#' comments. Parsing is Boost's INI
// reader; everything here is conversion and validation.

#include "hgks/boundary.hpp"
#include "hgks/gks_flux.hpp"
#include "hgks/implicit.hpp"
#include "hgks/mesh.hpp"
#include "hgks/recon_basis.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace hgks {

struct MeshSource {
    std::string file;  ///< empty: generated box
    BoxSpec box;
    std::vector<std::pair<std::string, std::string>> periodic;
};

struct CaseConfig {
    MeshSource mesh;
    SchemeMode scheme = SchemeMode::weno_gmres;
    ReconParams recon;
    Gas gas;
    CollisionParams collision;
    PrimitiveState reference{1.0, Vec3::Zero(), 0.7};  ///< initial and far-field state
    SolverSettings solver;
    double threshold = 1e-10;  ///< on the L1 density residual
    int max_steps = 1000;
    int min_steps = 10;  ///< convergence is not tested before this many updates
    std::map<std::string, PatchSpec> patches;
    std::string output_dir = ".";
    std::string prefix = "case";
    int vtk_every = 100;  ///< 0: final snapshot only
    bool write_files = true;

    Vec5 reference_conserved() const { return primitive_to_conserved(reference, gas); }
};

namespace detail {

using Section = std::map<std::string, std::string>;
using Sections = std::map<std::string, Section>;

inline Sections read_sections(std::istream& in, const std::string& source) {
    std::stringstream clean;
    std::string line;
    while (std::getline(in, line)) {
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        clean << line << '\n';
    }
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::ini_parser::read_ini(clean, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(source + ": line " + std::to_string(e.line()) + ": " + e.message());
    }
    static const std::set<std::string> known{"mesh", "scheme", "physics", "solver", "patches", "output"};
    Sections out;
    for (const auto& [name, sec] : tree) {
        if (!known.count(name)) {
            if (sec.empty()) throw ConfigError(source + ": key '" + name + "' outside of any section");
            throw ConfigError(source + ": unknown section [" + name + "]");
        }
        for (const auto& [key, val] : sec) out[name][key] = val.data();
    }
    return out;
}

class SectionReader {
public:
    SectionReader(const Sections& all, const std::string& name) : name_(name) {
        if (auto it = all.find(name); it != all.end()) sec_ = it->second;
    }
    ~SectionReader() noexcept(false) {
        if (std::uncaught_exceptions() == 0 && !sec_.empty())
            throw ConfigError("unknown key '" + sec_.begin()->first + "' in [" + name_ + "]");
    }

    std::optional<std::string> take(const std::string& key) {
        auto it = sec_.find(key);
        if (it == sec_.end()) return std::nullopt;
        std::string v = it->second;
        sec_.erase(it);
        return v;
    }

    double number(const std::string& key, double def) {
        auto v = take(key);
        return v ? parse_number(key, *v) : def;
    }

    int integer(const std::string& key, int def) {
        const double d = number(key, def);
        if (d != std::floor(d)) throw ConfigError("[" + name_ + "] " + key + " must be an integer");
        return static_cast<int>(d);
    }

    Vec3 vec3(const std::string& key, const Vec3& def) {
        auto v = take(key);
        if (!v) return def;
        return parse_vec3(key, *v);
    }

    Vec3 parse_vec3(const std::string& key, const std::string& s) const {
        std::istringstream is(s);
        Vec3 x;
        std::string extra;
        if (!(is >> x[0] >> x[1] >> x[2]) || (is >> extra))
            throw ConfigError("[" + name_ + "] " + key + " needs three numbers");
        return x;
    }

    double parse_number(const std::string& key, const std::string& s) const {
        std::istringstream is(s);
        double d;
        std::string extra;
        if (!(is >> d) || (is >> extra)) throw ConfigError("[" + name_ + "] " + key + ": not a number: '" + s + "'");
        return d;
    }

    /// Remaining entries, consumed.
    Section rest() { return std::exchange(sec_, {}); }

private:
    std::string name_;
    Section sec_;
};

}  // namespace detail

inline std::optional<SchemeMode> parse_scheme(const std::string& s) {
    for (SchemeMode m : {SchemeMode::weno_gmres, SchemeMode::hweno_gmres, SchemeMode::weno_lusgs})
        if (to_string(m) == s) return m;
    return std::nullopt;
}

inline CaseConfig parse_config(std::istream& in, const std::string& source = "<config>",
                               const std::filesystem::path& base = {}) {
    const detail::Sections secs = detail::read_sections(in, source);
    CaseConfig cfg;

    {
        detail::SectionReader r(secs, "mesh");
        if (auto f = r.take("file")) {
            std::filesystem::path p(*f);
            cfg.mesh.file = p.is_absolute() || base.empty() ? p.string() : (base / p).string();
        }
        if (auto b = r.take("box")) {
            if (!cfg.mesh.file.empty()) throw ConfigError("[mesh] give either file or box, not both");
            const Vec3 d = r.parse_vec3("box", *b);
            for (int k = 0; k < 3; ++k) {
                if (d[k] < 1 || d[k] != std::floor(d[k])) throw ConfigError("[mesh] box divisions must be integers >= 1");
                cfg.mesh.box.divisions[k] = static_cast<int>(d[k]);
            }
        } else if (cfg.mesh.file.empty()) {
            throw ConfigError("[mesh] needs 'file' or 'box'");
        }
        const std::string split = r.take("split").value_or("hex");
        if (split != "hex" && split != "tet") throw ConfigError("[mesh] split must be hex or tet");
        cfg.mesh.box.split = split == "tet" ? BoxSplit::tet : BoxSplit::hex;
        cfg.mesh.box.extent = r.vec3("extent", Vec3::Ones());
        cfg.mesh.box.lower = r.vec3("origin", Vec3::Zero());
        cfg.mesh.box.perturbation = r.number("perturbation", 0.0);
        cfg.mesh.box.seed = static_cast<unsigned>(r.integer("seed", 1));
    }
    {
        detail::SectionReader r(secs, "scheme");
        if (auto m = r.take("mode")) {
            auto s = parse_scheme(*m);
            if (!s) throw ConfigError("[scheme] unknown mode '" + *m + "'");
            cfg.scheme = *s;
        }
        cfg.recon.linear_weight = r.number("linear_weight", cfg.recon.linear_weight);
        cfg.recon.epsilon = r.number("epsilon", cfg.recon.epsilon);
    }
    {
        detail::SectionReader r(secs, "physics");
        cfg.gas.gamma = r.number("gamma", 1.4);
        if (!(cfg.gas.gamma > 1.0 && cfg.gas.gamma <= 5.0 / 3.0)) throw ConfigError("[physics] gamma must be in (1, 5/3]");
        const std::string model = r.take("model").value_or("inviscid");
        if (model != "inviscid" && model != "viscous") throw ConfigError("[physics] model must be inviscid or viscous");
        cfg.collision.model = model == "viscous" ? FlowModel::viscous : FlowModel::inviscid;
        cfg.collision.epsilon = r.number("tau_epsilon", cfg.collision.epsilon);
        cfg.collision.c = r.number("tau_jump", cfg.collision.c);

        const double rho = r.number("rho", 1.0);
        const double p = r.number("pressure", 1.0 / cfg.gas.gamma);
        if (!(rho > 0.0 && p > 0.0)) throw ConfigError("[physics] rho and pressure must be positive");
        const double a = std::sqrt(cfg.gas.gamma * p / rho);
        Vec3 vel = r.vec3("velocity", Vec3::Zero());
        if (auto m = r.take("mach")) {
            Vec3 dir = r.vec3("direction", Vec3::UnitX());
            if (dir.norm() == 0.0) throw ConfigError("[physics] direction must be non-zero");
            vel = r.parse_number("mach", *m) * a * dir.normalized();
        }
        cfg.reference = primitive_from_pressure(rho, vel, p);

        const double mu = r.number("mu", -1.0);
        const double re = r.number("reynolds", -1.0);
        if (mu >= 0.0 && re > 0.0) throw ConfigError("[physics] give either mu or reynolds");
        if (re > 0.0) {
            const double speed = r.number("reference_speed", vel.norm());
            const double length = r.number("reference_length", 1.0);
            if (!(speed > 0.0)) throw ConfigError("[physics] reynolds needs a positive reference_speed");
            cfg.collision.mu = rho * speed * length / re;
        } else {
            cfg.collision.mu = std::max(mu, 0.0);
        }
        if (cfg.collision.model == FlowModel::viscous && !(cfg.collision.mu > 0.0))
            throw ConfigError("[physics] viscous model needs mu or reynolds");
    }
    {
        detail::SectionReader r(secs, "solver");
        cfg.solver.cfl = r.number("cfl", cfg.solver.cfl);
        cfg.solver.krylov = r.integer("krylov", cfg.solver.krylov);
        cfg.solver.restarts = r.integer("restarts", cfg.solver.restarts);
        cfg.solver.jacobi_iterations = r.integer("jacobi_iterations", cfg.solver.jacobi_iterations);
        cfg.solver.gmres_rel_tol = r.number("gmres_tolerance", cfg.solver.gmres_rel_tol);
        const std::string ts = r.take("time_step").value_or("local");
        if (ts != "local" && ts != "global") throw ConfigError("[solver] time_step must be local or global");
        cfg.solver.global_time_step = ts == "global";
        cfg.threshold = r.number("threshold", cfg.threshold);
        cfg.max_steps = r.integer("max_steps", cfg.max_steps);
        cfg.min_steps = r.integer("min_steps", cfg.min_steps);
        if (!(cfg.solver.cfl > 0.0) || cfg.solver.krylov < 1 || cfg.solver.restarts < 1 ||
            cfg.solver.jacobi_iterations < 0 || cfg.max_steps < 0)
            throw ConfigError("[solver] cfl, krylov and restarts must be positive");
    }
    {
        detail::SectionReader r(secs, "patches");
        const detail::Section all = r.rest();
        for (const auto& [key, val] : all) {
            if (key.find('.') != std::string::npos) continue;
            auto kind = parse_patch_kind(val);
            if (!kind) throw ConfigError("[patches] patch '" + key + "': unknown kind '" + val + "'");
            PatchSpec s;
            s.name = key;
            s.kind = *kind;
            s.wall_lambda = cfg.reference.lambda;
            if (needs_reference(*kind)) s.reference = cfg.reference_conserved();
            cfg.patches[key] = s;
        }
        const double a_ref = std::sqrt(cfg.gas.gamma * cfg.reference.pressure() / cfg.reference.rho);
        std::map<std::string, Vec3> directions;
        std::map<std::string, double> machs;
        for (const auto& [key, val] : all) {
            const auto dot = key.find('.');
            if (dot == std::string::npos) continue;
            const std::string name = key.substr(0, dot), opt = key.substr(dot + 1);
            auto it = cfg.patches.find(name);
            if (it == cfg.patches.end()) throw ConfigError("[patches] option '" + key + "' for undeclared patch '" + name + "'");
            PatchSpec& s = it->second;
            if (opt == "velocity") s.wall_velocity = r.parse_vec3(key, val);
            else if (opt == "mach") machs[name] = r.parse_number(key, val);
            else if (opt == "direction") directions[name] = r.parse_vec3(key, val);
            else if (opt == "lambda") s.wall_lambda = r.parse_number(key, val);
            else if (opt == "temperature") s.wall_lambda = 1.0 / (2.0 * r.parse_number(key, val));
            else if (opt == "partner") s.partner = val;
            else throw ConfigError("[patches] unknown option '" + key + "'");
        }
        // Lid speed given as a Mach number of the reference sound speed.
        for (const auto& [name, ma] : machs) {
            const Vec3 dir = directions.count(name) ? directions[name] : Vec3::UnitX();
            cfg.patches[name].wall_velocity = ma * a_ref * dir.normalized();
        }
        // Periodic partners may be named on one side only.
        for (auto& [name, s] : cfg.patches) {
            if (s.kind != PatchKind::periodic || s.partner.empty()) continue;
            auto p = cfg.patches.find(s.partner);
            if (p == cfg.patches.end() || p->second.kind != PatchKind::periodic || p->first == name)
                throw ConfigError("[patches] periodic patch '" + name + "' needs a periodic partner");
            if (p->second.partner.empty()) p->second.partner = name;
            if (p->second.partner != name)
                throw ConfigError("[patches] periodic pairing of '" + name + "' is not symmetric");
        }
        for (auto& [name, s] : cfg.patches) {
            if (!is_wall(s.kind) && s.wall_velocity.norm() > 0.0)
                throw ConfigError("[patches] patch '" + name + "': velocity only applies to walls");
            s.validate();
            if (s.kind == PatchKind::periodic && name < s.partner) cfg.mesh.periodic.emplace_back(name, s.partner);
        }
    }
    {
        detail::SectionReader r(secs, "output");
        if (auto d = r.take("dir")) {
            std::filesystem::path p(*d);
            cfg.output_dir = p.is_absolute() || base.empty() ? p.string() : (base / p).string();
        }
        cfg.prefix = r.take("prefix").value_or(cfg.prefix);
        cfg.vtk_every = r.integer("vtk_every", cfg.vtk_every);
        if (auto w = r.take("write")) {
            if (*w != "true" && *w != "false") throw ConfigError("[output] write must be true or false");
            cfg.write_files = *w == "true";
        }
    }
    return cfg;
}

inline CaseConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    return parse_config(in, path, std::filesystem::path(path).parent_path());
}

}  // namespace hgks
