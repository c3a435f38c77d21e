#pragma once

// ugks-mesh ASCII files. Coordinates are written with 17 significant digits
// so a reload reproduces the geometry bit for bit.

#include "hgks/mesh.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

namespace hgks {

namespace detail {

class MeshReader {
public:
    MeshReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

    // Next non-empty line, with '#' comments stripped.
    std::istringstream line() {
        std::string s;
        while (std::getline(in_, s)) {
            ++lineno_;
            if (auto h = s.find('#'); h != std::string::npos) s.erase(h);
            if (s.find_first_not_of(" \t\r") != std::string::npos) return std::istringstream(s);
        }
        fail("unexpected end of file");
    }

    std::size_t count(const std::string& keyword) {
        auto ls = line();
        std::string kw;
        long long n = -1;
        if (!(ls >> kw >> n) || kw != keyword || n < 0) fail("expected '" + keyword + " <count>'");
        expect_end(ls);
        return static_cast<std::size_t>(n);
    }

    template <class T>
    void values(std::istringstream& ls, T* out, int n) {
        for (int i = 0; i < n; ++i)
            if (!(ls >> out[i])) fail("expected " + std::to_string(n) + " values");
    }

    void expect_end(std::istringstream& ls) {
        std::string extra;
        if (ls >> extra) fail("unexpected trailing token '" + extra + "'");
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw MeshError(source_ + ":" + std::to_string(lineno_) + ": " + msg);
    }

private:
    std::istream& in_;
    std::string source_;
    int lineno_ = 0;
};

}  // namespace detail

inline MeshData read_mesh_data(std::istream& in, const std::string& source = "<stream>") {
    detail::MeshReader r(in, source);
    {
        auto ls = r.line();
        std::string magic;
        int version = 0;
        if (!(ls >> magic >> version) || magic != "ugks-mesh" || version != 1) r.fail("bad header, expected 'ugks-mesh 1'");
        r.expect_end(ls);
    }
    MeshData d;
    d.nodes.resize(r.count("nodes"));
    for (Vec3& x : d.nodes) {
        auto ls = r.line();
        r.values(ls, x.data(), 3);
        r.expect_end(ls);
    }
    d.tets.resize(r.count("tets"));
    for (auto& t : d.tets) {
        auto ls = r.line();
        r.values(ls, t.data(), 4);
        r.expect_end(ls);
    }
    d.hexes.resize(r.count("hexes"));
    for (auto& h : d.hexes) {
        auto ls = r.line();
        r.values(ls, h.data(), 8);
        r.expect_end(ls);
    }
    d.patches.resize(r.count("patches"));
    for (auto& p : d.patches) {
        auto ls = r.line();
        long long nf = -1;
        if (!(ls >> p.name >> nf) || nf < 0) r.fail("expected '<patch-name> <face-count>'");
        r.expect_end(ls);
        p.faces.resize(static_cast<std::size_t>(nf));
        for (auto& f : p.faces) {
            auto fl = r.line();
            int id;
            while (fl >> id) f.push_back(id);
            if (!fl.eof()) r.fail("non-integer node id in patch '" + p.name + "'");
            if (f.size() != 3 && f.size() != 4) r.fail("patch faces need 3 or 4 node ids");
        }
    }
    std::string rest;
    if (in >> rest) r.fail("trailing content after the last patch");
    return d;
}

inline Mesh load_mesh(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MeshError("cannot open mesh file '" + path + "'");
    return build_mesh(read_mesh_data(in, path));
}

inline void write_mesh_data(std::ostream& out, const MeshData& d) {
    out << "ugks-mesh 1\n";
    out << "nodes " << d.nodes.size() << '\n' << std::setprecision(17);
    for (const Vec3& x : d.nodes) out << x[0] << ' ' << x[1] << ' ' << x[2] << '\n';
    out << "tets " << d.tets.size() << '\n';
    for (const auto& t : d.tets) out << t[0] << ' ' << t[1] << ' ' << t[2] << ' ' << t[3] << '\n';
    out << "hexes " << d.hexes.size() << '\n';
    for (const auto& h : d.hexes) {
        for (int i = 0; i < 8; ++i) out << h[i] << (i < 7 ? ' ' : '\n');
    }
    out << "patches " << d.patches.size() << '\n';
    for (const auto& p : d.patches) {
        out << p.name << ' ' << p.faces.size() << '\n';
        for (const auto& f : p.faces) {
            for (std::size_t i = 0; i < f.size(); ++i) out << f[i] << (i + 1 < f.size() ? ' ' : '\n');
        }
    }
}

inline void write_mesh(const std::string& path, const MeshData& d) {
    std::ofstream out(path);
    if (!out) throw MeshError("cannot write mesh file '" + path + "'");
    write_mesh_data(out, d);
    if (!out) throw MeshError("write failed for '" + path + "'");
}

/// Summary used by `check`: counts, volume and closure diagnostics.
struct MeshSummary {
    std::size_t tets = 0, hexes = 0, faces = 0, boundary_faces = 0;
    double volume = 0.0;
    double min_volume = 0.0;
    double max_closure = 0.0;  ///< max over cells of |sum_faces S n|
    std::vector<std::pair<std::string, std::size_t>> patches;
};

inline MeshSummary summarize(const Mesh& m) {
    MeshSummary s;
    s.min_volume = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < m.num_cells(); ++c) {
        const Cell& cell = m.cells[c];
        (cell.kind == CellKind::tetrahedron ? s.tets : s.hexes)++;
        s.volume += cell.volume;
        s.min_volume = std::min(s.min_volume, cell.volume);
        Vec3 sum = Vec3::Zero();
        for (int k = 0; k < cell.num_faces; ++k) {
            const CellFace cf = m.cell_face(static_cast<int>(c), k);
            sum += m.faces[cf.face].area * cf.normal;
        }
        s.max_closure = std::max(s.max_closure, sum.norm());
    }
    s.faces = m.faces.size();
    for (const Face& f : m.faces) s.boundary_faces += f.boundary() ? 1 : 0;
    for (const Patch& p : m.patches) s.patches.emplace_back(p.name, p.faces.size());
    return s;
}

}  // namespace hgks
