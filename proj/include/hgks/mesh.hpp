#pragma once

// Unstructured tetrahedral / hexahedral meshes: raw connectivity, derived
// geometry (volumes, centroids, second moments, face frames and quadrature),
// face connectivity with boundary patches and periodic pairing.

#include "hgks/core.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace hgks {

enum class CellKind : std::uint8_t { tetrahedron, hexahedron };

/// Connectivity as read from a file or produced by a generator.
struct MeshData {
    struct PatchFaces {
        std::string name;
        std::vector<std::vector<int>> faces;  // 3 or 4 node ids each
    };
    std::vector<Vec3> nodes;
    std::vector<std::array<int, 4>> tets;
    std::vector<std::array<int, 8>> hexes;  // VTK hexahedron ordering
    std::vector<PatchFaces> patches;
};

struct QuadPoint {
    Vec3 x = Vec3::Zero();
    double w = 0.0;
    /// Share of the surface integral of n dS at this point, owner outward.
    /// Sums to area * n; exact for bilinear quads, unlike w * area * n.
    Vec3 sn = Vec3::Zero();
};

struct Cell {
    CellKind kind = CellKind::tetrahedron;
    std::array<int, 8> nodes{};
    int num_nodes = 0;
    double volume = 0.0;
    Vec3 centroid = Vec3::Zero();
    /// Average of (x - c)(x - c)^T over the cell.
    Mat3 second_moment = Mat3::Zero();
    double h = 0.0;  ///< volume^(1/3)
    std::array<int, 6> faces{};
    /// True where this cell is the owner of faces[k] (normal points outward).
    std::array<bool, 6> owns{};
    int num_faces = 0;
};

struct Face {
    std::array<int, 4> nodes{};
    int num_nodes = 0;
    int owner = -1;
    int neighbor = -1;  ///< -1 on boundary faces
    int patch = -1;     ///< boundary patch id, -1 on interior faces
    double area = 0.0;
    Vec3 centroid = Vec3::Zero();
    Frame frame;  ///< frame.n is the unit normal, owner to neighbour
    std::vector<QuadPoint> quad;
    /// Translation applied to the neighbour's geometry to place it next to the
    /// owner (non-zero only across periodic pairs).
    Vec3 shift = Vec3::Zero();

    bool boundary() const { return neighbor < 0; }
};

struct Patch {
    std::string name;
    std::vector<int> faces;
};

/// View of one face from one of its cells.
struct CellFace {
    int face = -1;
    int neighbor = -1;   ///< cell across the face, -1 on boundary
    Vec3 normal;         ///< outward from the viewing cell
    Vec3 shift;          ///< translation of the neighbour's geometry
    bool owner = true;
};

struct Mesh {
    MeshData data;
    std::vector<Vec3> nodes;
    std::vector<Cell> cells;
    std::vector<Face> faces;
    std::vector<Patch> patches;

    std::size_t num_cells() const { return cells.size(); }

    CellFace cell_face(int c, int k) const {
        const Cell& cell = cells[c];
        const Face& f = faces[cell.faces[k]];
        CellFace cf;
        cf.face = cell.faces[k];
        cf.owner = cell.owns[k];
        if (cf.owner) {
            cf.neighbor = f.neighbor;
            cf.normal = f.frame.n;
            cf.shift = f.shift;
        } else {
            cf.neighbor = f.owner;
            cf.normal = -f.frame.n;
            cf.shift = -f.shift;
        }
        return cf;
    }

    int patch_id(const std::string& name) const {
        for (std::size_t i = 0; i < patches.size(); ++i)
            if (patches[i].name == name) return static_cast<int>(i);
        return -1;
    }

    double total_volume() const {
        double v = 0.0;
        for (const Cell& c : cells) v += c.volume;
        return v;
    }
};

// ---------------------------------------------------------------------------
// Reference-element tables

namespace detail {

// Local faces of a tetrahedron (face k is opposite node k).
inline constexpr std::array<std::array<int, 3>, 4> kTetFaces{{{1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}}};

// Local faces of a VTK hexahedron: bottom, top, then the four lateral faces
// in cyclic order around the bottom face.
inline constexpr std::array<std::array<int, 4>, 6> kHexFaces{
    {{0, 3, 2, 1}, {4, 5, 6, 7}, {0, 1, 5, 4}, {1, 2, 6, 5}, {2, 3, 7, 6}, {3, 0, 4, 7}}};

inline std::array<int, 4> face_key(const int* ids, int n) {
    std::array<int, 4> k{std::numeric_limits<int>::max(), std::numeric_limits<int>::max(),
                         std::numeric_limits<int>::max(), std::numeric_limits<int>::max()};
    std::copy(ids, ids + n, k.begin());
    std::sort(k.begin(), k.end());
    return k;
}

inline void trilinear(const std::array<Vec3, 8>& x, double r, double s, double t, Vec3& pos, Mat3& jac) {
    const double N[8] = {(1 - r) * (1 - s) * (1 - t), r * (1 - s) * (1 - t), r * s * (1 - t), (1 - r) * s * (1 - t),
                         (1 - r) * (1 - s) * t,       r * (1 - s) * t,       r * s * t,       (1 - r) * s * t};
    const double dr[8] = {-(1 - s) * (1 - t), (1 - s) * (1 - t), s * (1 - t), -s * (1 - t),
                          -(1 - s) * t,       (1 - s) * t,       s * t,       -s * t};
    const double ds[8] = {-(1 - r) * (1 - t), -r * (1 - t), r * (1 - t), (1 - r) * (1 - t),
                          -(1 - r) * t,       -r * t,       r * t,       (1 - r) * t};
    const double dt[8] = {-(1 - r) * (1 - s), -r * (1 - s), -r * s, -(1 - r) * s,
                          (1 - r) * (1 - s),  r * (1 - s),  r * s,  (1 - r) * s};
    pos.setZero();
    jac.setZero();
    for (int a = 0; a < 8; ++a) {
        pos += N[a] * x[a];
        jac.col(0) += dr[a] * x[a];
        jac.col(1) += ds[a] * x[a];
        jac.col(2) += dt[a] * x[a];
    }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Geometry

/// Face quadrature exact to degree 2 on triangles (3-point symmetric rule)
/// and degree 3 on planar quadrilaterals (2x2 Gauss). Weights sum to one.
inline std::vector<QuadPoint> face_quadrature(const std::vector<Vec3>& v) {
    std::vector<QuadPoint> q;
    if (v.size() == 3) {
        const double area = 0.5 * (v[1] - v[0]).cross(v[2] - v[0]).norm();
        if (!(area > 0.0)) throw MeshError("degenerate triangular face (zero area)");
        const double a = 2.0 / 3.0, b = 1.0 / 6.0;
        const Vec3 sn = (v[1] - v[0]).cross(v[2] - v[0]) / 6.0;
        q.push_back({a * v[0] + b * v[1] + b * v[2], 1.0 / 3.0, sn});
        q.push_back({b * v[0] + a * v[1] + b * v[2], 1.0 / 3.0, sn});
        q.push_back({b * v[0] + b * v[1] + a * v[2], 1.0 / 3.0, sn});
        return q;
    }
    if (v.size() != 4) throw MeshError("faces must have 3 or 4 nodes");
    const double g = 0.5 / std::sqrt(3.0);
    const double pts[2] = {0.5 - g, 0.5 + g};
    double total = 0.0;
    for (double s : pts) {
        for (double r : pts) {
            const Vec3 x = (1 - r) * (1 - s) * v[0] + r * (1 - s) * v[1] + r * s * v[2] + (1 - r) * s * v[3];
            const Vec3 dr = (1 - s) * (v[1] - v[0]) + s * (v[2] - v[3]);
            const Vec3 ds = (1 - r) * (v[3] - v[0]) + r * (v[2] - v[1]);
            const double jac = dr.cross(ds).norm();
            q.push_back({x, 0.25 * jac, 0.25 * dr.cross(ds)});
            total += 0.25 * jac;
        }
    }
    if (!(total > 0.0)) throw MeshError("degenerate quadrilateral face (zero area)");
    for (QuadPoint& p : q) p.w /= total;
    return q;
}

inline void compute_tet_geometry(Cell& c, const std::vector<Vec3>& nodes) {
    const Vec3& x0 = nodes[c.nodes[0]];
    const Vec3& x1 = nodes[c.nodes[1]];
    const Vec3& x2 = nodes[c.nodes[2]];
    const Vec3& x3 = nodes[c.nodes[3]];
    c.volume = (x1 - x0).dot((x2 - x0).cross(x3 - x0)) / 6.0;
    c.centroid = 0.25 * (x0 + x1 + x2 + x3);
    c.second_moment.setZero();
    for (int a = 0; a < 4; ++a) {
        const Vec3 d = nodes[c.nodes[a]] - c.centroid;
        c.second_moment += d * d.transpose();
    }
    c.second_moment /= 20.0;
}

// 3x3x3 Gauss on the trilinear map: exact for quadratic integrands on any
// trilinear hexahedron.
inline void compute_hex_geometry(Cell& c, const std::vector<Vec3>& nodes) {
    std::array<Vec3, 8> x;
    for (int a = 0; a < 8; ++a) x[a] = nodes[c.nodes[a]];
    const double g = std::sqrt(0.6);
    const double pts[3] = {0.5 - 0.5 * g, 0.5, 0.5 + 0.5 * g};
    const double wts[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
    std::vector<std::pair<Vec3, double>> qp;
    qp.reserve(27);
    for (int k = 0; k < 3; ++k)
        for (int j = 0; j < 3; ++j)
            for (int i = 0; i < 3; ++i) {
                Vec3 pos;
                Mat3 jac;
                detail::trilinear(x, pts[i], pts[j], pts[k], pos, jac);
                qp.emplace_back(pos, wts[i] * wts[j] * wts[k] * jac.determinant());
            }
    c.volume = 0.0;
    Vec3 m1 = Vec3::Zero();
    for (const auto& [pos, w] : qp) {
        c.volume += w;
        m1 += w * pos;
    }
    c.centroid = m1 / c.volume;
    c.second_moment.setZero();
    for (const auto& [pos, w] : qp) {
        const Vec3 d = pos - c.centroid;
        c.second_moment += w * d * d.transpose();
    }
    c.second_moment /= c.volume;
}

// ---------------------------------------------------------------------------
// Assembly

/// Builds cells, faces and patches from raw connectivity and validates the
/// result: positive volumes, at most two cells per face and every boundary
/// face covered by exactly one patch.
inline Mesh build_mesh(MeshData data) {
    Mesh mesh;
    mesh.nodes = data.nodes;
    const int nn = static_cast<int>(data.nodes.size());
    for (const Vec3& x : data.nodes)
        if (!x.allFinite()) throw MeshError("non-finite node coordinate");

    auto check_ids = [nn](const int* ids, int n) {
        for (int i = 0; i < n; ++i)
            if (ids[i] < 0 || ids[i] >= nn) throw MeshError("node id out of range: " + std::to_string(ids[i]));
    };

    for (const auto& t : data.tets) {
        check_ids(t.data(), 4);
        Cell c;
        c.kind = CellKind::tetrahedron;
        c.num_nodes = 4;
        std::copy(t.begin(), t.end(), c.nodes.begin());
        c.num_faces = 4;
        mesh.cells.push_back(c);
    }
    for (const auto& hx : data.hexes) {
        check_ids(hx.data(), 8);
        Cell c;
        c.kind = CellKind::hexahedron;
        c.num_nodes = 8;
        std::copy(hx.begin(), hx.end(), c.nodes.begin());
        c.num_faces = 6;
        mesh.cells.push_back(c);
    }

    for (std::size_t ci = 0; ci < mesh.cells.size(); ++ci) {
        Cell& c = mesh.cells[ci];
        if (c.kind == CellKind::tetrahedron)
            compute_tet_geometry(c, mesh.nodes);
        else
            compute_hex_geometry(c, mesh.nodes);
        if (!(c.volume > 0.0)) {
            std::ostringstream os;
            os << "inverted or degenerate cell " << ci << " (volume " << c.volume << ")";
            throw MeshError(os.str());
        }
        c.h = std::cbrt(c.volume);
    }

    std::map<std::array<int, 4>, int> lookup;
    for (std::size_t ci = 0; ci < mesh.cells.size(); ++ci) {
        Cell& c = mesh.cells[ci];
        for (int k = 0; k < c.num_faces; ++k) {
            int ids[4];
            int n = 0;
            if (c.kind == CellKind::tetrahedron) {
                for (int a : detail::kTetFaces[k]) ids[n++] = c.nodes[a];
            } else {
                for (int a : detail::kHexFaces[k]) ids[n++] = c.nodes[a];
            }
            const auto key = detail::face_key(ids, n);
            auto it = lookup.find(key);
            if (it == lookup.end()) {
                Face f;
                f.num_nodes = n;
                std::copy(ids, ids + n, f.nodes.begin());
                f.owner = static_cast<int>(ci);
                const int fid = static_cast<int>(mesh.faces.size());
                mesh.faces.push_back(f);
                lookup.emplace(key, fid);
                c.faces[k] = fid;
                c.owns[k] = true;
            } else {
                Face& f = mesh.faces[it->second];
                if (f.neighbor >= 0) throw MeshError("non-conforming mesh: face shared by more than two cells");
                f.neighbor = static_cast<int>(ci);
                c.faces[k] = it->second;
                c.owns[k] = false;
            }
        }
    }

    for (Face& f : mesh.faces) {
        std::vector<Vec3> v;
        for (int a = 0; a < f.num_nodes; ++a) v.push_back(mesh.nodes[f.nodes[a]]);
        Vec3 area_vec;
        if (f.num_nodes == 3)
            area_vec = 0.5 * (v[1] - v[0]).cross(v[2] - v[0]);
        else
            area_vec = 0.5 * (v[2] - v[0]).cross(v[3] - v[1]);
        f.area = area_vec.norm();
        if (!(f.area > 0.0)) throw MeshError("degenerate face (zero area)");
        f.quad = face_quadrature(v);
        f.centroid.setZero();
        for (const QuadPoint& q : f.quad) f.centroid += q.w * q.x;
        Vec3 n = area_vec / f.area;
        if (n.dot(f.centroid - mesh.cells[f.owner].centroid) < 0.0) {
            n = -n;
            std::reverse(f.nodes.begin(), f.nodes.begin() + f.num_nodes);
            for (QuadPoint& q : f.quad) q.sn = -q.sn;
        }
        f.frame = Frame::from_normal(n);
    }

    for (const auto& pf : data.patches) {
        Patch p;
        p.name = pf.name;
        const int pid = static_cast<int>(mesh.patches.size());
        for (const auto& ids : pf.faces) {
            if (ids.size() != 3 && ids.size() != 4)
                throw MeshError("patch '" + pf.name + "': boundary faces need 3 or 4 nodes");
            check_ids(ids.data(), static_cast<int>(ids.size()));
            const auto key = detail::face_key(ids.data(), static_cast<int>(ids.size()));
            auto it = lookup.find(key);
            if (it == lookup.end())
                throw MeshError("patch '" + pf.name + "': face does not match any cell face");
            Face& f = mesh.faces[it->second];
            if (f.neighbor >= 0) throw MeshError("patch '" + pf.name + "': face is interior");
            if (f.patch >= 0) throw MeshError("patch '" + pf.name + "': face already assigned to a patch");
            f.patch = pid;
            p.faces.push_back(it->second);
        }
        mesh.patches.push_back(std::move(p));
    }
    for (std::size_t fi = 0; fi < mesh.faces.size(); ++fi) {
        if (mesh.faces[fi].boundary() && mesh.faces[fi].patch < 0)
            throw MeshError("non-conforming mesh: boundary face " + std::to_string(fi) + " belongs to no patch");
    }
    mesh.data = std::move(data);
    return mesh;
}

/// Glues patch `a` to patch `b` by translation: every face of `a` is paired
/// with the face of `b` whose centroid differs by the mean offset. Paired
/// faces become interior faces owned by the `a`-side cell; both patches end
/// up empty.
inline void make_periodic(Mesh& mesh, const std::string& a, const std::string& b) {
    const int pa = mesh.patch_id(a), pb = mesh.patch_id(b);
    if (pa < 0 || pb < 0) throw MeshError("periodic pairing: unknown patch '" + (pa < 0 ? a : b) + "'");
    if (pa == pb) throw MeshError("periodic pairing: patch '" + a + "' paired with itself");
    auto& fa = mesh.patches[pa].faces;
    auto& fb = mesh.patches[pb].faces;
    if (fa.size() != fb.size() || fa.empty())
        throw MeshError("periodic pairing: patches '" + a + "' and '" + b + "' differ in face count");
    Vec3 ca = Vec3::Zero(), cb = Vec3::Zero();
    double scale = 0.0;
    for (int f : fa) {
        ca += mesh.faces[f].centroid;
        scale = std::max(scale, std::sqrt(mesh.faces[f].area));
    }
    for (int f : fb) cb += mesh.faces[f].centroid;
    const Vec3 offset = (cb - ca) / static_cast<double>(fa.size());
    const double tol = 1e-8 * std::max(scale, offset.norm());

    std::vector<int> partner(fa.size(), -1);
    std::vector<bool> used(fb.size(), false);
    for (std::size_t i = 0; i < fa.size(); ++i) {
        const Vec3 target = mesh.faces[fa[i]].centroid + offset;
        for (std::size_t j = 0; j < fb.size(); ++j) {
            if (!used[j] && (mesh.faces[fb[j]].centroid - target).norm() < tol) {
                partner[i] = static_cast<int>(j);
                used[j] = true;
                break;
            }
        }
        if (partner[i] < 0) throw MeshError("periodic pairing: no partner for a face of patch '" + a + "'");
    }

    std::vector<int> remap(mesh.faces.size());
    for (std::size_t i = 0; i < remap.size(); ++i) remap[i] = static_cast<int>(i);
    std::vector<bool> dead(mesh.faces.size(), false);
    for (std::size_t i = 0; i < fa.size(); ++i) {
        Face& keep = mesh.faces[fa[i]];
        const Face& drop = mesh.faces[fb[partner[i]]];
        keep.neighbor = drop.owner;
        keep.patch = -1;
        keep.shift = -offset;
        dead[fb[partner[i]]] = true;
        remap[fb[partner[i]]] = fa[i];
        Cell& other = mesh.cells[drop.owner];
        for (int k = 0; k < other.num_faces; ++k) {
            if (other.faces[k] == fb[partner[i]] && other.owns[k]) {
                other.faces[k] = fa[i];
                other.owns[k] = false;
            }
        }
    }
    std::vector<int> compact(mesh.faces.size(), -1);
    std::vector<Face> faces;
    for (std::size_t i = 0; i < mesh.faces.size(); ++i) {
        if (dead[i]) continue;
        compact[i] = static_cast<int>(faces.size());
        faces.push_back(mesh.faces[i]);
    }
    for (Cell& c : mesh.cells)
        for (int k = 0; k < c.num_faces; ++k) c.faces[k] = compact[c.faces[k]];
    mesh.faces = std::move(faces);
    fa.clear();
    fb.clear();
    for (Patch& p : mesh.patches)
        for (int& f : p.faces) f = compact[f];
}

// ---------------------------------------------------------------------------
// Generators

enum class BoxSplit { hex, tet };

struct BoxSpec {
    Vec3 lower = Vec3::Zero();
    Vec3 extent = Vec3::Ones();
    std::array<int, 3> divisions{1, 1, 1};
    BoxSplit split = BoxSplit::hex;
    /// Random displacement of interior nodes, as a fraction of the spacing.
    double perturbation = 0.0;
    unsigned seed = 1;
};

/// Structured box with patches xmin, xmax, ymin, ymax, zmin, zmax. The tet
/// split uses the six-tetrahedron Kuhn decomposition of every hexahedron,
/// which is conforming across cells.
inline MeshData generate_box_data(const BoxSpec& spec) {
    for (int d = 0; d < 3; ++d) {
        if (!(spec.extent[d] > 0.0)) throw MeshError("box extent must be positive");
        if (spec.divisions[d] < 1) throw MeshError("box divisions must be at least 1");
    }
    const int nx = spec.divisions[0], ny = spec.divisions[1], nz = spec.divisions[2];
    auto nid = [&](int i, int j, int k) { return i + (nx + 1) * (j + (ny + 1) * k); };
    const Vec3 dx(spec.extent[0] / nx, spec.extent[1] / ny, spec.extent[2] / nz);

    MeshData m;
    std::mt19937 rng(spec.seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int k = 0; k <= nz; ++k)
        for (int j = 0; j <= ny; ++j)
            for (int i = 0; i <= nx; ++i) {
                Vec3 x = spec.lower + Vec3(i * dx[0], j * dx[1], k * dx[2]);
                const bool interior = i > 0 && i < nx && j > 0 && j < ny && k > 0 && k < nz;
                if (spec.perturbation > 0.0 && interior) {
                    for (int d = 0; d < 3; ++d) x[d] += spec.perturbation * dx[d] * uni(rng);
                }
                m.nodes.push_back(x);
            }

    // Kuhn paths from corner 0 to corner 6 (local VTK numbering).
    static constexpr std::array<std::array<int, 4>, 6> kKuhn{
        {{0, 1, 2, 6}, {0, 2, 3, 6}, {0, 3, 7, 6}, {0, 7, 4, 6}, {0, 4, 5, 6}, {0, 5, 1, 6}}};
    for (int k = 0; k < nz; ++k)
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                const std::array<int, 8> h{nid(i, j, k),         nid(i + 1, j, k),         nid(i + 1, j + 1, k),
                                           nid(i, j + 1, k),     nid(i, j, k + 1),         nid(i + 1, j, k + 1),
                                           nid(i + 1, j + 1, k + 1), nid(i, j + 1, k + 1)};
                if (spec.split == BoxSplit::hex) {
                    m.hexes.push_back(h);
                } else {
                    for (const auto& t : kKuhn) {
                        std::array<int, 4> tet{h[t[0]], h[t[1]], h[t[2]], h[t[3]]};
                        const Vec3& x0 = m.nodes[tet[0]];
                        const double det =
                            (m.nodes[tet[1]] - x0).dot((m.nodes[tet[2]] - x0).cross(m.nodes[tet[3]] - x0));
                        if (det < 0.0) std::swap(tet[1], tet[2]);
                        m.tets.push_back(tet);
                    }
                }
            }

    auto add_quad = [&](MeshData::PatchFaces& p, int a, int b, int c, int d) {
        if (spec.split == BoxSplit::hex) {
            p.faces.push_back({a, b, c, d});
        } else {
            // Kuhn split cuts every boundary quad along the diagonal through
            // the lexicographically smallest and largest corners, which are
            // a and c in the orderings below.
            p.faces.push_back({a, b, c});
            p.faces.push_back({a, c, d});
        }
    };
    MeshData::PatchFaces xmin{"xmin", {}}, xmax{"xmax", {}}, ymin{"ymin", {}}, ymax{"ymax", {}},
        zmin{"zmin", {}}, zmax{"zmax", {}};
    for (int k = 0; k < nz; ++k)
        for (int j = 0; j < ny; ++j) {
            add_quad(xmin, nid(0, j, k), nid(0, j + 1, k), nid(0, j + 1, k + 1), nid(0, j, k + 1));
            add_quad(xmax, nid(nx, j, k), nid(nx, j + 1, k), nid(nx, j + 1, k + 1), nid(nx, j, k + 1));
        }
    for (int k = 0; k < nz; ++k)
        for (int i = 0; i < nx; ++i) {
            add_quad(ymin, nid(i, 0, k), nid(i + 1, 0, k), nid(i + 1, 0, k + 1), nid(i, 0, k + 1));
            add_quad(ymax, nid(i, ny, k), nid(i + 1, ny, k), nid(i + 1, ny, k + 1), nid(i, ny, k + 1));
        }
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            add_quad(zmin, nid(i, j, 0), nid(i + 1, j, 0), nid(i + 1, j + 1, 0), nid(i, j + 1, 0));
            add_quad(zmax, nid(i, j, nz), nid(i + 1, j, nz), nid(i + 1, j + 1, nz), nid(i, j + 1, nz));
        }
    m.patches = {xmin, xmax, ymin, ymax, zmin, zmax};
    return m;
}

inline Mesh generate_box_mesh(const BoxSpec& spec) { return build_mesh(generate_box_data(spec)); }

inline Mesh generate_box_mesh(const Vec3& extent, std::array<int, 3> divisions, BoxSplit split) {
    BoxSpec s;
    s.extent = extent;
    s.divisions = divisions;
    s.split = split;
    return generate_box_mesh(s);
}

/// Index of the cell containing x, or -1 (linear scan, for sampling).
inline int locate_cell(const Mesh& mesh, const Vec3& x) {
    for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
        bool inside = true;
        for (int k = 0; k < mesh.cells[c].num_faces && inside; ++k) {
            const CellFace cf = mesh.cell_face(static_cast<int>(c), k);
            const Vec3& p = mesh.faces[cf.face].centroid;
            if (cf.normal.dot(x - p) > 1e-12) inside = false;
        }
        if (inside) return static_cast<int>(c);
    }
    return -1;
}

}  // namespace hgks
