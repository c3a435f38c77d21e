#include "hgks/mesh.hpp"
#include "hgks/stencil.hpp"

#include <gtest/gtest.h>

#include <functional>

using namespace hgks;

namespace {

Mesh box(int n, BoxSplit split, double perturb = 0.0) {
    BoxSpec s;
    s.divisions = {n, n, n};
    s.split = split;
    s.perturbation = perturb;
    return generate_box_mesh(s);
}

double face_integral(const std::vector<Vec3>& v, const std::function<double(const Vec3&)>& f, double area) {
    double sum = 0.0;
    for (const QuadPoint& q : face_quadrature(v)) sum += q.w * f(q.x);
    return sum * area;
}

}  // namespace

TEST(Mesh, BoxCounts) {
    EXPECT_EQ(box(20, BoxSplit::tet).num_cells(), 48000u);
    const Mesh one = box(1, BoxSplit::hex);
    ASSERT_EQ(one.num_cells(), 1u);
    EXPECT_NEAR(one.cells[0].volume, 1.0, 1e-15);
    EXPECT_NEAR(box(2, BoxSplit::tet).total_volume(), 1.0, 1e-14);
    EXPECT_NEAR(box(3, BoxSplit::hex, 0.2).total_volume(), 1.0, 1e-13);
    EXPECT_NEAR(box(3, BoxSplit::tet, 0.2).total_volume(), 1.0, 1e-13);
}

TEST(Mesh, BadExtent) {
    BoxSpec s;
    s.extent = Vec3(1, 0, 1);
    EXPECT_THROW(generate_box_data(s), MeshError);
    s.extent = Vec3::Ones();
    s.divisions = {0, 1, 1};
    EXPECT_THROW(generate_box_data(s), MeshError);
}

TEST(Mesh, ClosedCellsAndFrames) {
    for (BoxSplit split : {BoxSplit::hex, BoxSplit::tet}) {
        const Mesh m = box(3, split, 0.25);
        Vec3 total = Vec3::Zero();
        for (std::size_t c = 0; c < m.num_cells(); ++c) {
            Vec3 sum = Vec3::Zero();
            for (int k = 0; k < m.cells[c].num_faces; ++k) {
                const CellFace cf = m.cell_face(static_cast<int>(c), k);
                sum += m.faces[cf.face].area * cf.normal;
            }
            EXPECT_LE(sum.norm(), 1e-12);
            total += sum;
            // Centroid inside: every outward normal sees it behind the face.
            for (int k = 0; k < m.cells[c].num_faces; ++k) {
                const CellFace cf = m.cell_face(static_cast<int>(c), k);
                EXPECT_LT(cf.normal.dot(m.cells[c].centroid - m.faces[cf.face].centroid), 0.0);
            }
            EXPECT_NEAR(m.cells[c].h, std::cbrt(m.cells[c].volume), 1e-15);
        }
        EXPECT_LE(total.norm(), 1e-12);
        for (const Face& f : m.faces) {
            const Frame& fr = f.frame;
            EXPECT_NEAR(fr.n.norm(), 1.0, 1e-12);
            EXPECT_NEAR(fr.t1.norm(), 1.0, 1e-12);
            EXPECT_NEAR(fr.t2.norm(), 1.0, 1e-12);
            EXPECT_NEAR(fr.n.dot(fr.t1), 0.0, 1e-12);
            EXPECT_NEAR(fr.n.dot(fr.t2), 0.0, 1e-12);
            EXPECT_NEAR(fr.t1.dot(fr.t2), 0.0, 1e-12);
            double w = 0.0;
            for (const QuadPoint& q : f.quad) {
                w += q.w;
                // Perturbed hexes have warped quads; triangles are always planar.
                if (f.num_nodes == 3) EXPECT_NEAR(fr.n.dot(q.x - f.centroid), 0.0, 1e-12);
            }
            EXPECT_NEAR(w, 1.0, 1e-14);
        }
    }
}

TEST(Mesh, BoundaryFacesBelongToPatches) {
    const Mesh m = box(2, BoxSplit::tet);
    std::size_t nb = 0;
    for (const Face& f : m.faces) {
        if (f.boundary()) {
            ++nb;
            EXPECT_GE(f.patch, 0);
        }
    }
    std::size_t np = 0;
    for (const Patch& p : m.patches) np += p.faces.size();
    EXPECT_EQ(nb, np);
    EXPECT_EQ(nb, 6u * 4u * 2u);
}

TEST(Mesh, SingleAndPairOfTets) {
    MeshData d;
    d.nodes = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1), Vec3(1, 1, 1)};
    d.tets = {{0, 1, 2, 3}};
    d.patches = {{"all", {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}}};
    const Mesh one = build_mesh(d);
    EXPECT_EQ(one.num_cells(), 1u);
    EXPECT_EQ(one.faces.size(), 4u);
    for (const Face& f : one.faces) EXPECT_TRUE(f.boundary());
    EXPECT_NEAR(one.cells[0].volume, 1.0 / 6.0, 1e-15);

    d.tets.push_back({1, 2, 3, 4});
    d.patches = {{"all", {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 4}, {1, 3, 4}, {2, 3, 4}}}};
    const Mesh two = build_mesh(d);
    int interior = 0;
    for (const Face& f : two.faces) {
        if (!f.boundary()) {
            ++interior;
            EXPECT_GE(f.owner, 0);
            EXPECT_NE(f.owner, f.neighbor);
            // Normal points from owner to neighbour.
            EXPECT_GT(f.frame.n.dot(two.cells[f.neighbor].centroid - two.cells[f.owner].centroid), 0.0);
        }
    }
    EXPECT_EQ(interior, 1);
}

TEST(Mesh, InvalidMeshesRejected) {
    MeshData d;
    d.nodes = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};
    d.tets = {{0, 2, 1, 3}};  // inverted
    d.patches = {{"all", {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}}};
    EXPECT_THROW(build_mesh(d), MeshError);
    d.tets = {{0, 1, 2, 3}};
    d.patches = {{"all", {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}}}};  // one face uncovered
    EXPECT_THROW(build_mesh(d), MeshError);
    d.tets = {{0, 1, 2, 7}};
    EXPECT_THROW(build_mesh(d), MeshError);
}

TEST(Mesh, FaceQuadratureExactness) {
    const std::vector<Vec3> tri{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)};
    EXPECT_NEAR(face_integral(tri, [](const Vec3&) { return 1.0; }, 0.5), 0.5, 1e-15);
    // Monomials of degree <= 2 on the unit right triangle: int x^a y^b = a! b! / (a+b+2)!
    const double fact[] = {1, 1, 2, 6, 24};
    for (int a = 0; a <= 2; ++a)
        for (int b = 0; a + b <= 2; ++b) {
            const double exact = fact[a] * fact[b] / fact[a + b + 2];
            EXPECT_NEAR(face_integral(tri, [&](const Vec3& x) { return std::pow(x[0], a) * std::pow(x[1], b); }, 0.5),
                        exact, 1e-13);
        }
    const std::vector<Vec3> sq{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 1, 0), Vec3(0, 1, 0)};
    EXPECT_NEAR(face_integral(sq, [](const Vec3& x) { return x[0] * x[0] * x[1] * x[1]; }, 1.0), 1.0 / 9.0, 1e-13);
    EXPECT_NEAR(face_integral(sq, [](const Vec3& x) { return x[0] * x[0] * x[0]; }, 1.0), 0.25, 1e-13);
    for (int a = 0; a <= 3; ++a)
        for (int b = 0; b <= 3; ++b)
            EXPECT_NEAR(face_integral(sq, [&](const Vec3& x) { return std::pow(x[0], a) * std::pow(x[1], b); }, 1.0),
                        1.0 / ((a + 1) * (b + 1)), 1e-13);
    const std::vector<Vec3> line{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(2, 0, 0)};
    EXPECT_THROW(face_quadrature(line), MeshError);
}

TEST(Mesh, PointAreaVectorsCloseWarpedCells) {
    const Mesh m = box(3, BoxSplit::hex, 0.3);
    for (const Face& f : m.faces) {
        Vec3 sum = Vec3::Zero();
        for (const QuadPoint& q : f.quad) sum += q.sn;
        EXPECT_LE((sum - f.area * f.frame.n).norm(), 1e-14);
    }
    // Divergence theorem for x: sum over faces of x (n dS)_x is the volume.
    for (int c = 0; c < static_cast<int>(m.num_cells()); ++c) {
        Mat3 acc = Mat3::Zero();
        for (int k = 0; k < m.cells[c].num_faces; ++k) {
            const CellFace cf = m.cell_face(c, k);
            const Face& f = m.faces[cf.face];
            const double sign = cf.normal.dot(f.frame.n) > 0 ? 1.0 : -1.0;
            for (const QuadPoint& q : f.quad) acc += sign * q.sn * q.x.transpose();
        }
        EXPECT_LE((acc - m.cells[c].volume * Mat3::Identity()).cwiseAbs().maxCoeff(), 1e-14);
    }
}

TEST(Mesh, RegularHexGeometry) {
    BoxSpec s;
    s.divisions = {2, 2, 2};
    s.perturbation = 0.0;
    const Mesh h = generate_box_mesh(s);
    for (const Cell& c : h.cells) {
        EXPECT_NEAR(c.volume, 0.125, 1e-15);
        EXPECT_NEAR(c.second_moment(0, 0), 0.25 / 12.0, 1e-15);
        EXPECT_NEAR(c.second_moment(0, 1), 0.0, 1e-15);
    }
}

TEST(Mesh, PeriodicPairing) {
    Mesh m = box(3, BoxSplit::tet);
    const std::size_t nfaces = m.faces.size();
    make_periodic(m, "xmin", "xmax");
    EXPECT_EQ(m.faces.size(), nfaces - 18);
    for (const Face& f : m.faces) {
        if (f.shift.norm() > 0.0) {
            EXPECT_FALSE(f.boundary());
            const Vec3 d = m.cells[f.neighbor].centroid + f.shift - m.cells[f.owner].centroid;
            EXPECT_GT(d.dot(f.frame.n), 0.0);
            EXPECT_LT(d.norm(), 0.6);
        }
    }
    EXPECT_THROW(make_periodic(m, "ymin", "nope"), MeshError);
}

TEST(Mesh, LocateCell) {
    const Mesh m = box(3, BoxSplit::tet);
    for (std::size_t c = 0; c < m.num_cells(); c += 7)
        EXPECT_EQ(locate_cell(m, m.cells[c].centroid), static_cast<int>(c));
}

TEST(Stencil, InteriorHex) {
    const Mesh m = box(5, BoxSplit::hex);
    const int c = locate_cell(m, Vec3(0.5, 0.5, 0.5));
    const CellStencils cs = build_cell_stencils(m, c);
    ASSERT_EQ(cs.weno_sub.size(), 8u);
    for (const Stencil& s : cs.weno_sub) {
        EXPECT_EQ(s.size(), 4u);
        EXPECT_EQ(s[0].cell, c);
    }
    EXPECT_EQ(cs.hweno_big.size(), 7u);
    EXPECT_EQ(cs.hweno_sub.size(), 6u);
    for (const Stencil& s : cs.hweno_sub) EXPECT_EQ(s.size(), 2u);
    EXPECT_EQ(cs.weno_big.size(), 1u + 6u + 18u);
    EXPECT_FALSE(cs.weno_linear_fallback);
}

TEST(Stencil, InteriorTet) {
    const Mesh m = box(4, BoxSplit::tet);
    const int c = locate_cell(m, Vec3(0.4, 0.45, 0.55));
    const CellStencils cs = build_cell_stencils(m, c);
    ASSERT_EQ(cs.weno_sub.size(), 4u);
    for (const Stencil& s : cs.weno_sub) {
        ASSERT_EQ(s.size(), 7u);
        EXPECT_EQ(s[0].cell, c);
        for (std::size_t k = 1; k < s.size(); ++k) EXPECT_NE(s[k].cell, c);
        for (std::size_t a = 0; a < s.size(); ++a)
            for (std::size_t b = a + 1; b < s.size(); ++b) EXPECT_FALSE(s[a].same(s[b]));
    }
    EXPECT_EQ(cs.hweno_sub.size(), 4u);
    // Second-level neighbours may coincide; check deduplication and coverage.
    for (std::size_t a = 0; a < cs.weno_big.size(); ++a)
        for (std::size_t b = a + 1; b < cs.weno_big.size(); ++b) EXPECT_FALSE(cs.weno_big[a].same(cs.weno_big[b]));
    for (const Stencil& s : cs.weno_sub)
        for (const StencilEntry& e : s) EXPECT_TRUE(detail::contains(cs.weno_big, e));
    EXPECT_GE(cs.weno_big.size(), 11u);
}

TEST(Stencil, CornerHexOfSmallBox) {
    const Mesh m = box(2, BoxSplit::hex);
    const CellStencils cs = build_cell_stencils(m, 0);
    // Reachable in two face hops from a corner of a 2x2x2 box: all but the far corner.
    EXPECT_EQ(cs.weno_big.size(), 7u);
    EXPECT_EQ(cs.hweno_big.size(), 4u);
    EXPECT_EQ(cs.weno_sub.size(), 1u - 1u);  // a single octant survives: falls back
    EXPECT_TRUE(cs.weno_linear_fallback);
}

TEST(Stencil, PeriodicTetBoxIsUniform) {
    Mesh m = box(3, BoxSplit::tet);
    make_periodic(m, "xmin", "xmax");
    make_periodic(m, "ymin", "ymax");
    make_periodic(m, "zmin", "zmax");
    const StencilTable t = build_stencils(m);
    for (const CellStencils& cs : t.cells) {
        EXPECT_EQ(cs.weno_sub.size(), 4u);
        EXPECT_EQ(cs.hweno_big.size(), 5u);
    }
}
