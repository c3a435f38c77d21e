#pragma once

// Test-side helpers: meshes and brute-force cell integrals that do not go
// through the production geometry code.

#include "hgks/mesh.hpp"
#include "hgks/oracles.hpp"

#include <functional>
#include <vector>

namespace hgks::testing {

inline Mesh box(int n, BoxSplit split, double perturb = 0.0, unsigned seed = 1) {
    BoxSpec s;
    s.divisions = {n, n, n};
    s.split = split;
    s.perturbation = perturb;
    s.seed = seed;
    return generate_box_mesh(s);
}

inline Mesh periodic_box(int n, BoxSplit split) {
    Mesh m = box(n, split);
    make_periodic(m, "xmin", "xmax");
    make_periodic(m, "ymin", "ymax");
    make_periodic(m, "zmin", "zmax");
    return m;
}

using Field = std::function<double(const Vec3&)>;

/// Average of f over a cell by tensor Gauss-Legendre: collapsed (Duffy)
/// coordinates on tetrahedra, the trilinear map on hexahedra.
inline double cell_average(const Mesh& mesh, int c, const Field& f, int n = 6) {
    std::vector<double> x, w;
    oracle::gauss_legendre(n, x, w);
    const Cell& cell = mesh.cells[c];
    double sum = 0.0, vol = 0.0;
    auto node = [&](int k) { return mesh.nodes[cell.nodes[k]]; };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const double r = 0.5 * (x[i] + 1), s = 0.5 * (x[j] + 1), t = 0.5 * (x[k] + 1);
                const double wt = 0.125 * w[i] * w[j] * w[k];
                Vec3 p;
                double jac;
                if (cell.kind == CellKind::tetrahedron) {
                    const Vec3 a = node(0), e1 = node(1) - a, e2 = node(2) - a, e3 = node(3) - a;
                    const double b1 = r, b2 = s * (1 - r), b3 = t * (1 - r) * (1 - s);
                    p = a + b1 * e1 + b2 * e2 + b3 * e3;
                    jac = std::abs(e1.dot(e2.cross(e3))) * (1 - r) * (1 - r) * (1 - s);
                } else {
                    std::array<Vec3, 8> v;
                    for (int q = 0; q < 8; ++q) v[q] = node(q);
                    Mat3 J;
                    detail::trilinear(v, r, s, t, p, J);
                    jac = std::abs(J.determinant());
                }
                sum += wt * jac * f(p);
                vol += wt * jac;
            }
    return sum / vol;
}

/// Cell averages of five copies of a scalar field.
inline std::vector<Vec5> averages(const Mesh& mesh, const Field& f, int n = 6) {
    std::vector<Vec5> q(mesh.num_cells());
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) q[c] = Vec5::Constant(cell_average(mesh, static_cast<int>(c), f, n));
    return q;
}

}  // namespace hgks::testing
