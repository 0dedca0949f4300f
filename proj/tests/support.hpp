// SPDX-License-Identifier: Apache-2.0
// Shared mesh builders and independent oracles for the test suites.
#pragma once

#include <tvf/assembly.hpp>
#include <tvf/fields.hpp>
#include <tvf/frames.hpp>
#include <tvf/mesh.hpp>
#include <tvf/synth.hpp>

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <tuple>
#include <vector>

namespace tvf::test {

inline TriangleMesh make_mesh(const std::vector<Vec3<double>>& v, const std::vector<std::array<int, 3>>& f)
{
    TriangleMesh m;
    m.vertices.resize(static_cast<Eigen::Index>(v.size()), 3);
    for (size_t i = 0; i < v.size(); ++i) m.vertices.row(static_cast<Eigen::Index>(i)) = v[i].transpose();
    m.triangles.resize(static_cast<Eigen::Index>(f.size()), 3);
    for (size_t i = 0; i < f.size(); ++i) m.triangles.row(static_cast<Eigen::Index>(i)) << f[i][0], f[i][1], f[i][2];
    return m;
}

inline TriangleMesh tetrahedron()
{
    return make_mesh({{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}}, {{0, 1, 2}, {0, 2, 3}, {0, 3, 1}, {1, 3, 2}});
}

/// nx by ny grid of squares in the z=0 plane, each split into two triangles.
inline TriangleMesh flat_grid(int nx, int ny, double h = 1.0)
{
    std::vector<Vec3<double>> v;
    std::vector<std::array<int, 3>> f;
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i) v.emplace_back(i * h, j * h, 0.0);
    auto id = [&](int i, int j) { return j * (nx + 1) + i; };
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            f.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            f.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    }
    return make_mesh(v, f);
}

/// Planar mesh with constant +z normals.
inline OrientedMesh flat_oriented(const TriangleMesh& m)
{
    OrientedMesh om{m, PositionMatrix(m.num_vertices(), 3)};
    om.normals.rowwise() = Eigen::RowVector3d(0, 0, 1);
    return om;
}

/// Closed surface of a union of unit voxels on a z=0 slab; occupancy[j][i].
/// Two holes in a 5x3 slab give genus 2.
inline TriangleMesh voxel_surface(const std::vector<std::vector<int>>& occupancy)
{
    const int ny = static_cast<int>(occupancy.size());
    const int nx = static_cast<int>(occupancy[0].size());
    auto filled = [&](int i, int j, int k) {
        return k == 0 && i >= 0 && j >= 0 && i < nx && j < ny && occupancy[j][i] != 0;
    };
    std::map<std::tuple<int, int, int>, int> ids;
    std::vector<Vec3<double>> v;
    std::vector<std::array<int, 3>> f;
    auto vid = [&](int x, int y, int z) {
        auto [it, fresh] = ids.emplace(std::tuple{x, y, z}, static_cast<int>(v.size()));
        if (fresh) v.emplace_back(x, y, z);
        return it->second;
    };
    const std::array<std::array<int, 3>, 3> axes = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            if (!filled(i, j, 0)) continue;
            for (int a = 0; a < 3; ++a) {
                for (int side : {-1, 1}) {
                    const auto& d = axes[a];
                    if (filled(i + side * d[0], j + side * d[1], side * d[2])) continue;
                    // Face of the unit cube at [i,i+1]x[j,j+1]x[0,1] normal to axis a.
                    const auto& u = axes[(a + 1) % 3];
                    const auto& w = axes[(a + 2) % 3];
                    const int o = side > 0 ? 1 : 0;
                    const std::array<int, 3> base = {i + o * d[0], j + o * d[1], o * d[2]};
                    auto corner = [&](int du, int dw) {
                        return vid(base[0] + du * u[0] + dw * w[0], base[1] + du * u[1] + dw * w[1],
                                   base[2] + du * u[2] + dw * w[2]);
                    };
                    const int c00 = corner(0, 0), c10 = corner(1, 0), c11 = corner(1, 1), c01 = corner(0, 1);
                    // u x w = d, so (c00, c10, c11) is counter-clockwise around +d.
                    if (side > 0) {
                        f.push_back({c00, c10, c11});
                        f.push_back({c00, c11, c01});
                    } else {
                        f.push_back({c00, c11, c10});
                        f.push_back({c00, c01, c11});
                    }
                }
            }
        }
    }
    return make_mesh(v, f);
}

inline Vec3<double> random_unit(std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    Vec3<double> v(g(rng), g(rng), g(rng));
    return v.normalized();
}

/// Random curved patch: random triangle, corner normals tilted from the face
/// normal by up to `tilt` radians, random orthonormal frames.
inline TrianglePatch<double> random_patch(std::mt19937_64& rng, double tilt = 0.5)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::array<Vec3<double>, 3> c;
    do {
        for (auto& p : c) p = Vec3<double>(u(rng), u(rng), u(rng));
    } while ((c[1] - c[0]).cross(c[2] - c[0]).norm() < 0.3);
    const Vec3<double> n = (c[1] - c[0]).cross(c[2] - c[0]).normalized();
    std::array<Vec3<double>, 3> normals;
    std::array<Vec3<double>, 6> frames;
    for (int i = 0; i < 3; ++i) {
        Vec3<double> axis = random_unit(rng).cross(n);
        axis.normalize();
        const double angle = tilt * (0.5 + 0.5 * u(rng));
        normals[i] = Eigen::AngleAxisd(angle, axis) * n;
        Vec3<double> t0 = random_unit(rng);
        t0 = (t0 - normals[i] * normals[i].dot(t0)).normalized();
        frames[2 * i] = t0;
        frames[2 * i + 1] = normals[i].cross(t0);
    }
    return TrianglePatch<double>::make(c, normals, frames);
}

inline BaryPoint<double> random_interior_point(std::mt19937_64& rng, double margin = 0.05)
{
    std::uniform_real_distribution<double> u(margin, 1.0 - 2 * margin);
    while (true) {
        const double s = u(rng), t = u(rng);
        if (s + t <= 1.0 - margin) return {s, t};
    }
}

inline Eigen::MatrixXd dense(const SparseMatrix& a) { return Eigen::MatrixXd(a); }

/// Dense generalized symmetric eigenvalues, ascending.
inline Eigen::VectorXd dense_generalized_eigenvalues(const SparseMatrix& s, const SparseMatrix& m)
{
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(dense(s), dense(m));
    return es.eigenvalues();
}

inline double frobenius_ratio(const SparseMatrix& a, const SparseMatrix& b)
{
    return SparseMatrix(a - b).norm() / SparseMatrix(a + b).norm();
}

inline double max_abs(const Eigen::MatrixXd& a) { return a.cwiseAbs().maxCoeff(); }

} // namespace tvf::test
