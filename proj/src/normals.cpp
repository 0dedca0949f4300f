// SPDX-License-Identifier: Apache-2.0
#include <tvf/mesh.hpp>

#include <Eigen/Geometry>

#include <cmath>
#include <iostream>
#include <numbers>

namespace tvf {

namespace {

PositionMatrix area_weighted_normals(const TriangleMesh& mesh)
{
    PositionMatrix sums = PositionMatrix::Zero(mesh.num_vertices(), 3);
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const Vec3<double> a = mesh.corner(t, 0);
        const Vec3<double> cross = (mesh.corner(t, 1) - a).cross(mesh.corner(t, 2) - a);
        for (int k = 0; k < 3; ++k) sums.row(mesh.triangles(t, k)) += cross.transpose();
    }
    for (int v = 0; v < mesh.num_vertices(); ++v) {
        const double len = sums.row(v).norm();
        if (!(len > 0.0)) throw GeometryError("vertex " + std::to_string(v) + " has no incident triangle area");
        sums.row(v) /= len;
    }
    return sums;
}

} // namespace

/// Loop's original vertex weight for valence k.
double loop_beta(int valence)
{
    const double c = 3.0 / 8.0 + 0.25 * std::cos(2.0 * std::numbers::pi / valence);
    return (5.0 / 8.0 - c * c) / valence;
}

/// One-ring Loop subdivision matrix: row 0 is the center's vertex rule, row
/// j+1 is the edge rule for the edge (center, ring[j]).
Eigen::MatrixXd loop_ring_stencil(int valence)
{
    const int k = valence;
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(k + 1, k + 1);
    const double beta = loop_beta(k);
    s(0, 0) = 1.0 - k * beta;
    for (int j = 0; j < k; ++j) s(0, j + 1) = beta;
    for (int j = 0; j < k; ++j) {
        s(j + 1, 0) += 3.0 / 8.0;
        s(j + 1, j + 1) += 3.0 / 8.0;
        s(j + 1, (j + k - 1) % k + 1) += 1.0 / 8.0;
        s(j + 1, (j + 1) % k + 1) += 1.0 / 8.0;
    }
    return s;
}

PositionMatrix compute_vertex_normals(const TriangleMesh& mesh, NormalMode mode)
{
    PositionMatrix normals = area_weighted_normals(mesh);
    if (mode == NormalMode::AreaWeighted) return normals;

    const OneRings rings = one_rings(mesh);
    bool warned = false;
    constexpr int kPower = 10;
    for (int v = 0; v < mesh.num_vertices(); ++v) {
        const auto& ring = rings.rings[v];
        if (!rings.closed[v]) {
            if (!warned) {
                std::cerr << "warning: loop-limit normals undefined at boundary vertices; using area weighting\n";
                warned = true;
            }
            continue;
        }
        const int k = static_cast<int>(ring.size());
        const Eigen::MatrixXd stencil = loop_ring_stencil(k);
        Eigen::MatrixXd power = Eigen::MatrixXd::Identity(k + 1, k + 1);
        for (int i = 0; i < kPower; ++i) power = stencil * power;

        Eigen::Matrix<double, Eigen::Dynamic, 3> local(k + 1, 3);
        local.row(0) = mesh.vertices.row(v);
        for (int j = 0; j < k; ++j) local.row(j + 1) = mesh.vertices.row(ring[j]);
        const Eigen::Matrix<double, Eigen::Dynamic, 3> refined = power * local;

        Vec3<double> sum = Vec3<double>::Zero();
        const Vec3<double> c = refined.row(0).transpose();
        for (int j = 0; j < k; ++j) {
            const Vec3<double> a = refined.row(j + 1).transpose();
            const Vec3<double> b = refined.row((j + 1) % k + 1).transpose();
            sum += (a - c).cross(b - c);
        }
        if (sum.norm() > 0.0) normals.row(v) = sum.normalized().transpose();
    }
    return normals;
}

} // namespace tvf
