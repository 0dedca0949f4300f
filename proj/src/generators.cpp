// SPDX-License-Identifier: Apache-2.0
#include <tvf/synth.hpp>

#include <cmath>
#include <map>
#include <numbers>
#include <random>

namespace tvf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

PositionMatrix radial_normals(const PositionMatrix& v)
{
    PositionMatrix n(v.rows(), 3);
    for (Eigen::Index i = 0; i < v.rows(); ++i) n.row(i) = v.row(i).normalized();
    return n;
}

// Shifts b by a multiple of the period so that it is closest to a.
double unwrap_near(double a, double b)
{
    return b + kTwoPi * std::round((a - b) / kTwoPi);
}

} // namespace

OrientedMesh gen_sphere_random(int n, std::uint64_t seed, bool aniso)
{
    if (n < 4) throw Error("gen_sphere_random: need at least 4 points");
    for (std::uint64_t attempt = 0; attempt < 16; ++attempt) {
        std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * attempt);
        std::normal_distribution<double> gauss;
        PositionMatrix q(n, 3);
        for (int i = 0; i < n; ++i) {
            Vec3<double> u;
            do {
                u = {gauss(rng), gauss(rng), gauss(rng)};
            } while (!(u.norm() > 1e-12));
            u.normalize();
            if (aniso) u.y() *= 4.0;
            q.row(i) = u.transpose();
        }
        HullResult hull;
        try {
            hull = convex_hull(q, seed + attempt);
        } catch (const GeometryError&) {
            continue;
        }
        if (static_cast<int>(hull.vertices.size()) != n) continue; // duplicate or interior sample

        OrientedMesh out;
        out.mesh.vertices.resize(n, 3);
        for (int i = 0; i < n; ++i) out.mesh.vertices.row(i) = q.row(i).normalized();
        out.mesh.triangles = hull.triangles;
        out.normals = radial_normals(out.mesh.vertices);
        try {
            validate(out.mesh);
            validate_normals(out);
        } catch (const Error&) {
            continue;
        }
        return out;
    }
    throw GeometryError("gen_sphere_random: could not build a valid hull");
}

OrientedMesh gen_icosphere(int passes)
{
    if (passes < 0) throw Error("gen_icosphere: passes must be nonnegative");
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3<double>> v = {
        {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0}, {0, -1, phi}, {0, 1, phi},
        {0, -1, -phi}, {0, 1, -phi}, {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
    for (auto& p : v) p.normalize();
    std::vector<std::array<int, 3>> f = {
        {0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
        {11, 10, 2}, {10, 7, 6}, {7, 1, 8}, {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8},
        {3, 8, 9}, {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1}};

    for (int pass = 0; pass < passes; ++pass) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int b) {
            const auto key = std::minmax(a, b);
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            v.push_back((v[a] + v[b]).normalized());
            const int id = static_cast<int>(v.size()) - 1;
            midpoint.emplace(key, id);
            return id;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(4 * f.size());
        for (const auto& t : f) {
            const int ab = mid(t[0], t[1]), bc = mid(t[1], t[2]), ca = mid(t[2], t[0]);
            next.push_back({t[0], ab, ca});
            next.push_back({t[1], bc, ab});
            next.push_back({t[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        f = std::move(next);
    }

    OrientedMesh out;
    out.mesh.vertices.resize(static_cast<Eigen::Index>(v.size()), 3);
    for (size_t i = 0; i < v.size(); ++i) out.mesh.vertices.row(static_cast<Eigen::Index>(i)) = v[i].transpose();
    out.mesh.triangles.resize(static_cast<Eigen::Index>(f.size()), 3);
    for (size_t i = 0; i < f.size(); ++i) out.mesh.triangles.row(static_cast<Eigen::Index>(i)) << f[i][0], f[i][1], f[i][2];
    out.normals = radial_normals(out.mesh.vertices);
    return out;
}

Vec3<double> torus_point(double s, double t)
{
    const double r = 2.0 + std::cos(t);
    return {r * std::cos(s), std::sin(t), r * std::sin(s)};
}

Mat32<double> torus_differential(double s, double t)
{
    const double r = 2.0 + std::cos(t);
    Mat32<double> d;
    d.col(0) << -r * std::sin(s), 0.0, r * std::cos(s);
    d.col(1) << -std::sin(t) * std::cos(s), std::cos(t), -std::sin(t) * std::sin(s);
    return d;
}

Vec3<double> torus_normal(double s, double t)
{
    return {std::cos(t) * std::cos(s), std::sin(t), std::cos(t) * std::sin(s)};
}

TorusMesh gen_torus(int n, std::uint64_t seed)
{
    if (n < 16) throw Error("gen_torus: need at least 16 points");
    for (std::uint64_t attempt = 0; attempt < 16; ++attempt) {
        std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * attempt);
        std::uniform_real_distribution<double> uniform(0.0, kTwoPi);
        PlanarPoints params(n, 2);
        for (int i = 0; i < n; ++i) params.row(i) << uniform(rng), uniform(rng);

        IndexMatrix planar;
        try {
            planar = periodic_delaunay(params, kTwoPi);
        } catch (const GeometryError&) {
            continue;
        }
        TorusMesh out;
        out.params = params;
        auto& mesh = out.oriented.mesh;
        mesh.vertices.resize(n, 3);
        out.oriented.normals.resize(n, 3);
        for (int i = 0; i < n; ++i) {
            mesh.vertices.row(i) = torus_point(params(i, 0), params(i, 1)).transpose();
            out.oriented.normals.row(i) = torus_normal(params(i, 0), params(i, 1)).transpose();
        }
        // d/ds x d/dt points inward, so reverse the parameter-plane orientation.
        mesh.triangles.resize(planar.rows(), 3);
        for (Eigen::Index t = 0; t < planar.rows(); ++t) mesh.triangles.row(t) << planar(t, 0), planar(t, 2), planar(t, 1);
        try {
            validate(mesh);
            validate_normals(out.oriented);
        } catch (const Error&) {
            continue;
        }
        return out;
    }
    throw GeometryError("gen_torus: could not build a valid torus mesh");
}

Vec2<double> torus_param_at(const TorusMesh& torus, int tri, const BaryPoint<double>& p)
{
    const auto& tris = torus.oriented.mesh.triangles;
    const Vec2<double> u0 = torus.params.row(tris(tri, 0)).transpose();
    Vec2<double> u1 = torus.params.row(tris(tri, 1)).transpose();
    Vec2<double> u2 = torus.params.row(tris(tri, 2)).transpose();
    for (int k = 0; k < 2; ++k) {
        u1[k] = unwrap_near(u0[k], u1[k]);
        u2[k] = unwrap_near(u0[k], u2[k]);
    }
    const Vec3<double> psi = p.psi();
    return psi[0] * u0 + psi[1] * u1 + psi[2] * u2;
}

Mat2<double> torus_param_jacobian(const TorusMesh& torus, int tri)
{
    const Vec2<double> a = torus_param_at(torus, tri, BaryPoint<double>::corner(0));
    Mat2<double> j;
    j.col(0) = torus_param_at(torus, tri, BaryPoint<double>::corner(1)) - a;
    j.col(1) = torus_param_at(torus, tri, BaryPoint<double>::corner(2)) - a;
    return j;
}

std::vector<SpectrumLevel> sphere_connection_reference(int count)
{
    if (count < 0) throw Error("sphere_connection_reference: negative count");
    std::vector<SpectrumLevel> out;
    int left = count;
    for (int n = 1; left > 0; ++n) {
        const int mult = std::min(4 * n + 2, left);
        out.push_back({n * (n + 1) - 1.0, mult});
        left -= mult;
    }
    return out;
}

Eigen::VectorXd sphere_connection_values(int count)
{
    Eigen::VectorXd out(count);
    int i = 0;
    for (const auto& level : sphere_connection_reference(count))
        for (int m = 0; m < level.multiplicity; ++m) out[i++] = level.value;
    return out;
}

} // namespace tvf
