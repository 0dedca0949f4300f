// SPDX-License-Identifier: Apache-2.0
#include "support.hpp"

#include <tvf/predicates.hpp>

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace tvf;
using namespace tvf::test;

namespace {

using i128 = __int128;

// Grid coordinates x = k * 2^-28 with integer k: every value and every
// difference is exact, and the determinants are exact in 128-bit integers.
constexpr double kUnit = 1.0 / (1 << 28);

int sign(i128 v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

int orient2d_oracle(const std::array<i128, 2>& a, const std::array<i128, 2>& b, const std::array<i128, 2>& c)
{
    return sign((a[0] - c[0]) * (b[1] - c[1]) - (a[1] - c[1]) * (b[0] - c[0]));
}

int orient3d_oracle(const std::array<i128, 3>& a, const std::array<i128, 3>& b, const std::array<i128, 3>& c, const std::array<i128, 3>& d)
{
    const i128 ax = a[0] - d[0], ay = a[1] - d[1], az = a[2] - d[2];
    const i128 bx = b[0] - d[0], by = b[1] - d[1], bz = b[2] - d[2];
    const i128 cx = c[0] - d[0], cy = c[1] - d[1], cz = c[2] - d[2];
    return sign(ax * (by * cz - bz * cy) - ay * (bx * cz - bz * cx) + az * (bx * cy - by * cx));
}

int incircle_oracle(const std::array<i128, 2>& a, const std::array<i128, 2>& b, const std::array<i128, 2>& c, const std::array<i128, 2>& d)
{
    const i128 ax = a[0] - d[0], ay = a[1] - d[1];
    const i128 bx = b[0] - d[0], by = b[1] - d[1];
    const i128 cx = c[0] - d[0], cy = c[1] - d[1];
    const i128 al = ax * ax + ay * ay, bl = bx * bx + by * by, cl = cx * cx + cy * cy;
    return sign(al * (bx * cy - by * cx) - bl * (ax * cy - ay * cx) + cl * (ax * by - ay * bx));
}

template <size_t N>
Eigen::Matrix<double, static_cast<int>(N), 1> to_double(const std::array<i128, N>& k)
{
    Eigen::Matrix<double, static_cast<int>(N), 1> out;
    for (size_t i = 0; i < N; ++i) out[static_cast<Eigen::Index>(i)] = static_cast<double>(static_cast<long long>(k[i])) * kUnit;
    return out;
}

double percentile(std::vector<double> v, double q)
{
    std::sort(v.begin(), v.end());
    return v[static_cast<size_t>(q * (v.size() - 1))];
}

Vec2<double> unwrap_near(const Vec2<double>& ref, Vec2<double> p)
{
    const double period = 2 * std::numbers::pi;
    for (int k = 0; k < 2; ++k) p[k] += period * std::round((ref[k] - p[k]) / period);
    return p;
}

} // namespace

TEST_SUITE("synth-bench")
{
    TEST_CASE("orient2d and incircle agree with exact integer arithmetic")
    {
        std::mt19937_64 rng(71);
        std::uniform_int_distribution<long long> wide(-(1LL << 40), 1LL << 40);
        std::uniform_int_distribution<long long> small(-6, 6);
        const long before = predicates::exact_fallbacks();
        for (int trial = 0; trial < 3000; ++trial) {
            std::array<i128, 2> a{wide(rng), wide(rng)}, d{small(rng), small(rng)};
            // Nearly collinear: c = a + t d plus a tiny offset.
            const long long t1 = small(rng) * 1000003, t2 = small(rng) * 999983;
            std::array<i128, 2> b{a[0] + t1 * d[0], a[1] + t1 * d[1]};
            std::array<i128, 2> c{a[0] + t2 * d[0] + small(rng) % 2, a[1] + t2 * d[1]};
            CHECK(predicates::orient2d(to_double(a), to_double(b), to_double(c)) == orient2d_oracle(a, b, c));
        }
        CHECK(predicates::exact_fallbacks() > before);

        // Cocircular integer points: (+-3,+-4), (+-5,0), (0,+-5) around a shifted center.
        std::uniform_int_distribution<long long> centre(-(1LL << 26), 1LL << 26);
        const std::array<std::array<long long, 2>, 12> ring = {{{3, 4}, {4, 3}, {5, 0}, {4, -3}, {3, -4}, {0, -5},
                                                                {-3, -4}, {-4, -3}, {-5, 0}, {-4, 3}, {-3, 4}, {0, 5}}};
        for (int trial = 0; trial < 2000; ++trial) {
            const long long cx = centre(rng), cy = centre(rng), scale = 1 + (trial % 7) * 1000;
            std::array<std::array<i128, 2>, 4> p;
            std::uniform_int_distribution<int> pick(0, 11);
            std::set<int> used;
            for (auto& q : p) {
                int idx;
                do {
                    idx = pick(rng);
                } while (!used.insert(idx).second);
                q = {cx + scale * ring[idx][0], cy + scale * ring[idx][1]};
            }
            if (trial % 3 == 1) p[3][0] += 1;
            if (trial % 3 == 2) p[3][1] -= 1;
            if (orient2d_oracle(p[0], p[1], p[2]) < 0) std::swap(p[1], p[2]);
            CHECK(predicates::incircle(to_double(p[0]), to_double(p[1]), to_double(p[2]), to_double(p[3]))
                  == incircle_oracle(p[0], p[1], p[2], p[3]));
        }
        for (int trial = 0; trial < 2000; ++trial) {
            std::uniform_int_distribution<long long> mid(-(1LL << 28), 1LL << 28);
            std::array<i128, 2> a{mid(rng), mid(rng)}, b{mid(rng), mid(rng)}, c{mid(rng), mid(rng)}, d{mid(rng), mid(rng)};
            CHECK(predicates::incircle(to_double(a), to_double(b), to_double(c), to_double(d)) == incircle_oracle(a, b, c, d));
        }
    }

    TEST_CASE("orient3d agrees with exact integer arithmetic")
    {
        std::mt19937_64 rng(72);
        std::uniform_int_distribution<long long> wide(-(1LL << 36), 1LL << 36);
        std::uniform_int_distribution<long long> small(-9, 9);
        const long before = predicates::exact_fallbacks();
        for (int trial = 0; trial < 3000; ++trial) {
            std::array<i128, 3> a{wide(rng), wide(rng), wide(rng)};
            std::array<i128, 3> u{small(rng), small(rng), small(rng)}, v{small(rng), small(rng), small(rng)};
            auto at = [&](long long s, long long t) {
                return std::array<i128, 3>{a[0] + s * u[0] + t * v[0], a[1] + s * u[1] + t * v[1], a[2] + s * u[2] + t * v[2]};
            };
            const auto b = at(small(rng) * 100003, small(rng) * 7);
            const auto c = at(small(rng) * 3, small(rng) * 99991);
            auto d = at(small(rng) * 50021, small(rng) * 50023);
            d[trial % 3] += (trial % 4) - 1; // coplanar or one unit off
            CHECK(predicates::orient3d(to_double(a), to_double(b), to_double(c), to_double(d)) == orient3d_oracle(a, b, c, d));
        }
        CHECK(predicates::exact_fallbacks() > before);
        for (int trial = 0; trial < 1000; ++trial) {
            std::array<i128, 3> a{wide(rng), wide(rng), wide(rng)}, b{wide(rng), wide(rng), wide(rng)},
                c{wide(rng), wide(rng), wide(rng)}, d{wide(rng), wide(rng), wide(rng)};
            CHECK(predicates::orient3d(to_double(a), to_double(b), to_double(c), to_double(d)) == orient3d_oracle(a, b, c, d));
        }
        // Orientation convention: d below the counter-clockwise plane is positive.
        CHECK(predicates::orient3d({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, -1}) == 1);
        CHECK(predicates::orient2d({0, 0}, {1, 0}, {0, 1}) == 1);
        CHECK(predicates::incircle({0, 0}, {1, 0}, {0, 1}, {0.5, 0.5}) == 1);
    }

    TEST_CASE("convex hull contains every point and is watertight")
    {
        std::mt19937_64 rng(73);
        std::normal_distribution<double> g;
        PositionMatrix pts(400, 3);
        for (int i = 0; i < 400; ++i) pts.row(i) << g(rng), g(rng), 0.3 * g(rng);
        const auto hull = convex_hull(pts, 5);
        CHECK_FALSE(hull.perturbed);
        TriangleMesh m;
        m.vertices = pts;
        m.triangles = hull.triangles;
        const auto edges = build_edges(m);
        CHECK(edges.num_boundary_edges() == 0);
        CHECK(static_cast<int>(hull.triangles.rows()) == 2 * static_cast<int>(hull.vertices.size()) - 4);
        for (int t = 0; t < hull.triangles.rows(); ++t) {
            const Vec3<double> a = pts.row(hull.triangles(t, 0)).transpose(), b = pts.row(hull.triangles(t, 1)).transpose(),
                               c = pts.row(hull.triangles(t, 2)).transpose();
            for (int i = 0; i < 400; ++i) CHECK(predicates::orient3d(a, b, c, pts.row(i).transpose()) >= 0);
        }
        // Hull vertices are exactly the points touched by some triangle.
        std::set<int> used(hull.triangles.data(), hull.triangles.data() + hull.triangles.size());
        CHECK(std::vector<int>(used.begin(), used.end()) == hull.vertices);
        // Seed independence of the vertex set.
        CHECK(convex_hull(pts, 99).vertices == hull.vertices);
    }

    TEST_CASE("convex hull of a cube resolves coplanar ties by jitter")
    {
        PositionMatrix cube(9, 3);
        int r = 0;
        for (int x : {0, 1})
            for (int y : {0, 1})
                for (int z : {0, 1}) cube.row(r++) << x, y, z;
        cube.row(8) << 0.5, 0.5, 0.5;
        const auto hull = convex_hull(cube);
        CHECK(hull.perturbed);
        CHECK(hull.vertices == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7});
        CHECK(hull.triangles.rows() == 12);
        TriangleMesh m{cube.topRows(8), hull.triangles};
        CHECK_NOTHROW(validate(m));
        CHECK(genus(m) == 0);
        CHECK(total_area(m) == doctest::Approx(6.0).epsilon(1e-9));

        PositionMatrix flat(4, 3);
        flat << 0, 0, 0, 1, 0, 0, 0, 1, 0, 1, 1, 0;
        CHECK_THROWS_AS(convex_hull(flat), GeometryError);
    }

    TEST_CASE("planar Delaunay triangulation is empty-circle")
    {
        std::mt19937_64 rng(74);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        PlanarPoints pts(300, 2);
        for (int i = 0; i < 300; ++i) pts.row(i) << u(rng), u(rng);
        const auto tris = delaunay(pts);
        for (int t = 0; t < tris.rows(); ++t) {
            const Vec2<double> a = pts.row(tris(t, 0)).transpose(), b = pts.row(tris(t, 1)).transpose(), c = pts.row(tris(t, 2)).transpose();
            CHECK(predicates::orient2d(a, b, c) > 0);
            for (int i = 0; i < 300; ++i) CHECK(predicates::incircle(a, b, c, pts.row(i).transpose()) <= 0);
        }
        // Euler: 2n - 2 - h triangles for h hull points.
        std::set<std::pair<int, int>> directed;
        for (int t = 0; t < tris.rows(); ++t)
            for (int k = 0; k < 3; ++k) directed.insert({tris(t, k), tris(t, (k + 1) % 3)});
        int boundary = 0;
        for (const auto& [a, b] : directed) boundary += directed.count({b, a}) == 0;
        CHECK(tris.rows() == 2 * 300 - 2 - boundary);

        PlanarPoints dup(4, 2);
        dup << 0, 0, 1, 0, 0, 1, 1, 0;
        CHECK_THROWS_AS(delaunay(dup), GeometryError);
    }

    TEST_CASE("random sphere meshes")
    {
        const auto a = gen_sphere_random(2000, 3);
        const auto b = gen_sphere_random(2000, 3);
        CHECK(a.mesh.vertices == b.mesh.vertices);
        CHECK(a.mesh.triangles == b.mesh.triangles);
        CHECK(a.num_vertices() == 2000);
        for (int v = 0; v < a.num_vertices(); ++v) CHECK(std::abs(a.mesh.vertices.row(v).norm() - 1.0) < 1e-12);
        CHECK(genus(a.mesh) == 0);
        CHECK(euler_characteristic(a.mesh) == 2);
        CHECK(build_edges(a.mesh).num_boundary_edges() == 0);
        CHECK(max_abs(a.normals - a.mesh.vertices) < 1e-15);

        const auto aniso = gen_sphere_random(2000, 3, true);
        CHECK(genus(aniso.mesh) == 0);
        for (int v = 0; v < aniso.num_vertices(); ++v) CHECK(std::abs(aniso.mesh.vertices.row(v).norm() - 1.0) < 1e-12);
        CHECK(percentile(aspect_ratios(aniso.mesh), 0.95) > percentile(aspect_ratios(a.mesh), 0.95));
        CHECK_THROWS_AS(gen_sphere_random(3, 1), Error);
    }

    TEST_CASE("icospheres")
    {
        CHECK(gen_icosphere(0).num_vertices() == 12);
        CHECK(gen_icosphere(0).num_triangles() == 20);
        for (int p = 0; p <= 4; ++p) {
            const auto ico = gen_icosphere(p);
            CHECK(ico.num_triangles() == 20 * (1 << (2 * p)));
            CHECK(genus(ico.mesh) == 0);
            CHECK_NOTHROW(validate_normals(ico));
        }
        const auto ico = gen_icosphere(4);
        const auto edges = build_edges(ico.mesh);
        double lo = 1e9, hi = 0.0;
        for (const auto& [a, b] : edges.edges) {
            const double len = (ico.mesh.vertices.row(a) - ico.mesh.vertices.row(b)).norm();
            lo = std::min(lo, len);
            hi = std::max(hi, len);
        }
        CHECK(hi / lo <= 1.3);
        CHECK_THROWS_AS(gen_icosphere(-1), Error);
    }

    TEST_CASE("torus meshes")
    {
        const auto torus = gen_torus(3000, 4);
        const auto& m = torus.oriented.mesh;
        CHECK(m.num_vertices() == 3000);
        CHECK(m.num_triangles() == 6000);
        CHECK(euler_characteristic(m) == 0);
        CHECK(genus(m) == 1);
        for (int v = 0; v < m.num_vertices(); ++v) {
            const Vec3<double> x = m.vertices.row(v).transpose();
            const double ring = std::hypot(x.x(), x.z()) - 2.0;
            CHECK(std::abs(ring * ring + x.y() * x.y() - 1.0) < 1e-12);
            const Vec3<double> expected = torus_point(torus.params(v, 0), torus.params(v, 1));
            CHECK((x - expected).norm() == 0.0);
        }
        CHECK(min_normal_consistency(torus.oriented) > 0.0);

        const auto again = gen_torus(3000, 4);
        CHECK(again.oriented.mesh.triangles == m.triangles);

        // Empty circumcircles in the flat metric on 1000 random interior edges.
        const auto edges = build_edges(m);
        std::mt19937_64 rng(75);
        std::uniform_int_distribution<int> pick(0, edges.num_edges() - 1);
        for (int trial = 0; trial < 1000; ++trial) {
            const int e = pick(rng);
            const int t0 = edges.edge_triangles[e][0], t1 = edges.edge_triangles[e][1];
            const Vec2<double> ref = torus.params.row(edges.edges[e][0]).transpose();
            auto corners = [&](int t) {
                std::array<Vec2<double>, 3> c;
                for (int k = 0; k < 3; ++k) c[k] = unwrap_near(ref, torus.params.row(m.triangles(t, k)).transpose());
                if (predicates::orient2d(c[0], c[1], c[2]) < 0) std::swap(c[1], c[2]);
                return c;
            };
            auto opposite = [&](int t) {
                for (int k = 0; k < 3; ++k) {
                    const int v = m.triangles(t, k);
                    if (v != edges.edges[e][0] && v != edges.edges[e][1]) return unwrap_near(ref, torus.params.row(v).transpose());
                }
                return Vec2<double>(0, 0);
            };
            const auto c0 = corners(t0), c1 = corners(t1);
            CHECK(predicates::incircle(c0[0], c0[1], c0[2], opposite(t1)) <= 0);
            CHECK(predicates::incircle(c1[0], c1[1], c1[2], opposite(t0)) <= 0);
        }
        CHECK_THROWS_AS(gen_torus(8, 1), Error);
    }

    TEST_CASE("periodic Delaunay rejects duplicates")
    {
        PlanarPoints pts(60, 2);
        std::mt19937_64 rng(76);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < 60; ++i) pts.row(i) << u(rng), u(rng);
        const auto tris = periodic_delaunay(pts, 1.0);
        CHECK(tris.rows() == 120);
        pts.row(7) = pts.row(3);
        CHECK_THROWS_AS(periodic_delaunay(pts, 1.0), GeometryError);
    }

    TEST_CASE("torus analytic normals agree with area-weighted normals")
    {
        const auto torus = gen_torus(40000, 6);
        const auto area = compute_vertex_normals(torus.oriented.mesh, NormalMode::AreaWeighted);
        double worst = 0.0;
        for (int v = 0; v < torus.oriented.num_vertices(); ++v) {
            const double c = std::clamp(area.row(v).dot(torus.oriented.normals.row(v)), -1.0, 1.0);
            worst = std::max(worst, std::acos(c) * 180.0 / std::numbers::pi);
        }
        MESSAGE("max normal deviation (deg): " << worst);
        CHECK(worst < 5.0);
    }

    TEST_CASE("torus parameterization")
    {
        std::mt19937_64 rng(77);
        std::uniform_real_distribution<double> u(0.0, 2 * std::numbers::pi);
        const double h = 1e-6;
        for (int trial = 0; trial < 50; ++trial) {
            const double s = u(rng), t = u(rng);
            const Mat32<double> d = torus_differential(s, t);
            CHECK((d.col(0) - (torus_point(s + h, t) - torus_point(s - h, t)) / (2 * h)).norm() < 1e-8);
            CHECK((d.col(1) - (torus_point(s, t + h) - torus_point(s, t - h)) / (2 * h)).norm() < 1e-8);
            const Vec3<double> n = torus_normal(s, t);
            CHECK(std::abs(n.norm() - 1.0) < 1e-15);
            CHECK((d.transpose() * n).norm() < 1e-14);
            // Outward: away from the core circle.
            const Vec3<double> core(2 * std::cos(s), 0.0, 2 * std::sin(s));
            CHECK(n.dot(torus_point(s, t) - core) > 0.0);
        }
        const auto torus = gen_torus(500, 8);
        for (int tri = 0; tri < torus.oriented.num_triangles(); tri += 13) {
            for (int k = 0; k < 3; ++k) {
                const Vec2<double> st = torus_param_at(torus, tri, BaryPoint<double>::corner(k));
                CHECK((torus_point(st[0], st[1]) - torus.oriented.mesh.corner(tri, k)).norm() < 1e-12);
            }
            const Mat2<double> j = torus_param_jacobian(torus, tri);
            CHECK(j.norm() < 2.0); // unwrapped: no period jumps
        }
    }

    TEST_CASE("reference sphere spectrum")
    {
        const auto values = sphere_connection_values(30);
        for (int i = 0; i < 6; ++i) CHECK(values[i] == 1.0);
        const auto levels = sphere_connection_reference(240);
        REQUIRE(levels.size() == 10);
        const std::array<double, 10> distinct = {1, 5, 11, 19, 29, 41, 55, 71, 89, 109};
        int total = 0;
        for (size_t n = 0; n < 10; ++n) {
            CHECK(levels[n].value == distinct[n]);
            CHECK(levels[n].multiplicity == 4 * static_cast<int>(n + 1) + 2);
            total += levels[n].multiplicity;
        }
        CHECK(total == 240);
        CHECK(sphere_connection_reference(7).back().multiplicity == 1);
    }

    TEST_CASE("band-limited fields are real with exact Jacobians")
    {
        const auto f = BandlimitedField3D::random(4, 81);
        CHECK(f.bandwidth() == 4);
        std::mt19937_64 rng(82);
        std::uniform_real_distribution<double> u(-3.0, 3.0);
        const double h = 1e-6;
        for (int trial = 0; trial < 50; ++trial) {
            const Vec3<double> x(u(rng), u(rng), u(rng));
            CHECK(f.imaginary_residual(x) < 1e-13 * (1.0 + f(x).norm()) * 100);
            Mat3<double> fd;
            for (int k = 0; k < 3; ++k) fd.col(k) = (f(x + h * Vec3<double>::Unit(k)) - f(x - h * Vec3<double>::Unit(k))) / (2 * h);
            CHECK((f.jacobian(x) - fd).norm() < 1e-6 * fd.norm());
            Vec3<double> value;
            Mat3<double> jac;
            f.evaluate(x, value, jac);
            CHECK((value - f(x)).norm() == 0.0);
            // Periodic in each coordinate.
            CHECK((f(x + 2 * std::numbers::pi * Vec3<double>::UnitY()) - f(x)).norm() < 1e-11);
        }
        CHECK(BandlimitedField3D::random(4, 81)(Vec3<double>(0.1, 0.2, 0.3)) == f(Vec3<double>(0.1, 0.2, 0.3)));
        const auto c = BandlimitedField2D::constant(Vec2<double>(1.5, -2.0));
        CHECK(c(Vec2<double>(0.3, 4.0)) == Vec2<double>(1.5, -2.0));
        CHECK(c.jacobian(Vec2<double>(0.3, 4.0)).norm() == 0.0);
        CHECK_THROWS_AS(BandlimitedField2D::random(-1, 1), Error);
    }

    TEST_CASE("sphere fields: tangency and bracket against finite differences")
    {
        const auto x = SphereField::random(3, 83), y = SphereField::random(3, 84);
        std::mt19937_64 rng(85);
        const double h = 1e-5;
        for (int trial = 0; trial < 50; ++trial) {
            const Vec3<double> q = random_unit(rng);
            CHECK(std::abs(x(q).dot(q)) < 1e-12 * (1.0 + x(q).norm()));
            Mat3<double> dx, dy;
            for (int k = 0; k < 3; ++k) {
                dx.col(k) = (x(q + h * Vec3<double>::Unit(k)) - x(q - h * Vec3<double>::Unit(k))) / (2 * h);
                dy.col(k) = (y(q + h * Vec3<double>::Unit(k)) - y(q - h * Vec3<double>::Unit(k))) / (2 * h);
            }
            CHECK((x.jacobian(q) - dx).norm() < 1e-6 * dx.norm());
            Vec3<double> fd = dy * x(q) - dx * y(q);
            fd -= q * q.dot(fd);
            const Vec3<double> exact = sphere_bracket(x, y, q);
            CHECK((exact - fd).norm() < 1e-6 * exact.norm());
            CHECK(std::abs(exact.dot(q)) < 1e-12 * (1.0 + exact.norm()));
        }
        const auto c = SphereField(BandlimitedField3D::constant(Vec3<double>(0.2, -1.0, 0.5)));
        CHECK(sphere_bracket(c, c, random_unit(rng)).norm() == 0.0);
    }

    TEST_CASE("sphere fields on a mesh: Jacobian in reference coordinates")
    {
        const auto mesh = gen_sphere_random(500, 86).mesh;
        const auto x = SphereField::random(2, 87);
        const auto f = x.on_mesh(mesh);
        std::mt19937_64 rng(88);
        const double h = 1e-6;
        for (int t = 0; t < mesh.num_triangles(); t += 41) {
            const auto p = random_interior_point(rng);
            Mat32<double> fd;
            fd.col(0) = (f.value(t, {p.s + h, p.t}) - f.value(t, {p.s - h, p.t})) / (2 * h);
            fd.col(1) = (f.value(t, {p.s, p.t + h}) - f.value(t, {p.s, p.t - h})) / (2 * h);
            CHECK((f.jacobian(t, p) - fd).norm() < 1e-6 * (1.0 + fd.norm()));
        }
    }

    TEST_CASE("planar and torus brackets")
    {
        const auto cx = BandlimitedField2D::constant(Vec2<double>(1, 2)), cy = BandlimitedField2D::constant(Vec2<double>(-3, 0.5));
        CHECK(planar_bracket(cx, cy, Vec2<double>(0.4, 1.1)).norm() == 0.0);

        const auto x = TorusField::random(3, 89), y = TorusField::random(3, 90);
        std::mt19937_64 rng(91);
        std::uniform_real_distribution<double> u(0.0, 2 * std::numbers::pi);
        const double h = 1e-5;
        for (int trial = 0; trial < 50; ++trial) {
            const Vec2<double> p(u(rng), u(rng));
            Mat2<double> dx, dy;
            for (int k = 0; k < 2; ++k) {
                dx.col(k) = (x.planar()(p + h * Vec2<double>::Unit(k)) - x.planar()(p - h * Vec2<double>::Unit(k))) / (2 * h);
                dy.col(k) = (y.planar()(p + h * Vec2<double>::Unit(k)) - y.planar()(p - h * Vec2<double>::Unit(k))) / (2 * h);
            }
            const Vec2<double> fd = dy * x.planar()(p) - dx * y.planar()(p);
            const Vec2<double> exact = planar_bracket(x.planar(), y.planar(), p);
            CHECK((exact - fd).norm() < 1e-8 * exact.norm());

            Mat32<double> pushed_fd;
            for (int k = 0; k < 2; ++k) pushed_fd.col(k) = (x.pushed(p + h * Vec2<double>::Unit(k)) - x.pushed(p - h * Vec2<double>::Unit(k))) / (2 * h);
            CHECK((x.pushed_jacobian(p) - pushed_fd).norm() < 1e-7 * pushed_fd.norm());
        }

        const auto torus = gen_torus(800, 92);
        const auto truth = torus_bracket_on_mesh(x, y, torus);
        const auto fx = x.on_mesh(torus);
        const double hh = 1e-6;
        for (int t = 0; t < torus.oriented.num_triangles(); t += 29) {
            const auto p = random_interior_point(rng);
            const Vec2<double> st = torus_param_at(torus, t, p);
            const Vec3<double> b = truth(t, p);
            CHECK(std::abs(b.dot(torus_normal(st[0], st[1]))) < 1e-10 * (1.0 + b.norm()));
            Mat32<double> fd;
            fd.col(0) = (fx.value(t, {p.s + hh, p.t}) - fx.value(t, {p.s - hh, p.t})) / (2 * hh);
            fd.col(1) = (fx.value(t, {p.s, p.t + hh}) - fx.value(t, {p.s, p.t - hh})) / (2 * hh);
            CHECK((fx.jacobian(t, p) - fd).norm() < 1e-6 * (1.0 + fd.norm()));
        }
    }
}
