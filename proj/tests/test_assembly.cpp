// SPDX-License-Identifier: Apache-2.0
#include "support.hpp"

#include <tvf/solvers.hpp>

#include <doctest.h>

using namespace tvf;
using namespace tvf::test;

namespace {

SparseMatrix random_spd_sparse(int n, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::MatrixXd a = Eigen::MatrixXd::NullaryExpr(n, n, [&] { return u(rng); });
    Eigen::MatrixXd spd = a * a.transpose() + n * Eigen::MatrixXd::Identity(n, n);
    return spd.sparseView();
}

double quad_form(const SparseMatrix& a, const Eigen::VectorXd& x) { return x.dot(a * x); }

} // namespace

TEST_SUITE("assembly-solve")
{
    TEST_CASE("assembly accumulates element blocks")
    {
        const auto m = make_mesh({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}, {{0, 1, 2}, {0, 2, 3}});
        const auto a = assemble<1>(m, [](int) { return Eigen::Matrix3d::Identity().eval(); });
        const Eigen::Vector4d diag(2, 1, 2, 1);
        CHECK(max_abs(dense(a).diagonal() - diag) == 0.0);
        CHECK(max_abs(dense(a) - Eigen::MatrixXd(diag.asDiagonal())) == 0.0);

        // K = 2: entry (m*K+k, n*K+q) lands at (v_m*K+k, v_n*K+q).
        Eigen::Matrix<double, 6, 6> e;
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) e(i, j) = 10 * i + j;
        const auto b = assemble<2>(make_mesh({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {{2, 0, 1}}), [&](int) { return e; });
        const auto d = dense(b);
        CHECK(d(2 * 2 + 1, 2 * 0 + 0) == e(0 * 2 + 1, 1 * 2 + 0));
        CHECK(d(2 * 1 + 0, 2 * 2 + 1) == e(2 * 2 + 0, 0 * 2 + 1));
    }

    TEST_CASE("assembly is linear and global matrices are symmetric")
    {
        const auto framed = make_framed(gen_sphere_random(400, 7));
        const auto hodge = vector_stiffness(framed, EnergySpec::hodge());
        const auto anti = vector_stiffness(framed, EnergySpec::antiholomorphic());
        const auto conn = vector_stiffness(framed, EnergySpec::connection());
        CHECK(frobenius_ratio(conn, SparseMatrix(hodge + anti)) < 1e-13);
        const auto mixed = vector_stiffness(framed, 2.0 * EnergySpec::divergence() + 3.0 * EnergySpec::curl());
        CHECK(frobenius_ratio(mixed, SparseMatrix(2.0 * vector_stiffness(framed, EnergySpec::divergence()) + 3.0 * vector_stiffness(framed, EnergySpec::curl()))) < 1e-13);
        for (const auto& a : {hodge, anti, conn, vector_mass(framed), scalar_mass(framed.mesh()), scalar_stiffness(framed.mesh())})
            CHECK(asymmetry(a) <= 1e-12 * max_abs(dense(a)));
    }

    TEST_CASE("scalar matrices on a closed mesh")
    {
        const auto mesh = gen_icosphere(3).mesh;
        const Eigen::VectorXd ones = Eigen::VectorXd::Ones(mesh.num_vertices());
        CHECK(quad_form(scalar_mass(mesh), ones) == doctest::Approx(total_area(mesh)).epsilon(1e-10));
        CHECK((scalar_stiffness(mesh) * ones).norm() < 1e-10);
        const auto lumped = lump(scalar_mass(mesh));
        CHECK(lumped.nonZeros() == mesh.num_vertices());
        CHECK(lumped.diagonal().sum() == doctest::Approx(total_area(mesh)).epsilon(1e-12));
        CHECK(((scalar_mass(mesh) - lumped) * ones).norm() < 1e-14);
    }

    TEST_CASE("parallel assembly is bitwise identical")
    {
        const auto framed = make_framed(gen_sphere_random(1500, 8));
        const auto serial = vector_stiffness(framed, EnergySpec::connection());
        for (unsigned threads : {2u, 3u, 7u}) {
            const auto par = vector_stiffness(framed, EnergySpec::connection(), quadrature_3pt(), {.parallel = true, .threads = threads});
            REQUIRE(par.nonZeros() == serial.nonZeros());
            bool same = true;
            for (Eigen::Index i = 0; i < serial.nonZeros(); ++i)
                same = same && serial.valuePtr()[i] == par.valuePtr()[i] && serial.innerIndexPtr()[i] == par.innerIndexPtr()[i];
            CHECK(same);
        }
    }

    TEST_CASE("right-hand sides")
    {
        const auto framed = make_framed(gen_sphere_random(300, 9));
        const auto zero = assemble_vector_rhs(framed, [](int, const BaryPoint<double>&) { return Vec3<double>::Zero().eval(); });
        CHECK(zero.norm() == 0.0);

        const SparseMatrix m = vector_mass(framed);
        for (int j : {0, 1, 57, 301}) {
            VertexField e{Eigen::VectorXd::Unit(2 * framed.num_vertices(), j)};
            const Eigen::VectorXd b = assemble_vector_rhs(framed, realize(framed, e));
            CHECK((b - m * e.coeffs).norm() < 1e-10 * m.norm());
        }

        const auto& mesh = framed.mesh();
        const Eigen::VectorXd s = assemble_scalar_rhs(mesh, [](int, const BaryPoint<double>&) { return 1.0; });
        Eigen::VectorXd expected = Eigen::VectorXd::Zero(mesh.num_vertices());
        for (int t = 0; t < mesh.num_triangles(); ++t)
            for (int k = 0; k < 3; ++k) expected[mesh.triangles(t, k)] += triangle_area(mesh, t) / 3;
        CHECK((s - expected).norm() < 1e-14);
    }

    TEST_CASE("SPD solves")
    {
        const auto mesh = gen_icosphere(2).mesh;
        const SparseMatrix m = scalar_mass(mesh);
        const Eigen::VectorXd ones = Eigen::VectorXd::Ones(mesh.num_vertices());
        CHECK((solve_spd(m, m * ones) - ones).norm() < 1e-10 * ones.norm());

        SparseMatrix id(5, 5);
        id.setIdentity();
        const Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(5, -2, 2);
        CHECK((solve_spd(id, b) - b).norm() == 0.0);

        std::mt19937_64 rng(41);
        const SparseMatrix a = random_spd_sparse(50, rng);
        const Eigen::VectorXd rhs = Eigen::VectorXd::NullaryExpr(50, [&] { return std::normal_distribution<double>()(rng); });
        const Eigen::VectorXd oracle = dense(a).llt().solve(rhs);
        CHECK((solve_spd(a, rhs) - oracle).norm() < 1e-10 * oracle.norm());

        SparseMatrix indefinite = id;
        indefinite.coeffRef(3, 3) = -1.0;
        CHECK_THROWS_AS(solve_spd(indefinite, b), SolverError);
        CHECK_THROWS_AS(SpdSolver(scalar_stiffness(mesh)).solve(ones), SolverError);
        CHECK_THROWS_AS(solve_spd(SparseMatrix(3, 4), Eigen::VectorXd::Zero(3)), SolverError);
    }

    TEST_CASE("constrained solves")
    {
        // All entries fixed.
        const auto mesh = gen_icosphere(0).mesh;
        const SparseMatrix s = scalar_stiffness(mesh);
        std::map<int, double> all;
        for (int v = 0; v < mesh.num_vertices(); ++v) all[v] = 0.1 * v;
        const Eigen::VectorXd x = solve_constrained(s, all);
        for (const auto& [v, value] : all) CHECK(x[v] == value);

        // A strip with fixed ends interpolates linearly.
        const auto strip = flat_grid(4, 1);
        std::map<int, double> ends = {{0, 0.0}, {5, 0.0}, {4, 1.0}, {9, 1.0}};
        const Eigen::VectorXd y = solve_constrained(scalar_stiffness(strip), ends);
        for (int v = 0; v < strip.num_vertices(); ++v) CHECK(y[v] == doctest::Approx(strip.vertices(v, 0) / 4).epsilon(1e-12));

        // Two triangles, fixed at the ends of their shared diagonal.
        const auto square = flat_grid(1, 1);
        const Eigen::VectorXd z = solve_constrained(scalar_stiffness(square), {{0, 0.0}, {3, 1.0}});
        CHECK(z[1] == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(z[2] == doctest::Approx(0.5).epsilon(1e-14));

        // Minimality against random feasible vectors, and the dense oracle.
        const auto sphere = gen_sphere_random(200, 3).mesh;
        const SparseMatrix k = scalar_stiffness(sphere);
        const std::map<int, double> fixed = {{0, 1.0}, {17, -2.0}, {99, 0.5}};
        const Eigen::VectorXd best = solve_constrained(k, fixed);
        std::mt19937_64 rng(42);
        std::normal_distribution<double> g;
        for (int trial = 0; trial < 100; ++trial) {
            Eigen::VectorXd other = best + 0.1 * Eigen::VectorXd::NullaryExpr(best.size(), [&] { return g(rng); });
            for (const auto& [i, v] : fixed) other[i] = v;
            CHECK(quad_form(k, best) <= quad_form(k, other));
        }
        std::vector<int> free;
        for (int i = 0; i < sphere.num_vertices(); ++i)
            if (!fixed.count(i)) free.push_back(i);
        const Eigen::MatrixXd kd = dense(k);
        Eigen::MatrixXd kff(free.size(), free.size());
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(free.size());
        for (size_t a = 0; a < free.size(); ++a) {
            for (size_t b = 0; b < free.size(); ++b) kff(a, b) = kd(free[a], free[b]);
            for (const auto& [i, v] : fixed) rhs[a] -= kd(free[a], i) * v;
        }
        const Eigen::VectorXd oracle = kff.ldlt().solve(rhs);
        for (size_t a = 0; a < free.size(); ++a) CHECK(best[free[a]] == doctest::Approx(oracle[a]).epsilon(1e-9));

        CHECK_THROWS_AS(solve_constrained(k, {}), SolverError);
        CHECK_THROWS_AS(solve_constrained(k, {{-1, 0.0}}), SolverError);
    }

    TEST_CASE("eigensolver: scalar pencil and trivial pencil")
    {
        const auto mesh = gen_icosphere(2).mesh;
        const SparseMatrix s = scalar_stiffness(mesh), m = scalar_mass(mesh);
        const auto r = smallest_generalized_eigs(s, m, 6);
        CHECK(std::abs(r.values[0]) < 1e-8);
        const Eigen::VectorXd x0 = r.vectors.col(0);
        CHECK((x0.array() - x0.mean()).abs().maxCoeff() < 1e-8 * x0.cwiseAbs().maxCoeff());
        CHECK(max_abs(r.vectors.transpose() * m * r.vectors - Eigen::MatrixXd::Identity(6, 6)) < 1e-8);
        for (int i = 1; i < 6; ++i) CHECK(r.values[i] >= r.values[i - 1]);
        for (int i = 0; i < 6; ++i) CHECK(eigen_residual(s, m, r.values[i], r.vectors.col(i)) <= 1e-7);

        const auto same = smallest_generalized_eigs(m, m, 5);
        CHECK(max_abs(same.values - Eigen::VectorXd::Ones(5)) < 1e-10);
    }

    TEST_CASE("eigensolver matches a dense oracle")
    {
        const auto sphere = gen_sphere_random(60, 5);
        const SparseMatrix s = scalar_stiffness(sphere.mesh), m = scalar_mass(sphere.mesh);
        const Eigen::VectorXd oracle = dense_generalized_eigenvalues(s, m);
        const auto r = smallest_generalized_eigs(s, m, 10);
        for (int i = 0; i < 10; ++i) CHECK(r.values[i] == doctest::Approx(oracle[i]).epsilon(1e-8).scale(1.0));

        const auto framed = make_framed(sphere);
        const SparseMatrix sv = vector_stiffness(framed, EnergySpec::connection()), mv = vector_mass(framed);
        const Eigen::VectorXd voracle = dense_generalized_eigenvalues(sv, mv);
        const auto rv = smallest_generalized_eigs(sv, mv, 12);
        for (int i = 0; i < 12; ++i) CHECK(rv.values[i] == doctest::Approx(voracle[i]).epsilon(1e-8).scale(1.0));
    }

    TEST_CASE("eigensolver errors")
    {
        const auto mesh = gen_icosphere(3).mesh;
        const SparseMatrix s = scalar_stiffness(mesh), m = scalar_mass(mesh);
        CHECK_THROWS_AS(smallest_generalized_eigs(s, m, 0), SolverError);
        CHECK_THROWS_AS(smallest_generalized_eigs(s, m, mesh.num_vertices() + 1), SolverError);
        EigenOptions strict;
        strict.tolerance = 1e-300;
        strict.max_restarts = 0;
        CHECK_THROWS_AS(smallest_generalized_eigs(s, m, 4, strict), ConvergenceError);
    }

    TEST_CASE("J is a per-vertex quarter turn")
    {
        const auto framed = make_framed(gen_sphere_random(300, 10));
        const int n = framed.num_vertices();
        const SparseMatrix j = build_J(n);
        std::mt19937_64 rng(43);
        std::normal_distribution<double> g;
        const Eigen::VectorXd x = Eigen::VectorXd::NullaryExpr(2 * n, [&] { return g(rng); });
        CHECK((j * (j * x) + x).norm() == 0.0);
        CHECK(max_abs(dense(SparseMatrix(j.transpose())) + dense(j)) == 0.0);
        CHECK(max_abs(dense(SparseMatrix(j.transpose() * j)) - Eigen::MatrixXd::Identity(2 * n, 2 * n)) == 0.0);

        const SparseMatrix m = vector_mass(framed);
        CHECK(quad_form(SparseMatrix(j.transpose() * m * j), x) == doctest::Approx(quad_form(m, x)).epsilon(1e-12));

        const auto vx = vertex_vectors(framed, VertexField{x});
        const auto vjx = vertex_vectors(framed, VertexField{j * x});
        for (int v = 0; v < n; ++v)
            CHECK((vjx.row(v).transpose() - framed.oriented.normal(v).cross(vx.row(v).transpose())).norm() < 1e-14 * (1.0 + vx.row(v).norm()));
    }

    TEST_CASE("rotation invariance on a small torus")
    {
        const auto torus = gen_torus(2000, 2);
        const auto framed = make_framed(torus.oriented);
        const SparseMatrix j = build_J(framed.num_vertices());
        const SparseMatrix jt = j.transpose();
        const SparseMatrix m = vector_mass(framed);
        const SparseMatrix traceless = vector_stiffness(framed, EnergySpec::antiholomorphic());
        const SparseMatrix div = vector_stiffness(framed, EnergySpec::divergence());
        const SparseMatrix curl = vector_stiffness(framed, EnergySpec::curl());
        CHECK(frobenius_ratio(m, SparseMatrix(jt * m * j)) <= 1e-12);
        CHECK(frobenius_ratio(traceless, SparseMatrix(jt * traceless * j)) <= 1e-8);
        CHECK(frobenius_ratio(div, SparseMatrix(jt * curl * j)) <= 1e-8);
    }

    TEST_CASE("eigenvalues are invariant under frame re-rotation")
    {
        const auto framed = make_framed(gen_sphere_random(500, 11));
        const auto rotated = with_random_frames(framed, 77);
        const auto a = eigenfields(framed, EnergySpec::connection(), 10);
        const auto b = eigenfields(rotated, EnergySpec::connection(), 10);
        for (int i = 0; i < 10; ++i) CHECK(std::abs(a.values[i] - b.values[i]) <= 1e-9 * a.values[i]);
    }

    TEST_CASE("lumped vector mass keeps row sums")
    {
        const auto framed = make_framed(gen_icosphere(1));
        const SparseMatrix m = vector_mass(framed);
        const SparseMatrix l = lump(m);
        CHECK(l.rows() == m.rows());
        CHECK(((m - l) * Eigen::VectorXd::Ones(m.rows())).norm() < 1e-14);
    }
}
