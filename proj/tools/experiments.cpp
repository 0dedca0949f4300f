// SPDX-License-Identifier: Apache-2.0
#include "experiments.hpp"

#include <cmath>

namespace tvf::experiments {

double relative_gap(double a, double b)
{
    const double den = std::abs(a + b);
    return den == 0.0 ? 0.0 : std::abs(a - b) / den;
}

double frobenius_ratio(const SparseMatrix& a, const SparseMatrix& b)
{
    const double den = SparseMatrix(a + b).norm();
    return den == 0.0 ? 0.0 : SparseMatrix(a - b).norm() / den;
}

SphereSpectrum sphere_spectrum(const OrientedMesh& mesh, int count, const EigenOptions& options)
{
    const auto framed = make_framed(mesh);
    const auto eig = eigenfields(framed, EnergySpec::connection(), count, quadrature_3pt(), options);
    SphereSpectrum out;
    out.values = eig.values;
    out.reference = sphere_connection_values(count);
    out.ratio.resize(count);
    for (int i = 0; i < count; ++i) out.ratio[i] = relative_gap(out.values[i], out.reference[i]);
    out.mean_ratio = out.ratio.mean();
    return out;
}

HodgeComparison hodge_compare(const OrientedMesh& mesh, int count, const EigenOptions& options)
{
    HodgeComparison out;
    out.genus = genus(mesh.mesh);
    const int g = out.genus;
    const auto framed = make_framed(mesh);
    out.hodge = 2.0 * eigenfields(framed, EnergySpec::hodge(), 2 * (g + count), quadrature_3pt(), options).values;
    out.cotangent = smallest_generalized_eigs(scalar_stiffness(mesh.mesh), scalar_mass(mesh.mesh), count + 1, options).values;
    out.ratio.resize(count, 2);
    for (int i = 0; i < count; ++i)
        for (int k = 0; k < 2; ++k) out.ratio(i, k) = relative_gap(out.hodge[2 * (g + i) + k], out.cotangent[i + 1]);
    out.rho = g > 0 ? out.hodge[2 * g - 1] / out.hodge[2 * g] : 0.0;
    return out;
}

RotationInvariance rotation_invariance(const FramedMesh& mesh)
{
    const SparseMatrix j = build_J(mesh.num_vertices());
    const SparseMatrix jt = j.transpose();
    const SparseMatrix m = vector_mass(mesh);
    const SparseMatrix traceless = vector_stiffness(mesh, EnergySpec::antiholomorphic());
    const SparseMatrix div = vector_stiffness(mesh, EnergySpec::divergence());
    const SparseMatrix curl = vector_stiffness(mesh, EnergySpec::curl());
    return {frobenius_ratio(m, SparseMatrix(jt * m * j)),
            frobenius_ratio(traceless, SparseMatrix(jt * traceless * j)),
            frobenius_ratio(div, SparseMatrix(jt * curl * j))};
}

namespace {

double bracket_error(const FramedMesh& mesh, const AmbientField& x, const AmbientField& y, const AmbientEvaluator& truth, BracketMode mode)
{
    const VectorSpace space(mesh);
    const auto z = lie_bracket_project(space, x, y, mode);
    const auto e = field_error(mesh.mesh(), realize(mesh, z), truth);
    if (!e) throw Error("bracket error: both fields vanish");
    return *e;
}

} // namespace

double sphere_bracket_error(const FramedMesh& mesh, int bandwidth, std::uint64_t seed, BracketMode mode)
{
    const auto x = SphereField::random(bandwidth, 2 * seed), y = SphereField::random(bandwidth, 2 * seed + 1);
    return bracket_error(mesh, x.on_mesh(mesh.mesh()), y.on_mesh(mesh.mesh()), sphere_bracket_on_mesh(x, y, mesh.mesh()), mode);
}

double torus_bracket_error(const TorusMesh& torus, int bandwidth, std::uint64_t seed, BracketMode mode)
{
    const auto framed = make_framed(torus.oriented);
    const auto x = TorusField::random(bandwidth, 2 * seed), y = TorusField::random(bandwidth, 2 * seed + 1);
    return bracket_error(framed, x.on_mesh(torus), y.on_mesh(torus), torus_bracket_on_mesh(x, y, torus), mode);
}

PositionMatrix azimuthal_directions(const PositionMatrix& points)
{
    PositionMatrix out(points.rows(), 3);
    for (Eigen::Index v = 0; v < points.rows(); ++v) {
        const Vec3<double> a(-points(v, 2), 0.0, points(v, 0));
        out.row(v) = a.normalized().transpose();
    }
    return out;
}

double mean_alignment(const PositionMatrix& vectors, const PositionMatrix& directions)
{
    double sum = 0.0;
    int used = 0;
    for (Eigen::Index v = 0; v < vectors.rows(); ++v) {
        const double len = vectors.row(v).norm();
        if (len == 0.0) continue;
        sum += std::abs(vectors.row(v).dot(directions.row(v))) / len;
        ++used;
    }
    return used ? sum / used : 0.0;
}

} // namespace tvf::experiments
