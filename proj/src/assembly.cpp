// SPDX-License-Identifier: Apache-2.0
#include <tvf/assembly.hpp>

#include <array>
#include <cctype>
#include <string>

namespace tvf {

std::optional<EnergySpec> energy_from_name(std::string_view name)
{
    std::string n(name);
    for (char& c : n) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (n == "connection") return EnergySpec::connection();
    if (n == "hodge" || n == "holomorphic") return EnergySpec::hodge();
    if (n == "antiholomorphic" || n == "anti-holomorphic" || n == "traceless") return EnergySpec::antiholomorphic();
    if (n == "killing") return EnergySpec::killing();
    if (n == "divergence") return EnergySpec::divergence();
    if (n == "curl") return EnergySpec::curl();
    return std::nullopt;
}

namespace {

TrianglePatch<double> bare_patch(const TriangleMesh& mesh, int tri)
{
    std::array<Vec3<double>, 3> corners{mesh.corner(tri, 0), mesh.corner(tri, 1), mesh.corner(tri, 2)};
    const Vec3<double> n = (corners[1] - corners[0]).cross(corners[2] - corners[0]).normalized();
    std::array<Vec3<double>, 6> frames;
    frames.fill(Vec3<double>::Zero());
    return TrianglePatch<double>::make(corners, {n, n, n}, frames);
}

} // namespace

SparseMatrix scalar_mass(const TriangleMesh& mesh, const AssemblyOptions& options)
{
    return assemble<1>(mesh, [&](int t) { return scalar_element_mass(bare_patch(mesh, t)); }, options);
}

SparseMatrix scalar_stiffness(const TriangleMesh& mesh, const AssemblyOptions& options)
{
    return assemble<1>(mesh, [&](int t) { return scalar_element_stiffness(bare_patch(mesh, t)); }, options);
}

SparseMatrix vector_mass(const FramedMesh& mesh, const QuadratureRule<double>& rule, const AssemblyOptions& options)
{
    return assemble<2>(
        mesh.mesh(), [&](int t) { return vector_element_mass(make_patch(mesh, t), rule); }, options);
}

SparseMatrix vector_stiffness(
    const FramedMesh& mesh, const EnergySpec& spec, const QuadratureRule<double>& rule, const AssemblyOptions& options)
{
    return assemble<2>(
        mesh.mesh(), [&](int t) { return vector_element_stiffness(make_patch(mesh, t), rule, spec); }, options);
}

SparseMatrix lump(const SparseMatrix& mass)
{
    const Eigen::VectorXd rows = mass * Eigen::VectorXd::Ones(mass.cols());
    SparseMatrix out(mass.rows(), mass.cols());
    std::vector<Eigen::Triplet<double>> diag;
    diag.reserve(mass.rows());
    for (Eigen::Index i = 0; i < mass.rows(); ++i) diag.emplace_back(i, i, rows[i]);
    out.setFromTriplets(diag.begin(), diag.end());
    return out;
}

SparseMatrix build_J(int num_vertices)
{
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(2 * num_vertices);
    for (int v = 0; v < num_vertices; ++v) {
        entries.emplace_back(2 * v, 2 * v + 1, -1.0);
        entries.emplace_back(2 * v + 1, 2 * v, 1.0);
    }
    SparseMatrix j(2 * num_vertices, 2 * num_vertices);
    j.setFromTriplets(entries.begin(), entries.end());
    return j;
}

Eigen::VectorXd assemble_vector_rhs(const FramedMesh& mesh, const AmbientEvaluator& field, const QuadratureRule<double>& rule)
{
    const TriangleMesh& m = mesh.mesh();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(2 * m.num_vertices());
    for (int t = 0; t < m.num_triangles(); ++t) {
        const TrianglePatch<double> patch = make_patch(mesh, t);
        for (size_t q = 0; q < rule.size(); ++q) {
            const BaryPoint<double>& p = rule.points[q];
            const Vec3<double> f = field(t, p);
            const Vec3<double> normal = gauss_map(patch, p).normal;
            const Vec3<double> psi = p.psi();
            const double w = rule.weights[q] * patch.sqrt_det_g;
            for (int i = 0; i < 3; ++i) {
                const Mat3<double> rot = rodrigues<double>(patch.normals[i], normal);
                const int v = m.triangles(t, i);
                b[2 * v] += w * psi[i] * (rot * patch.frames[2 * i]).dot(f);
                b[2 * v + 1] += w * psi[i] * (rot * patch.frames[2 * i + 1]).dot(f);
            }
        }
    }
    return b;
}

Eigen::VectorXd assemble_scalar_rhs(const TriangleMesh& mesh, const ScalarEvaluator& field, const QuadratureRule<double>& rule)
{
    Eigen::VectorXd b = Eigen::VectorXd::Zero(mesh.num_vertices());
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const double area2 = 2.0 * triangle_area(mesh, t);
        for (size_t q = 0; q < rule.size(); ++q) {
            const BaryPoint<double>& p = rule.points[q];
            const double f = field(t, p);
            const Vec3<double> psi = p.psi();
            for (int i = 0; i < 3; ++i) b[mesh.triangles(t, i)] += rule.weights[q] * area2 * psi[i] * f;
        }
    }
    return b;
}

double asymmetry(const SparseMatrix& a)
{
    const SparseMatrix diff = a - SparseMatrix(a.transpose());
    double worst = 0.0;
    for (int k = 0; k < diff.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
    return worst;
}

} // namespace tvf
