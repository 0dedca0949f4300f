// SPDX-License-Identifier: Apache-2.0
#include <tvf/fields.hpp>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <iostream>
#include <limits>

namespace tvf {

namespace {

void check_field(const FramedMesh& mesh, const VertexField& f)
{
    if (f.coeffs.size() != 2 * mesh.num_vertices()) throw Error("vertex field has wrong length");
}

TangentSample sample_vertex_field(
    const FramedMesh& mesh, const VertexField& f, int tri, const BasisSample<double>& basis)
{
    TangentSample out;
    out.value.setZero();
    out.derivative.setZero();
    for (int i = 0; i < 3; ++i) {
        const int v = mesh.mesh().triangles(tri, i);
        for (int k = 0; k < 2; ++k) {
            const double c = f.coeffs[2 * v + k];
            out.value += c * basis.values[2 * i + k];
            out.derivative += c * basis.covariant[2 * i + k];
        }
    }
    out.reference = basis.real.inverse * out.value;
    return out;
}

TangentSample sample_ambient_field(const AmbientField& f, int tri, const BaryPoint<double>& p, const Realization<double>& real)
{
    if (!f.jacobian) throw Error("ambient field has no Jacobian; project it onto the basis first");
    TangentSample out;
    out.reference = real.inverse * f.value(tri, p);
    out.value = real.forward * out.reference;
    out.derivative = real.inverse * f.jacobian(tri, p);
    return out;
}

} // namespace

TangentSample eval_field(const FramedMesh& mesh, const VertexField& f, int tri, const BaryPoint<double>& p)
{
    check_field(mesh, f);
    return sample_vertex_field(mesh, f, tri, sample_basis(make_patch(mesh, tri), p));
}

TangentSample eval_field(const FramedMesh& mesh, const AmbientField& f, int tri, const BaryPoint<double>& p)
{
    return sample_ambient_field(f, tri, p, realization(make_patch(mesh, tri), p));
}

AmbientEvaluator realize(const FramedMesh& mesh, const VertexField& f)
{
    check_field(mesh, f);
    return [&mesh, coeffs = f.coeffs](int tri, const BaryPoint<double>& p) -> Vec3<double> {
        const TrianglePatch<double> patch = make_patch(mesh, tri);
        Vec3<double> out = Vec3<double>::Zero();
        for (int j = 0; j < 6; ++j) {
            const double c = coeffs[2 * mesh.mesh().triangles(tri, j / 2) + j % 2];
            if (c != 0.0) out += c * vector_basis_eval(patch, j, p);
        }
        return out;
    };
}

PositionMatrix vertex_vectors(const FramedMesh& mesh, const VertexField& f)
{
    check_field(mesh, f);
    PositionMatrix out(mesh.num_vertices(), 3);
    for (int v = 0; v < mesh.num_vertices(); ++v) out.row(v) = mesh.realize(v, f.at(v)).transpose();
    return out;
}

VertexField from_vertex_vectors(const FramedMesh& mesh, const PositionMatrix& vectors)
{
    if (vectors.rows() != mesh.num_vertices()) throw Error("vertex vectors have wrong length");
    VertexField f{Eigen::VectorXd(2 * mesh.num_vertices())};
    for (int v = 0; v < mesh.num_vertices(); ++v) f.coeffs.segment<2>(2 * v) = mesh.project(v, vectors.row(v).transpose());
    return f;
}

BracketSample lie_bracket_pointwise(const TangentSample& x, const TangentSample& y, const Realization<double>& real)
{
    BracketSample out;
    out.reference = y.derivative * x.reference - x.derivative * y.reference;
    out.realized = real.forward * out.reference;
    return out;
}

VectorSpace::VectorSpace(const FramedMesh& mesh, QuadratureRule<double> rule)
    : mesh_(&mesh), rule_(std::move(rule)), mass_(vector_mass(mesh, rule_)), solver_(mass_)
{}

VertexField VectorSpace::project(const AmbientEvaluator& field) const
{
    return solve_mass(assemble_vector_rhs(*mesh_, field, rule_));
}

VertexField VectorSpace::solve_mass(const Eigen::VectorXd& b) const
{
    return {solver_.solve(b)};
}

Eigen::VectorXd bracket_rhs(const VectorSpace& space, const AnyField& x, const AnyField& y, BracketMode mode)
{
    const FramedMesh& mesh = space.mesh();
    // Bring both inputs to a form with derivatives available.
    auto prepare = [&](const AnyField& f) -> AnyField {
        if (const auto* a = std::get_if<AmbientField>(&f)) {
            if (mode == BracketMode::Projected || !a->jacobian) return space.project(a->value);
        } else {
            check_field(mesh, std::get<VertexField>(f));
        }
        return f;
    };
    const AnyField px = prepare(x);
    const AnyField py = prepare(y);

    const auto& rule = space.rule();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(2 * mesh.num_vertices());
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const TrianglePatch<double> patch = make_patch(mesh, t);
        for (size_t q = 0; q < rule.size(); ++q) {
            const BaryPoint<double>& p = rule.points[q];
            const BasisSample<double> basis = sample_basis(patch, p);
            auto sample = [&](const AnyField& f) {
                if (const auto* v = std::get_if<VertexField>(&f)) return sample_vertex_field(mesh, *v, t, basis);
                return sample_ambient_field(std::get<AmbientField>(f), t, p, basis.real);
            };
            const BracketSample br = lie_bracket_pointwise(sample(px), sample(py), basis.real);
            const double w = rule.weights[q] * patch.sqrt_det_g;
            for (int j = 0; j < 6; ++j) {
                b[2 * mesh.mesh().triangles(t, j / 2) + j % 2] += w * basis.values[j].dot(br.realized);
            }
        }
    }
    return b;
}

VertexField lie_bracket_project(const VectorSpace& space, const AnyField& x, const AnyField& y, BracketMode mode)
{
    return space.solve_mass(bracket_rhs(space, x, y, mode));
}

VertexField interpolate_sparse(
    const FramedMesh& mesh,
    const std::map<int, Vec2<double>>& constraints,
    const EnergySpec& spec,
    const QuadratureRule<double>& rule)
{
    if (constraints.empty()) throw Error("interpolate_sparse: at least one constraint required");
    std::map<int, double> fixed;
    for (const auto& [v, c] : constraints) {
        if (v < 0 || v >= mesh.num_vertices()) throw Error("interpolate_sparse: constraint vertex out of range");
        fixed[2 * v] = c[0];
        fixed[2 * v + 1] = c[1];
    }
    return {solve_constrained(vector_stiffness(mesh, spec, rule), fixed)};
}

HeatResult vector_heat(
    const FramedMesh& mesh,
    const std::map<int, Vec2<double>>& sources,
    std::optional<double> time,
    const QuadratureRule<double>& rule,
    HeatMass mass)
{
    if (sources.empty()) throw Error("vector_heat: at least one source required");
    const int nv = mesh.num_vertices();
    for (const auto& [v, c] : sources) {
        if (v < 0 || v >= nv) throw Error("vector_heat: source vertex out of range");
    }
    HeatResult out;
    out.time = time ? *time : std::pow(mean_edge_length(mesh.mesh()), 2);
    if (!(out.time > 0.0)) throw Error("vector_heat: diffusion time must be positive");

    // Lumped mass keeps the scalar step an M-matrix on Delaunay-like meshes, so
    // the diffused indicator stays positive far from the sources.
    const bool lumped = mass == HeatMass::Lumped;
    const SparseMatrix ms = lumped ? lump(scalar_mass(mesh.mesh())) : scalar_mass(mesh.mesh());
    const SparseMatrix ss = scalar_stiffness(mesh.mesh());
    SparseMatrix mv;
    if (lumped) {
        mv.resize(2 * nv, 2 * nv);
        mv.reserve(Eigen::VectorXi::Ones(2 * nv));
        for (int v = 0; v < nv; ++v) {
            mv.insert(2 * v, 2 * v) = ms.coeff(v, v);
            mv.insert(2 * v + 1, 2 * v + 1) = ms.coeff(v, v);
        }
    } else {
        mv = vector_mass(mesh, rule);
    }
    const SparseMatrix sv = vector_stiffness(mesh, EnergySpec::connection(), rule);
    Eigen::VectorXd y0 = Eigen::VectorXd::Zero(2 * nv);
    for (const auto& [v, c] : sources) y0.segment<2>(2 * v) = c;
    const Eigen::VectorXd y = SpdSolver(SparseMatrix(mv + out.time * sv)).solve(Eigen::VectorXd(mv * y0));

    const SpdSolver scalar(SparseMatrix(ms + out.time * ss));
    Eigen::VectorXd u0 = Eigen::VectorXd::Zero(nv);
    Eigen::VectorXd delta = Eigen::VectorXd::Zero(nv);
    for (const auto& [v, c] : sources) {
        u0[v] = c.norm();
        delta[v] = 1.0;
    }
    out.magnitude = scalar.solve(Eigen::VectorXd(ms * u0));
    out.indicator = scalar.solve(Eigen::VectorXd(ms * delta));

    const double floor = std::numeric_limits<double>::min() * 1e10;
    bool clamped = false;
    out.field.coeffs = Eigen::VectorXd::Zero(2 * nv);
    for (int v = 0; v < nv; ++v) {
        double phi = out.indicator[v];
        if (!(phi > floor)) {
            phi = floor;
            clamped = true;
        }
        const Vec2<double> dir = y.segment<2>(2 * v);
        const double len = dir.norm();
        if (len > 0.0) out.field.coeffs.segment<2>(2 * v) = dir / len * (out.magnitude[v] / phi);
    }
    if (clamped) std::cerr << "warning: vector_heat: heat indicator underflow; clamped far from sources\n";

    // Nearest-source labels by per-source diffusion argmax.
    out.nearest_source.assign(nv, sources.begin()->first);
    if (sources.size() > 1) {
        Eigen::VectorXd best = Eigen::VectorXd::Constant(nv, -std::numeric_limits<double>::infinity());
        for (const auto& [s, c] : sources) {
            Eigen::VectorXd d = Eigen::VectorXd::Zero(nv);
            d[s] = 1.0;
            const Eigen::VectorXd h = scalar.solve(Eigen::VectorXd(ms * d));
            for (int v = 0; v < nv; ++v) {
                if (h[v] > best[v]) {
                    best[v] = h[v];
                    out.nearest_source[v] = s;
                }
            }
        }
    }
    return out;
}

EigenResult eigenfields(
    const FramedMesh& mesh, const EnergySpec& spec, int k, const QuadratureRule<double>& rule, const EigenOptions& options)
{
    if (!spec.any_positive()) throw Error("eigenfields: energy has no positive weight");
    return smallest_generalized_eigs(vector_stiffness(mesh, spec, rule), vector_mass(mesh, rule), k, options);
}

Eigen::MatrixXd grade_eigenspace(
    const SparseMatrix& mass, const SparseMatrix& divergence, const SparseMatrix& j, const Eigen::MatrixXd& x)
{
    if (x.cols() % 2 != 0) throw Error("grade_eigenspace: eigenspace dimension is odd");
    if (x.rows() != mass.rows()) throw Error("grade_eigenspace: dimension mismatch");
    const Eigen::MatrixXd m = x.transpose() * (mass * x);
    const Eigen::MatrixXd t = x.transpose() * (divergence * x);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(
        0.5 * (t + t.transpose()), 0.5 * (m + m.transpose()));
    if (es.info() != Eigen::Success) throw SolverError("grade_eigenspace: projected problem failed");
    const Eigen::Index k = x.cols() / 2;
    Eigen::MatrixXd out(x.rows(), x.cols());
    for (Eigen::Index i = 0; i < k; ++i) {
        const Eigen::VectorXd v = x * es.eigenvectors().col(i);
        out.col(2 * i) = v;
        out.col(2 * i + 1) = j * v;
    }
    return out;
}

std::optional<double> field_error(
    const TriangleMesh& mesh, const AmbientEvaluator& x, const AmbientEvaluator& reference, const QuadratureRule<double>& rule)
{
    double diff = 0.0, nx = 0.0, nr = 0.0;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const double area2 = 2.0 * triangle_area(mesh, t);
        for (size_t q = 0; q < rule.size(); ++q) {
            const Vec3<double> a = x(t, rule.points[q]);
            const Vec3<double> b = reference(t, rule.points[q]);
            const double w = rule.weights[q] * area2;
            diff += w * (a - b).squaredNorm();
            nx += w * a.squaredNorm();
            nr += w * b.squaredNorm();
        }
    }
    if (!(nx + nr > 0.0)) return std::nullopt;
    return std::sqrt(diff / (nx + nr));
}

} // namespace tvf
