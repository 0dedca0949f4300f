// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <tvf/assembly.hpp>
#include <tvf/elements.hpp>
#include <tvf/frames.hpp>
#include <tvf/solvers.hpp>

#include <functional>
#include <map>
#include <optional>
#include <variant>

namespace tvf {

/// Coefficients in the per-vertex basis {w_2i, w_2i+1}, length 2|V|.
struct VertexField
{
    Eigen::VectorXd coeffs;

    Vec2<double> at(int v) const { return coeffs.segment<2>(2 * v); }
};

/// Derivative of an ambient field along the reference coordinates (s,t) of a
/// triangle, 3x2.
using AmbientJacobian = std::function<Mat32<double>(int, const BaryPoint<double>&)>;

/// A field given by an evaluator at (triangle, reference point). The
/// Jacobian is optional; without it the field is first projected onto the
/// vertex basis before differentiation.
struct AmbientField
{
    AmbientEvaluator value;
    AmbientJacobian jacobian;
};

using AnyField = std::variant<VertexField, AmbientField>;

/// Value (ambient and reference coordinates) and covariant derivative of a
/// field at one point.
struct TangentSample
{
    Vec3<double> value;
    Vec2<double> reference;
    Mat2<double> derivative;
};

TangentSample eval_field(const FramedMesh& mesh, const VertexField& f, int tri, const BaryPoint<double>& p);

/// Requires `f.jacobian`.
TangentSample eval_field(const FramedMesh& mesh, const AmbientField& f, int tri, const BaryPoint<double>& p);

/// Evaluator realizing a vertex field on the mesh.
AmbientEvaluator realize(const FramedMesh& mesh, const VertexField& f);

/// Vectors at the vertices: c_a t0 + c_b t1.
PositionMatrix vertex_vectors(const FramedMesh& mesh, const VertexField& f);

/// Coefficients from ambient vectors at vertices (tangential projection onto
/// the frames).
VertexField from_vertex_vectors(const FramedMesh& mesh, const PositionMatrix& vectors);

struct BracketSample
{
    Vec2<double> reference;
    Vec3<double> realized;
};

/// [X,Y](p) = grad Y . X(p) - grad X . Y(p).
BracketSample lie_bracket_pointwise(const TangentSample& x, const TangentSample& y, const Realization<double>& real);

template <typename FieldX, typename FieldY>
BracketSample lie_bracket_pointwise(
    const FramedMesh& mesh, const FieldX& x, const FieldY& y, int tri, const BaryPoint<double>& p)
{
    const auto sx = eval_field(mesh, x, tri, p);
    const auto sy = eval_field(mesh, y, tri, p);
    const auto patch = make_patch(mesh, tri);
    return lie_bracket_pointwise(sx, sy, realization(patch, p));
}

/// Vector mass matrix with its factorization, reused across projections.
class VectorSpace
{
public:
    explicit VectorSpace(const FramedMesh& mesh, QuadratureRule<double> rule = quadrature_3pt());

    const FramedMesh& mesh() const { return *mesh_; }
    const QuadratureRule<double>& rule() const { return rule_; }
    const SparseMatrix& mass() const { return mass_; }

    /// M-orthogonal projection of an ambient field onto the basis span.
    VertexField project(const AmbientEvaluator& field) const;

    /// Solve M z = b.
    VertexField solve_mass(const Eigen::VectorXd& b) const;

private:
    const FramedMesh* mesh_;
    QuadratureRule<double> rule_;
    SparseMatrix mass_;
    SpdSolver solver_;
};

enum class BracketMode
{
    Projected, // ambient inputs are projected onto the basis first
    Direct,    // ambient inputs are differentiated through their Jacobians
};

/// Weak representation of the pointwise bracket against the vector basis.
Eigen::VectorXd bracket_rhs(const VectorSpace& space, const AnyField& x, const AnyField& y, BracketMode mode = BracketMode::Projected);

/// Projection of [X,Y] onto span{w_j}: M z = b.
VertexField lie_bracket_project(
    const VectorSpace& space, const AnyField& x, const AnyField& y, BracketMode mode = BracketMode::Projected);

/// Smoothest field (for `spec`) interpolating frame-coordinate constraints.
VertexField interpolate_sparse(
    const FramedMesh& mesh,
    const std::map<int, Vec2<double>>& constraints,
    const EnergySpec& spec,
    const QuadratureRule<double>& rule = quadrature_3pt());

struct HeatResult
{
    VertexField field;
    Eigen::VectorXd magnitude;  // diffused source magnitudes u
    Eigen::VectorXd indicator;  // diffused source indicator phi
    std::vector<int> nearest_source; // argmax of per-source scalar diffusion
    double time = 0.0;
};

enum class HeatMass
{
    Lumped,     // scalar row sums, vector mass = lumped scalar mass x Id2
    Consistent, // full quadrature mass matrices
};

/// Vector heat transport: one connection-Laplacian step for directions, two
/// scalar heat steps for magnitudes. Default time is the squared mean edge
/// length.
HeatResult vector_heat(
    const FramedMesh& mesh,
    const std::map<int, Vec2<double>>& sources,
    std::optional<double> time = std::nullopt,
    const QuadratureRule<double>& rule = quadrature_3pt(),
    HeatMass mass = HeatMass::Lumped);

EigenResult eigenfields(
    const FramedMesh& mesh,
    const EnergySpec& spec,
    int k,
    const QuadratureRule<double>& rule = quadrature_3pt(),
    const EigenOptions& options = {});

/// Re-orders an M-orthonormal eigenspace basis X (2k columns) as pairs
/// {X x_i, J X x_i}, x_i the k smallest solutions of (X^T T X) x = l (X^T M X) x.
Eigen::MatrixXd grade_eigenspace(
    const SparseMatrix& mass, const SparseMatrix& divergence, const SparseMatrix& j, const Eigen::MatrixXd& x);

/// sqrt(|x - x*|^2 / (|x|^2 + |x*|^2)) with integrated square norms. Empty
/// when both fields vanish.
std::optional<double> field_error(
    const TriangleMesh& mesh,
    const AmbientEvaluator& x,
    const AmbientEvaluator& reference,
    const QuadratureRule<double>& rule = quadrature_3pt());

} // namespace tvf
