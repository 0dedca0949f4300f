// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <tvf/fields.hpp>
#include <tvf/mesh.hpp>

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

namespace tvf {

// ---------------------------------------------------------------- hulls

struct HullResult
{
    IndexMatrix triangles;   // into the input point list, counter-clockwise seen from outside
    std::vector<int> vertices; // input points that are hull vertices, ascending
    bool perturbed = false;  // a tie forced a jittered retry
};

/// Randomized incremental convex hull with conflict lists and exact
/// orientation tests. Exact coplanar ties trigger a retry on points jittered
/// by 1e-12 (relative); the returned indices refer to the original points.
HullResult convex_hull(const PositionMatrix& points, std::uint64_t seed = 1);

// ------------------------------------------------------------- Delaunay

using PlanarPoints = Eigen::Matrix<double, Eigen::Dynamic, 2, Eigen::RowMajor>;

/// Bowyer-Watson Delaunay triangulation of distinct planar points;
/// counter-clockwise triangles.
IndexMatrix delaunay(const PlanarPoints& points);

/// Delaunay triangulation of the flat torus [0, period)^2. Samples are tiled
/// into neighbouring periods, triangulated, and each periodic triangle is kept
/// once. Throws GeometryError for duplicate points.
IndexMatrix periodic_delaunay(const PlanarPoints& points, double period);

// ----------------------------------------------------------- generators

/// Convex hull of n random points on the unit sphere (or, with `aniso`, on
/// the ellipsoid with semi-axes (1,4,1), then normalized). Radial normals.
OrientedMesh gen_sphere_random(int n, std::uint64_t seed, bool aniso = false);

/// Icosahedron, subdivided 1-to-4 `passes` times with reprojection onto the
/// unit sphere. Radial normals.
OrientedMesh gen_icosphere(int passes);

struct TorusMesh
{
    OrientedMesh oriented;
    PlanarPoints params; // (s, t) in [0, 2 pi)
};

/// Phi(s,t) = (cos s, 0, sin s)(2 + cos t) + (0, sin t, 0).
Vec3<double> torus_point(double s, double t);
/// Columns d/ds, d/dt.
Mat32<double> torus_differential(double s, double t);
/// Outward unit normal.
Vec3<double> torus_normal(double s, double t);

/// Periodic Delaunay triangulation of n random parameter samples mapped
/// through Phi; analytic normals.
TorusMesh gen_torus(int n, std::uint64_t seed);

/// (s,t) at a point of a triangle, interpolated after unwrapping the corner
/// parameters to a common period.
Vec2<double> torus_param_at(const TorusMesh& torus, int tri, const BaryPoint<double>& p);
/// Differential of torus_param_at with respect to the reference (s,t), 2x2.
Mat2<double> torus_param_jacobian(const TorusMesh& torus, int tri);

struct SpectrumLevel
{
    double value;
    int multiplicity;
};

/// Connection Laplacian spectrum of the unit sphere: n(n+1)-1 with
/// multiplicity 4n+2, truncated so multiplicities total `count`.
std::vector<SpectrumLevel> sphere_connection_reference(int count);
/// Same, expanded to one entry per eigenvalue.
Eigen::VectorXd sphere_connection_values(int count);

// ----------------------------------------------------- band-limited fields

/// Real field R^D -> R^C given by Fourier coefficients on ||k||_inf <= b with
/// c_{-k} = conj(c_k). Coefficients are stored for a half lattice.
template <int D, int C>
class BandlimitedField
{
public:
    using Point = Eigen::Matrix<double, D, 1>;
    using Value = Eigen::Matrix<double, C, 1>;
    using Jacobian = Eigen::Matrix<double, C, D>;

    BandlimitedField() = default;

    /// Coefficient components i.i.d. uniform on [-1,1]^2 (the zero mode keeps
    /// its real part).
    static BandlimitedField random(int bandwidth, std::uint64_t seed);
    /// Single constant mode (k = 0).
    static BandlimitedField constant(const Value& c);

    int bandwidth() const { return bandwidth_; }

    Value operator()(const Point& x) const;
    Jacobian jacobian(const Point& x) const;
    /// Value and Jacobian in one pass.
    void evaluate(const Point& x, Value& value, Jacobian& jacobian) const { eval(x, &value, &jacobian, nullptr); }
    /// Imaginary part of the full conjugate-symmetric sum (rounding only).
    double imaginary_residual(const Point& x) const;

private:
    void eval(const Point& x, Value* value, Jacobian* jac, double* imag) const;

    int bandwidth_ = 0;
    std::vector<Eigen::Matrix<int, D, 1>> modes_; // half lattice, first nonzero component > 0
    std::vector<Eigen::Matrix<std::complex<double>, C, 1>> coeffs_;
    Value constant_ = Value::Zero();
};

using BandlimitedField3D = BandlimitedField<3, 3>;
using BandlimitedField2D = BandlimitedField<2, 2>;

/// Tangent field on the unit sphere, X(q) = Z(q) - q <Z(q), q>, with its
/// extension to R^3 given by the same formula.
class SphereField
{
public:
    explicit SphereField(BandlimitedField3D raw) : raw_(std::move(raw)) {}
    static SphereField random(int bandwidth, std::uint64_t seed) { return SphereField(BandlimitedField3D::random(bandwidth, seed)); }

    Vec3<double> operator()(const Vec3<double>& q) const;
    Mat3<double> jacobian(const Vec3<double>& q) const;
    void evaluate(const Vec3<double>& q, Vec3<double>& value, Mat3<double>& jacobian) const;

    /// Evaluated at the radial projection of the mesh point; the Jacobian is
    /// taken with respect to the triangle reference coordinates.
    AmbientField on_mesh(const TriangleMesh& mesh) const;

    const BandlimitedField3D& raw() const { return raw_; }

private:
    BandlimitedField3D raw_;
};

/// [X,Y](q) = P(DY X - DX Y) at a sphere point, P the tangential projector.
Vec3<double> sphere_bracket(const SphereField& x, const SphereField& y, const Vec3<double>& q);
/// Ground truth on a mesh: bracket at the radial projection.
AmbientEvaluator sphere_bracket_on_mesh(const SphereField& x, const SphereField& y, const TriangleMesh& mesh);

/// Periodic planar field pushed forward to the torus by dPhi.
class TorusField
{
public:
    explicit TorusField(BandlimitedField2D planar) : planar_(std::move(planar)) {}
    static TorusField random(int bandwidth, std::uint64_t seed) { return TorusField(BandlimitedField2D::random(bandwidth, seed)); }

    const BandlimitedField2D& planar() const { return planar_; }

    /// dPhi(u) X(u).
    Vec3<double> pushed(const Vec2<double>& u) const;
    /// d/du of dPhi(u) X(u), 3x2.
    Mat32<double> pushed_jacobian(const Vec2<double>& u) const;

    AmbientField on_mesh(const TorusMesh& torus) const;

private:
    BandlimitedField2D planar_;
};

/// Planar bracket DY X - DX Y.
Vec2<double> planar_bracket(const BandlimitedField2D& x, const BandlimitedField2D& y, const Vec2<double>& u);
/// dPhi applied to the planar bracket, at interpolated mesh parameters.
AmbientEvaluator torus_bracket_on_mesh(const TorusField& x, const TorusField& y, const TorusMesh& torus);

} // namespace tvf
