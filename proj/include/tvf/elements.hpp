// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <tvf/endomorphism.hpp>
#include <tvf/patch.hpp>
#include <tvf/quadrature.hpp>
#include <tvf/rotation.hpp>

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace tvf {

/// Non-negative weights on the scalar, traceless-symmetric and anti-symmetric
/// components of the covariant derivative.
struct EnergySpec
{
    double c_scalar = 1.0;
    double c_traceless = 1.0;
    double c_antisym = 1.0;

    static constexpr EnergySpec connection() { return {1.0, 1.0, 1.0}; }
    static constexpr EnergySpec hodge() { return {1.0, 0.0, 1.0}; }
    static constexpr EnergySpec antiholomorphic() { return {0.0, 1.0, 0.0}; }
    static constexpr EnergySpec killing() { return {1.0, 1.0, 0.0}; }
    static constexpr EnergySpec divergence() { return {1.0, 0.0, 0.0}; }
    static constexpr EnergySpec curl() { return {0.0, 0.0, 1.0}; }

    bool any_positive() const { return c_scalar > 0.0 || c_traceless > 0.0 || c_antisym > 0.0; }

    friend EnergySpec operator+(const EnergySpec& a, const EnergySpec& b)
    {
        return {a.c_scalar + b.c_scalar, a.c_traceless + b.c_traceless, a.c_antisym + b.c_antisym};
    }
    friend EnergySpec operator*(double s, const EnergySpec& a)
    {
        return {s * a.c_scalar, s * a.c_traceless, s * a.c_antisym};
    }
    bool operator==(const EnergySpec&) const = default;
};

/// Accepts connection, hodge (holomorphic), antiholomorphic, killing,
/// divergence, curl.
std::optional<EnergySpec> energy_from_name(std::string_view name);

template <typename Scalar> using ScalarElement = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar> using VectorElement = Eigen::Matrix<Scalar, 6, 6>;

template <typename Scalar>
ScalarElement<Scalar> scalar_element_mass(const TrianglePatch<Scalar>& patch)
{
    ScalarElement<Scalar> m;
    m.setConstant(Scalar(1) / 24);
    m.diagonal().setConstant(Scalar(1) / 12);
    return patch.sqrt_det_g * m;
}

/// Same integral evaluated with a quadrature rule; agrees with the closed
/// form for rules exact through degree 2.
template <typename Scalar>
ScalarElement<Scalar> scalar_element_mass(const TrianglePatch<Scalar>& patch, const QuadratureRule<Scalar>& rule)
{
    ScalarElement<Scalar> m = ScalarElement<Scalar>::Zero();
    for (size_t q = 0; q < rule.size(); ++q) {
        const Vec3<Scalar> psi = rule.points[q].psi();
        m += rule.weights[q] * (psi * psi.transpose());
    }
    return patch.sqrt_det_g * m;
}

/// Cotangent stiffness; the hat differentials are constant, so the integrand
/// is multiplied by the reference area 1/2.
template <typename Scalar>
ScalarElement<Scalar> scalar_element_stiffness(const TrianglePatch<Scalar>& patch)
{
    Eigen::Matrix<Scalar, 3, 2> d;
    for (int i = 0; i < 3; ++i) d.row(i) = hat_gradient<Scalar>(i);
    return (Scalar(0.5) * patch.sqrt_det_g) * (d * patch.g_inv * d.transpose());
}

/// Everything about the six corner basis fields at one point: the Phong
/// normal, realization maps, extrinsic values, their differentials with
/// respect to (s,t) and the pulled-back covariant derivatives.
template <typename Scalar>
struct BasisSample
{
    GaussSample<Scalar> gauss;
    Realization<Scalar> real;
    std::array<Vec3<Scalar>, 6> values;
    std::array<Mat32<Scalar>, 6> differentials;
    std::array<Mat2<Scalar>, 6> covariant;
};

template <typename Scalar>
BasisSample<Scalar> sample_basis(const TrianglePatch<Scalar>& patch, const BaryPoint<Scalar>& p)
{
    BasisSample<Scalar> out;
    out.gauss = gauss_map(patch, p);
    out.real = realization(patch, out.gauss.normal);
    const Vec3<Scalar> psi = p.psi();
    for (int i = 0; i < 3; ++i) {
        const Mat3<Scalar> rot = rodrigues<Scalar>(patch.normals[i], out.gauss.normal);
        const auto drot = rodrigues_derivative<Scalar>(patch.normals[i], out.gauss.normal, out.gauss.jacobian);
        const Eigen::Matrix<Scalar, 1, 2> dpsi = hat_gradient<Scalar>(i);
        for (int k = 0; k < 2; ++k) {
            const int j = 2 * i + k;
            const Vec3<Scalar>& t = patch.frames[j];
            const Vec3<Scalar> moved = rot * t;
            out.values[j] = psi[i] * moved;
            Mat32<Scalar> d = moved * dpsi;
            d.col(0) += psi[i] * (drot[0] * t);
            d.col(1) += psi[i] * (drot[1] * t);
            out.differentials[j] = d;
            out.covariant[j] = out.real.inverse * d;
        }
    }
    return out;
}

/// psi_i(p) R_i(p) t_{2i+k} for j = 2i+k.
template <typename Scalar>
Vec3<Scalar> vector_basis_eval(const TrianglePatch<Scalar>& patch, int j, const BaryPoint<Scalar>& p)
{
    const int i = j / 2;
    return p.psi()[i] * (corner_transport(patch, i, p) * patch.frames[j]);
}

template <typename Scalar>
Endo2<Scalar> vector_basis_covariant_derivative(const TrianglePatch<Scalar>& patch, int j, const BaryPoint<Scalar>& p)
{
    return {sample_basis(patch, p).covariant[j], patch.g};
}

template <typename Scalar>
VectorElement<Scalar> vector_element_mass(const TrianglePatch<Scalar>& patch, const QuadratureRule<Scalar>& rule)
{
    VectorElement<Scalar> m = VectorElement<Scalar>::Zero();
    for (size_t q = 0; q < rule.size(); ++q) {
        const BaryPoint<Scalar>& p = rule.points[q];
        const Vec3<Scalar> psi = p.psi();
        const Vec3<Scalar> normal = gauss_map(patch, p).normal;
        Eigen::Matrix<Scalar, 3, 6> vals;
        for (int i = 0; i < 3; ++i) {
            const Mat3<Scalar> rot = rodrigues<Scalar>(patch.normals[i], normal);
            vals.col(2 * i) = psi[i] * (rot * patch.frames[2 * i]);
            vals.col(2 * i + 1) = psi[i] * (rot * patch.frames[2 * i + 1]);
        }
        m += rule.weights[q] * (vals.transpose() * vals);
    }
    return patch.sqrt_det_g * m;
}

/// Covariant derivatives of the six basis fields in an orthonormal frame of
/// the face plane (e0 along the first edge, e1 = n x e0). Hat gradients are
/// taken as n x edge / 2A, so slivers do not lose accuracy to the
/// reference-coordinate metric. Similar to the reference form under
/// dPhi = E L.
template <typename Scalar>
std::array<Mat2<Scalar>, 6> covariant_orthonormal(const TrianglePatch<Scalar>& patch, const BaryPoint<Scalar>& p)
{
    const Vec3<Scalar>& n = patch.face_normal;
    Mat32<Scalar> e;
    e.col(0) = patch.dphi.col(0).normalized();
    e.col(1) = n.cross(Vec3<Scalar>(e.col(0)));
    Eigen::Matrix<Scalar, 3, 2> grad;
    for (int i = 0; i < 3; ++i) {
        const Vec3<Scalar> edge = patch.corners[(i + 2) % 3] - patch.corners[(i + 1) % 3];
        grad.row(i) = (n.cross(edge) / patch.sqrt_det_g).transpose() * e;
    }

    const Vec3<Scalar> psi = p.psi();
    const Vec3<Scalar> blend = psi[0] * patch.normals[0] + psi[1] * patch.normals[1] + psi[2] * patch.normals[2];
    const Scalar len = blend.norm();
    if (!(len > Scalar(kMinInterpolatedNormal))) throw GeometryError("interpolated normal vanishes; corner normals are inconsistent");
    const Vec3<Scalar> normal = blend / len;
    Mat32<Scalar> dblend = Mat32<Scalar>::Zero();
    for (int i = 0; i < 3; ++i) dblend += patch.normals[i] * grad.row(i);
    const Mat32<Scalar> dnormal = (Mat3<Scalar>::Identity() - normal * normal.transpose()) * dblend / len;

    const Mat23<Scalar> back = e.transpose() * rodrigues<Scalar>(n, normal).transpose();
    std::array<Mat2<Scalar>, 6> out;
    for (int i = 0; i < 3; ++i) {
        const Mat3<Scalar> rot = rodrigues<Scalar>(patch.normals[i], normal);
        const auto drot = rodrigues_derivative<Scalar>(patch.normals[i], normal, dnormal);
        for (int k = 0; k < 2; ++k) {
            const Vec3<Scalar>& t = patch.frames[2 * i + k];
            Mat32<Scalar> d = (rot * t) * grad.row(i);
            d.col(0) += psi[i] * (drot[0] * t);
            d.col(1) += psi[i] * (drot[1] * t);
            out[2 * i + k] = back * d;
        }
    }
    return out;
}

/// Stiffness of the weighted component energy
///   sum_c spec.c * <P_c grad w_i, P_c grad w_j>_Hom.
template <typename Scalar>
VectorElement<Scalar> vector_element_stiffness(
    const TrianglePatch<Scalar>& patch, const QuadratureRule<Scalar>& rule, const EnergySpec& spec)
{
    VectorElement<Scalar> s = VectorElement<Scalar>::Zero();
    const Scalar weights[3] = {Scalar(spec.c_scalar), Scalar(spec.c_traceless), Scalar(spec.c_antisym)};
    for (size_t q = 0; q < rule.size(); ++q) {
        const auto cov = covariant_orthonormal(patch, rule.points[q]);
        const Mat2<Scalar> id = Mat2<Scalar>::Identity();
        std::array<std::array<Mat2<Scalar>, 6>, 3> parts;
        for (int j = 0; j < 6; ++j) {
            const auto d = decompose<Scalar>(cov[j], id, id);
            parts[0][j] = d.scalar;
            parts[1][j] = d.traceless;
            parts[2][j] = d.antisym;
        }
        for (int c = 0; c < 3; ++c) {
            if (weights[c] == Scalar(0)) continue;
            for (int i = 0; i < 6; ++i) {
                for (int j = i; j < 6; ++j) {
                    const Scalar v = rule.weights[q] * weights[c] * (parts[c][i].transpose() * parts[c][j]).trace();
                    s(i, j) += v;
                    if (j != i) s(j, i) += v;
                }
            }
        }
    }
    return patch.sqrt_det_g * s;
}

/// Full-integrand stiffness tr(g^{-1} grad w_i^T g grad w_j), without the
/// component split.
template <typename Scalar>
VectorElement<Scalar> vector_element_connection_direct(const TrianglePatch<Scalar>& patch, const QuadratureRule<Scalar>& rule)
{
    VectorElement<Scalar> s = VectorElement<Scalar>::Zero();
    for (size_t q = 0; q < rule.size(); ++q) {
        const BasisSample<Scalar> b = sample_basis(patch, rule.points[q]);
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j)
                s(i, j) += rule.weights[q]
                    * hom_inner_product<Scalar>(b.covariant[i], b.covariant[j], patch.g, patch.g_inv);
    }
    return patch.sqrt_det_g * s;
}

} // namespace tvf
