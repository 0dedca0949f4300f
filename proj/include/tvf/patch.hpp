// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <tvf/common.hpp>
#include <tvf/endomorphism.hpp>
#include <tvf/rotation.hpp>

#include <Eigen/Geometry>

#include <array>
#include <cmath>

namespace tvf {

/// Point of the unit right triangle {s,t >= 0, s+t <= 1}; hat functions are
/// psi = (1-s-t, s, t).
template <typename Scalar>
struct BaryPoint
{
    Scalar s = Scalar(0);
    Scalar t = Scalar(0);

    Vec3<Scalar> psi() const { return {Scalar(1) - s - t, s, t}; }

    static BaryPoint corner(int i)
    {
        switch (i) {
        case 1: return {Scalar(1), Scalar(0)};
        case 2: return {Scalar(0), Scalar(1)};
        default: return {Scalar(0), Scalar(0)};
        }
    }
    static BaryPoint barycenter() { return {Scalar(1) / 3, Scalar(1) / 3}; }
};

/// Differential of the hat function of corner i, as a row (d/ds, d/dt).
template <typename Scalar>
Eigen::Matrix<Scalar, 1, 2> hat_gradient(int i)
{
    switch (i) {
    case 0: return {Scalar(-1), Scalar(-1)};
    case 1: return {Scalar(1), Scalar(0)};
    default: return {Scalar(0), Scalar(1)};
    }
}

/// Cached geometry of one embedded triangle with corner normals and corner
/// tangent frames (frames[2i], frames[2i+1] span the plane orthogonal to
/// normals[i]).
template <typename Scalar>
struct TrianglePatch
{
    std::array<Vec3<Scalar>, 3> corners;
    std::array<Vec3<Scalar>, 3> normals;
    std::array<Vec3<Scalar>, 6> frames;
    Mat32<Scalar> dphi;
    Mat2<Scalar> g;
    Mat2<Scalar> g_inv;
    Scalar sqrt_det_g;
    Vec3<Scalar> face_normal;

    static TrianglePatch make(
        const std::array<Vec3<Scalar>, 3>& corners,
        const std::array<Vec3<Scalar>, 3>& normals,
        const std::array<Vec3<Scalar>, 6>& frames)
    {
        TrianglePatch p;
        p.corners = corners;
        p.normals = normals;
        p.frames = frames;
        p.dphi.col(0) = corners[1] - corners[0];
        p.dphi.col(1) = corners[2] - corners[0];
        p.g = p.dphi.transpose() * p.dphi;
        // det g = |d0 x d1|^2; the cofactor form cancels on slivers.
        const Vec3<Scalar> cross = p.dphi.col(0).cross(p.dphi.col(1));
        const Scalar det = cross.squaredNorm();
        if (!(det > Scalar(0))) throw GeometryError("degenerate triangle patch (det g <= 0)");
        p.g_inv << p.g(1, 1), -p.g(0, 1), -p.g(1, 0), p.g(0, 0);
        p.g_inv /= det;
        p.sqrt_det_g = cross.norm();
        p.face_normal = cross / p.sqrt_det_g;
        return p;
    }

    Vec3<Scalar> position(const BaryPoint<Scalar>& p) const
    {
        return corners[0] + dphi * Vec2<Scalar>(p.s, p.t);
    }
};

template <typename Scalar>
struct GaussSample
{
    Vec3<Scalar> normal;
    Mat32<Scalar> jacobian; // dN/d(s,t)
};

inline constexpr double kMinInterpolatedNormal = 1e-8;

/// Phong normal N(p) = normalize(sum psi_i n_i) and its Jacobian.
template <typename Scalar>
GaussSample<Scalar> gauss_map(const TrianglePatch<Scalar>& patch, const BaryPoint<Scalar>& p)
{
    const Vec3<Scalar> psi = p.psi();
    const Vec3<Scalar> blend = psi[0] * patch.normals[0] + psi[1] * patch.normals[1] + psi[2] * patch.normals[2];
    const Scalar len = blend.norm();
    if (!(len > Scalar(kMinInterpolatedNormal))) {
        throw GeometryError("interpolated normal vanishes; corner normals are inconsistent");
    }
    GaussSample<Scalar> out;
    out.normal = blend / len;
    Mat32<Scalar> dblend;
    dblend.col(0) = patch.normals[1] - patch.normals[0];
    dblend.col(1) = patch.normals[2] - patch.normals[0];
    out.jacobian = (Mat3<Scalar>::Identity() - out.normal * out.normal.transpose()) * dblend / len;
    return out;
}

template <typename Scalar>
struct Realization
{
    Mat32<Scalar> forward; // R(n, N(p)) dPhi
    Mat23<Scalar> inverse; // g^{-1} dPhi^T R(N(p), n)
};

/// Identification of the reference tangent plane with the plane orthogonal to
/// the Phong normal, and its metric inverse (which annihilates N(p)).
template <typename Scalar>
Realization<Scalar> realization(const TrianglePatch<Scalar>& patch, const Vec3<Scalar>& normal)
{
    const Mat3<Scalar> rot = rodrigues<Scalar>(patch.face_normal, normal);
    Realization<Scalar> r;
    r.forward = rot * patch.dphi;
    // R(N, n) = R(n, N)^T
    r.inverse = patch.g_inv * patch.dphi.transpose() * rot.transpose();
    return r;
}

template <typename Scalar>
Realization<Scalar> realization(const TrianglePatch<Scalar>& patch, const BaryPoint<Scalar>& p)
{
    return realization(patch, gauss_map(patch, p).normal);
}

/// R_i(p) = R(n_i, N(p)): transport from corner i to p.
template <typename Scalar>
Mat3<Scalar> corner_transport(const TrianglePatch<Scalar>& patch, int i, const BaryPoint<Scalar>& p)
{
    return rodrigues<Scalar>(patch.normals[i], gauss_map(patch, p).normal);
}

} // namespace tvf
