// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <tvf/common.hpp>

#include <Eigen/Geometry>

#include <array>
#include <sstream>

namespace tvf {

/// Rotations are refused when 1 + <v, w> falls below this.
inline constexpr double kAntipodalEpsilon = 1e-8;

/// Minimal-angle rotation taking unit vector `v` to unit vector `w`:
///
///   R = Id + K + K^2 / (1 + <v,w>),  K = w v^T - v w^T.
///
/// Throws AntipodalError when v and w are (nearly) antipodal.
template <typename Scalar>
Mat3<Scalar> rodrigues(const Vec3<Scalar>& v, const Vec3<Scalar>& w)
{
    const Scalar c = v.dot(w);
    if (!(Scalar(1) + c > Scalar(kAntipodalEpsilon))) {
        std::ostringstream msg;
        msg << "rodrigues rotation undefined for antipodal vectors (1 + <v,w> = " << (Scalar(1) + c) << ")";
        throw AntipodalError(msg.str());
    }
    const Mat3<Scalar> k = w * v.transpose() - v * w.transpose();
    return Mat3<Scalar>::Identity() + k + (k * k) / (Scalar(1) + c);
}

/// Derivatives of R(v, w(s,t)) with respect to s and t, given the 3x2
/// Jacobian `dw` of the target direction. `v` is held fixed.
template <typename Scalar>
std::array<Mat3<Scalar>, 2> rodrigues_derivative(
    const Vec3<Scalar>& v, const Vec3<Scalar>& w, const Mat32<Scalar>& dw)
{
    const Scalar c = v.dot(w);
    if (!(Scalar(1) + c > Scalar(kAntipodalEpsilon))) {
        throw AntipodalError("rodrigues derivative undefined for antipodal vectors");
    }
    const Scalar inv = Scalar(1) / (Scalar(1) + c);
    const Mat3<Scalar> k = w * v.transpose() - v * w.transpose();
    const Mat3<Scalar> k2 = k * k;
    std::array<Mat3<Scalar>, 2> out;
    for (int a = 0; a < 2; ++a) {
        const Vec3<Scalar> d = dw.col(a);
        const Mat3<Scalar> dk = d * v.transpose() - v * d.transpose();
        const Scalar dc = v.dot(d);
        out[a] = dk + (dk * k + k * dk) * inv - k2 * (dc * inv * inv);
    }
    return out;
}

} // namespace tvf
