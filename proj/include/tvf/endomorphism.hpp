// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <tvf/common.hpp>

namespace tvf {

/// Closed-form inverse of a 2x2 matrix.
template <typename Derived>
Mat2<typename Derived::Scalar> inverse2(const Eigen::MatrixBase<Derived>& m)
{
    using Scalar = typename Derived::Scalar;
    const Scalar det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    Mat2<Scalar> inv;
    inv << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
    return inv / det;
}

/// An endomorphism of a 2D tangent plane in coordinates, together with the
/// metric of that plane. The metric must be symmetric positive definite.
template <typename Scalar>
struct Endo2
{
    Mat2<Scalar> m = Mat2<Scalar>::Zero();
    Mat2<Scalar> g = Mat2<Scalar>::Identity();
};

/// Metric adjoint g^{-1} m^T g.
template <typename Scalar>
Mat2<Scalar> adjoint(const Mat2<Scalar>& m, const Mat2<Scalar>& g, const Mat2<Scalar>& g_inv)
{
    return g_inv * m.transpose() * g;
}

/// Canonical inner product of linear maps, tr(g^{-1} a^T g b).
template <typename Scalar>
Scalar hom_inner_product(const Mat2<Scalar>& a, const Mat2<Scalar>& b, const Mat2<Scalar>& g, const Mat2<Scalar>& g_inv)
{
    return (g_inv * a.transpose() * g * b).trace();
}

template <typename Scalar>
Scalar hom_inner_product(const Endo2<Scalar>& a, const Endo2<Scalar>& b)
{
    return hom_inner_product<Scalar>(a.m, b.m, a.g, inverse2(a.g));
}

template <typename Scalar>
struct EndoParts
{
    Endo2<Scalar> scalar;    // (tr m / 2) Id
    Endo2<Scalar> traceless; // symmetric, trace free
    Endo2<Scalar> antisym;   // metric anti-symmetric
};

template <typename Scalar>
struct EndoPartMatrices
{
    Mat2<Scalar> scalar;
    Mat2<Scalar> traceless;
    Mat2<Scalar> antisym;
};

template <typename Scalar>
EndoPartMatrices<Scalar> decompose(const Mat2<Scalar>& m, const Mat2<Scalar>& g, const Mat2<Scalar>& g_inv)
{
    const Mat2<Scalar> adj = adjoint<Scalar>(m, g, g_inv);
    const Mat2<Scalar> sym = Scalar(0.5) * (m + adj);
    EndoPartMatrices<Scalar> parts;
    parts.scalar = Scalar(0.5) * m.trace() * Mat2<Scalar>::Identity();
    parts.traceless = sym - parts.scalar;
    parts.antisym = Scalar(0.5) * (m - adj);
    return parts;
}

/// Orthogonal split of End(V) into scalar, traceless-symmetric and
/// anti-symmetric parts with respect to the metric g.
template <typename Scalar>
EndoParts<Scalar> decompose(const Endo2<Scalar>& e)
{
    const auto parts = decompose<Scalar>(e.m, e.g, inverse2(e.g));
    return {{parts.scalar, e.g}, {parts.traceless, e.g}, {parts.antisym, e.g}};
}

} // namespace tvf
