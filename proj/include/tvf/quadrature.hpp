// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <tvf/patch.hpp>

#include <vector>

namespace tvf {

/// Points and weights on the unit right triangle; weights sum to its area 1/2.
template <typename Scalar>
struct QuadratureRule
{
    std::vector<BaryPoint<Scalar>> points;
    std::vector<Scalar> weights;

    size_t size() const { return points.size(); }
};

/// Symmetric interior 3-point rule, exact through degree 2.
template <typename Scalar = double>
QuadratureRule<Scalar> quadrature_3pt()
{
    const Scalar a = Scalar(1) / 6;
    const Scalar b = Scalar(2) / 3;
    return {{{a, a}, {b, a}, {a, b}}, {a, a, a}};
}

/// Symmetric 6-point rule (Dunavant), exact through degree 4. Used for
/// convergence studies and as a finer reference in tests.
template <typename Scalar = double>
QuadratureRule<Scalar> quadrature_6pt()
{
    const Scalar a1 = Scalar(0.44594849091596488632);
    const Scalar b1 = Scalar(1) - 2 * a1;
    const Scalar w1 = Scalar(0.22338158967801146570) / 2;
    const Scalar a2 = Scalar(0.09157621350977074346);
    const Scalar b2 = Scalar(1) - 2 * a2;
    const Scalar w2 = Scalar(0.10995174365532186764) / 2;
    return {
        {{a1, a1}, {b1, a1}, {a1, b1}, {a2, a2}, {b2, a2}, {a2, b2}},
        {w1, w1, w1, w2, w2, w2}};
}

} // namespace tvf
