// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <tvf/common.hpp>

namespace tvf::predicates {

/// Exact sign of det[a-c; b-c]: positive when a, b, c turn counter-clockwise.
int orient2d(const Vec2<double>& a, const Vec2<double>& b, const Vec2<double>& c);

/// Exact sign of det[a-d; b-d; c-d]: positive when d lies below the plane
/// through a, b, c (which appear counter-clockwise seen from above).
int orient3d(const Vec3<double>& a, const Vec3<double>& b, const Vec3<double>& c, const Vec3<double>& d);

/// Exact sign of the in-circle determinant: positive when d lies inside the
/// circle through the counter-clockwise triangle a, b, c.
int incircle(const Vec2<double>& a, const Vec2<double>& b, const Vec2<double>& c, const Vec2<double>& d);

/// Number of calls that fell through the floating-point filter (for tests).
long exact_fallbacks();

} // namespace tvf::predicates
