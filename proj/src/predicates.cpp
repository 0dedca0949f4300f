// SPDX-License-Identifier: Apache-2.0
// Floating-point filter with an exact fallback on nonoverlapping expansions.
#include <tvf/predicates.hpp>

#include <atomic>
#include <cmath>
#include <limits>
#include <vector>

namespace tvf::predicates {

namespace {

using Expansion = std::vector<double>;

std::atomic<long> fallbacks{0};

constexpr double kEps = std::numeric_limits<double>::epsilon() / 2; // 2^-53
constexpr double kOrient2dBound = (3.0 + 16.0 * kEps) * kEps;
constexpr double kOrient3dBound = (7.0 + 56.0 * kEps) * kEps;
constexpr double kIncircleBound = (10.0 + 96.0 * kEps) * kEps;

inline void two_sum(double a, double b, double& x, double& y)
{
    x = a + b;
    const double bv = x - a;
    const double av = x - bv;
    y = (a - av) + (b - bv);
}

inline void two_product(double a, double b, double& x, double& y)
{
    x = a * b;
    y = std::fma(a, b, -x);
}

// e + b, zero components dropped; e nonoverlapping, increasing magnitude.
Expansion grow(const Expansion& e, double b)
{
    Expansion h;
    h.reserve(e.size() + 1);
    double q = b;
    for (double c : e) {
        double sum, err;
        two_sum(q, c, sum, err);
        if (err != 0.0) h.push_back(err);
        q = sum;
    }
    if (q != 0.0 || h.empty()) h.push_back(q);
    return h;
}

Expansion add(Expansion e, const Expansion& f)
{
    for (double c : f) e = grow(e, c);
    return e;
}

Expansion negate(Expansion e)
{
    for (double& c : e) c = -c;
    return e;
}

Expansion scale(const Expansion& e, double b)
{
    Expansion h{0.0};
    for (double c : e) {
        double p, err;
        two_product(c, b, p, err);
        h = grow(h, err);
        h = grow(h, p);
    }
    return h;
}

Expansion mul(const Expansion& e, const Expansion& f)
{
    Expansion h{0.0};
    for (double c : f) h = add(h, scale(e, c));
    return h;
}

Expansion diff(double a, double b)
{
    double x, y;
    two_sum(a, -b, x, y);
    return y != 0.0 ? Expansion{y, x} : Expansion{x};
}

int sign(const Expansion& e)
{
    for (auto it = e.rbegin(); it != e.rend(); ++it) {
        if (*it > 0.0) return 1;
        if (*it < 0.0) return -1;
    }
    return 0;
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

// det of [[a, b], [c, d]] on expansions.
Expansion det2(const Expansion& a, const Expansion& b, const Expansion& c, const Expansion& d)
{
    return add(mul(a, d), negate(mul(b, c)));
}

} // namespace

long exact_fallbacks() { return fallbacks.load(); }

int orient2d(const Vec2<double>& a, const Vec2<double>& b, const Vec2<double>& c)
{
    const double left = (a.x() - c.x()) * (b.y() - c.y());
    const double right = (a.y() - c.y()) * (b.x() - c.x());
    const double det = left - right;
    const double bound = kOrient2dBound * (std::abs(left) + std::abs(right));
    if (std::abs(det) > bound) return sign_of(det);

    ++fallbacks;
    return sign(det2(diff(a.x(), c.x()), diff(a.y(), c.y()), diff(b.x(), c.x()), diff(b.y(), c.y())));
}

int orient3d(const Vec3<double>& a, const Vec3<double>& b, const Vec3<double>& c, const Vec3<double>& d)
{
    const Vec3<double> ad = a - d, bd = b - d, cd = c - d;
    const double bdxcdy = bd.x() * cd.y(), cdxbdy = cd.x() * bd.y();
    const double cdxady = cd.x() * ad.y(), adxcdy = ad.x() * cd.y();
    const double adxbdy = ad.x() * bd.y(), bdxady = bd.x() * ad.y();
    const double det = ad.z() * (bdxcdy - cdxbdy) + bd.z() * (cdxady - adxcdy) + cd.z() * (adxbdy - bdxady);
    const double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * std::abs(ad.z())
        + (std::abs(cdxady) + std::abs(adxcdy)) * std::abs(bd.z())
        + (std::abs(adxbdy) + std::abs(bdxady)) * std::abs(cd.z());
    if (std::abs(det) > kOrient3dBound * permanent) return sign_of(det);

    ++fallbacks;
    const Expansion ax = diff(a.x(), d.x()), ay = diff(a.y(), d.y()), az = diff(a.z(), d.z());
    const Expansion bx = diff(b.x(), d.x()), by = diff(b.y(), d.y()), bz = diff(b.z(), d.z());
    const Expansion cx = diff(c.x(), d.x()), cy = diff(c.y(), d.y()), cz = diff(c.z(), d.z());
    Expansion total = mul(az, det2(bx, by, cx, cy));
    total = add(total, mul(bz, det2(cx, cy, ax, ay)));
    total = add(total, mul(cz, det2(ax, ay, bx, by)));
    return sign(total);
}

int incircle(const Vec2<double>& a, const Vec2<double>& b, const Vec2<double>& c, const Vec2<double>& d)
{
    const double adx = a.x() - d.x(), ady = a.y() - d.y();
    const double bdx = b.x() - d.x(), bdy = b.y() - d.y();
    const double cdx = c.x() - d.x(), cdy = c.y() - d.y();
    const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
    const double cdxady = cdx * ady, adxcdy = adx * cdy;
    const double adxbdy = adx * bdy, bdxady = bdx * ady;
    const double alift = adx * adx + ady * ady;
    const double blift = bdx * bdx + bdy * bdy;
    const double clift = cdx * cdx + cdy * cdy;
    const double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady);
    const double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * alift
        + (std::abs(cdxady) + std::abs(adxcdy)) * blift + (std::abs(adxbdy) + std::abs(bdxady)) * clift;
    if (std::abs(det) > kIncircleBound * permanent) return sign_of(det);

    ++fallbacks;
    const Expansion ax = diff(a.x(), d.x()), ay = diff(a.y(), d.y());
    const Expansion bx = diff(b.x(), d.x()), by = diff(b.y(), d.y());
    const Expansion cx = diff(c.x(), d.x()), cy = diff(c.y(), d.y());
    const Expansion al = add(mul(ax, ax), mul(ay, ay));
    const Expansion bl = add(mul(bx, bx), mul(by, by));
    const Expansion cl = add(mul(cx, cx), mul(cy, cy));
    Expansion total = mul(al, det2(bx, by, cx, cy));
    total = add(total, mul(bl, det2(cx, cy, ax, ay)));
    total = add(total, mul(cl, det2(ax, ay, bx, by)));
    return sign(total);
}

} // namespace tvf::predicates
