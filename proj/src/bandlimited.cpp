// SPDX-License-Identifier: Apache-2.0
#include <tvf/synth.hpp>

#include <array>
#include <cmath>
#include <random>

namespace tvf {

template <int D, int C>
BandlimitedField<D, C> BandlimitedField<D, C>::random(int bandwidth, std::uint64_t seed)
{
    if (bandwidth < 0) throw Error("band-limited field: negative bandwidth");
    BandlimitedField f;
    f.bandwidth_ = bandwidth;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    auto draw = [&] {
        Eigen::Matrix<std::complex<double>, C, 1> c;
        for (int i = 0; i < C; ++i) {
            const double re = uniform(rng);
            const double im = uniform(rng);
            c[i] = {re, im};
        }
        return c;
    };

    const int side = 2 * bandwidth + 1;
    int total = 1;
    for (int d = 0; d < D; ++d) total *= side;
    for (int idx = 0; idx < total; ++idx) {
        Eigen::Matrix<int, D, 1> k;
        int rest = idx;
        for (int d = D - 1; d >= 0; --d) {
            k[d] = rest % side - bandwidth;
            rest /= side;
        }
        int lead = 0;
        for (int d = 0; d < D && lead == 0; ++d) lead = k[d];
        if (lead < 0) continue;
        const auto c = draw();
        if (lead == 0) {
            f.constant_ = c.real();
        } else {
            f.modes_.push_back(k);
            f.coeffs_.push_back(c);
        }
    }
    return f;
}

template <int D, int C>
BandlimitedField<D, C> BandlimitedField<D, C>::constant(const Value& c)
{
    BandlimitedField f;
    f.constant_ = c;
    return f;
}

template <int D, int C>
void BandlimitedField<D, C>::eval(const Point& x, Value* value, Jacobian* jac, double* imag) const
{
    const int b = bandwidth_;
    // Per-axis phases exp(i m x_d), m in [-b, b].
    std::array<std::vector<std::complex<double>>, D> phase;
    for (int d = 0; d < D; ++d) {
        phase[d].resize(2 * b + 1);
        for (int m = -b; m <= b; ++m) phase[d][m + b] = std::polar(1.0, m * x[d]);
    }
    if (value) *value = constant_;
    if (jac) jac->setZero();
    Eigen::Matrix<std::complex<double>, C, 1> imag_sum = constant_.template cast<std::complex<double>>();
    for (size_t j = 0; j < modes_.size(); ++j) {
        const auto& k = modes_[j];
        std::complex<double> e(1.0, 0.0);
        for (int d = 0; d < D; ++d) e *= phase[d][k[d] + b];
        const Eigen::Matrix<std::complex<double>, C, 1> ce = coeffs_[j] * e;
        if (value) *value += 2.0 * ce.real();
        if (jac) *jac -= 2.0 * ce.imag() * k.template cast<double>().transpose();
        if (imag) {
            std::complex<double> conj_e(1.0, 0.0);
            for (int d = 0; d < D; ++d) conj_e *= phase[d][b - k[d]];
            imag_sum += ce + coeffs_[j].conjugate() * conj_e;
        }
    }
    if (imag) *imag = imag_sum.imag().cwiseAbs().maxCoeff();
}

template <int D, int C>
typename BandlimitedField<D, C>::Value BandlimitedField<D, C>::operator()(const Point& x) const
{
    Value v;
    eval(x, &v, nullptr, nullptr);
    return v;
}

template <int D, int C>
typename BandlimitedField<D, C>::Jacobian BandlimitedField<D, C>::jacobian(const Point& x) const
{
    Jacobian j;
    eval(x, nullptr, &j, nullptr);
    return j;
}

template <int D, int C>
double BandlimitedField<D, C>::imaginary_residual(const Point& x) const
{
    double r;
    eval(x, nullptr, nullptr, &r);
    return r;
}

template class BandlimitedField<3, 3>;
template class BandlimitedField<2, 2>;

// ------------------------------------------------------------------ sphere

Vec3<double> SphereField::operator()(const Vec3<double>& q) const
{
    const Vec3<double> z = raw_(q);
    return z - q * z.dot(q);
}

void SphereField::evaluate(const Vec3<double>& q, Vec3<double>& value, Mat3<double>& jacobian) const
{
    Vec3<double> z;
    Mat3<double> dz;
    raw_.evaluate(q, z, dz);
    value = z - q * z.dot(q);
    jacobian = dz - q * (z.transpose() + q.transpose() * dz) - z.dot(q) * Mat3<double>::Identity();
}

Mat3<double> SphereField::jacobian(const Vec3<double>& q) const
{
    Vec3<double> v;
    Mat3<double> j;
    evaluate(q, v, j);
    return j;
}

AmbientField SphereField::on_mesh(const TriangleMesh& mesh) const
{
    const SphereField self = *this;
    const TriangleMesh* m = &mesh;
    AmbientField out;
    out.value = [self, m](int tri, const BaryPoint<double>& p) -> Vec3<double> {
        const Vec3<double> psi = p.psi();
        const Vec3<double> x = psi[0] * m->corner(tri, 0) + psi[1] * m->corner(tri, 1) + psi[2] * m->corner(tri, 2);
        return self(x.normalized());
    };
    out.jacobian = [self, m](int tri, const BaryPoint<double>& p) -> Mat32<double> {
        const Vec3<double> psi = p.psi();
        const Vec3<double> x = psi[0] * m->corner(tri, 0) + psi[1] * m->corner(tri, 1) + psi[2] * m->corner(tri, 2);
        const double len = x.norm();
        const Vec3<double> q = x / len;
        Mat32<double> dphi;
        dphi.col(0) = m->corner(tri, 1) - m->corner(tri, 0);
        dphi.col(1) = m->corner(tri, 2) - m->corner(tri, 0);
        const Mat3<double> dq = (Mat3<double>::Identity() - q * q.transpose()) / len;
        return self.jacobian(q) * dq * dphi;
    };
    return out;
}

Vec3<double> sphere_bracket(const SphereField& x, const SphereField& y, const Vec3<double>& q)
{
    Vec3<double> xv, yv;
    Mat3<double> xj, yj;
    x.evaluate(q, xv, xj);
    y.evaluate(q, yv, yj);
    const Vec3<double> b = yj * xv - xj * yv;
    return b - q * b.dot(q);
}

AmbientEvaluator sphere_bracket_on_mesh(const SphereField& x, const SphereField& y, const TriangleMesh& mesh)
{
    const TriangleMesh* m = &mesh;
    return [x, y, m](int tri, const BaryPoint<double>& p) -> Vec3<double> {
        const Vec3<double> psi = p.psi();
        const Vec3<double> pos = psi[0] * m->corner(tri, 0) + psi[1] * m->corner(tri, 1) + psi[2] * m->corner(tri, 2);
        return sphere_bracket(x, y, pos.normalized());
    };
}

// ------------------------------------------------------------------- torus

Vec3<double> TorusField::pushed(const Vec2<double>& u) const
{
    return torus_differential(u[0], u[1]) * planar_(u);
}

Mat32<double> TorusField::pushed_jacobian(const Vec2<double>& u) const
{
    const double s = u[0], t = u[1];
    const double r = 2.0 + std::cos(t);
    const Vec3<double> phi_ss(-r * std::cos(s), 0.0, -r * std::sin(s));
    const Vec3<double> phi_st(std::sin(t) * std::sin(s), 0.0, -std::sin(t) * std::cos(s));
    const Vec3<double> phi_tt(-std::cos(t) * std::cos(s), -std::sin(t), -std::cos(t) * std::sin(s));
    Vec2<double> x;
    Mat2<double> dx;
    planar_.evaluate(u, x, dx);
    Mat32<double> out = torus_differential(s, t) * dx;
    out.col(0) += phi_ss * x[0] + phi_st * x[1];
    out.col(1) += phi_st * x[0] + phi_tt * x[1];
    return out;
}

AmbientField TorusField::on_mesh(const TorusMesh& torus) const
{
    const TorusField self = *this;
    const TorusMesh* tm = &torus;
    AmbientField out;
    out.value = [self, tm](int tri, const BaryPoint<double>& p) -> Vec3<double> {
        return self.pushed(torus_param_at(*tm, tri, p));
    };
    out.jacobian = [self, tm](int tri, const BaryPoint<double>& p) -> Mat32<double> {
        return self.pushed_jacobian(torus_param_at(*tm, tri, p)) * torus_param_jacobian(*tm, tri);
    };
    return out;
}

Vec2<double> planar_bracket(const BandlimitedField2D& x, const BandlimitedField2D& y, const Vec2<double>& u)
{
    Vec2<double> xv, yv;
    Mat2<double> xj, yj;
    x.evaluate(u, xv, xj);
    y.evaluate(u, yv, yj);
    return yj * xv - xj * yv;
}

AmbientEvaluator torus_bracket_on_mesh(const TorusField& x, const TorusField& y, const TorusMesh& torus)
{
    const TorusMesh* tm = &torus;
    return [x, y, tm](int tri, const BaryPoint<double>& p) -> Vec3<double> {
        const Vec2<double> u = torus_param_at(*tm, tri, p);
        return torus_differential(u[0], u[1]) * planar_bracket(x.planar(), y.planar(), u);
    };
}

} // namespace tvf
