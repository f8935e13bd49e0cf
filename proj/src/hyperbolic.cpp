#include "horolab/hyperbolic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace horolab::hyp {

namespace {

double sq_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

// Involutive inversion swapping the ball and the upper half-space:
//   v  |->  2 (v + e_m) / |v + e_m|^2  -  e_m.
// Maps the ball center to the half-space basepoint e_m and back.
std::vector<double> ball_half_involution(std::span<const double> v) {
    const int m = static_cast<int>(v.size());
    std::vector<double> w(v.begin(), v.end());
    w[m - 1] += 1.0;
    const double nn = sq_norm(w);
    if (nn == 0.0) throw InvalidPointError("ball/half-space map: pole has no image");
    for (double& x : w) x *= 2.0 / nn;
    w[m - 1] -= 1.0;
    return w;
}

std::vector<double> hyperboloid_to_ball(std::span<const double> x) {
    // stereographic projection from (-1, 0, ..., 0)
    const int m = static_cast<int>(x.size()) - 1;
    std::vector<double> y(m);
    const double den = 1.0 + x[0];
    for (int i = 0; i < m; ++i) y[i] = x[i + 1] / den;
    return y;
}

std::vector<double> ball_to_hyperboloid(std::span<const double> y) {
    const int m = static_cast<int>(y.size());
    const double r2 = sq_norm(y);
    const double den = 1.0 - r2;
    if (den <= 0.0) throw InvalidPointError("ball point has norm >= 1");
    std::vector<double> x(m + 1);
    x[0] = (1.0 + r2) / den;
    for (int i = 0; i < m; ++i) x[i + 1] = 2.0 * y[i] / den;
    return x;
}

std::vector<double> raw_convert(Model from, Model to, std::span<const double> c) {
    if (from == to) return {c.begin(), c.end()};
    switch (from) {
        case Model::hyperboloid: {
            auto y = hyperboloid_to_ball(c);
            if (to == Model::ball) return y;
            return ball_half_involution(y);
        }
        case Model::ball: {
            if (to == Model::upper_half) return ball_half_involution(c);
            return ball_to_hyperboloid(c);
        }
        case Model::upper_half: {
            auto y = ball_half_involution(c);
            if (to == Model::ball) return y;
            return ball_to_hyperboloid(y);
        }
    }
    throw DimensionError("convert: unknown model");
}

}  // namespace

double lorentz_inner(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size() || p.empty())
        throw DimensionError("lorentz_inner: vectors must have equal nonzero length");
    double s = -p[0] * q[0];
    for (std::size_t i = 1; i < p.size(); ++i) s += p[i] * q[i];
    return s;
}

bool point_valid(const ModelPoint& p) {
    switch (p.model) {
        case Model::hyperboloid: {
            if (p.coords.size() < 2) return false;
            if (!(p.coords[0] > 0.0)) return false;
            const double q = lorentz_inner(p.coords, p.coords);
            const double scale = 1.0 + p.coords[0] * p.coords[0];
            return std::fabs(q + 1.0) <= kInvariantTol * scale;
        }
        case Model::upper_half:
            return !p.coords.empty() && p.coords.back() > 0.0;
        case Model::ball:
            return !p.coords.empty() && sq_norm(p.coords) < 1.0;
    }
    return false;
}

ModelPoint make_point(Model model, std::vector<double> coords) {
    ModelPoint p{model, std::move(coords)};
    if (!point_valid(p)) throw InvalidPointError("make_point: model invariant violated");
    return p;
}

ModelPoint convert(const ModelPoint& p, Model target) {
    if (!point_valid(p)) throw InvalidPointError("convert: input violates its model invariant");
    ModelPoint out{target, raw_convert(p.model, target, p.coords)};
    return out;
}

void hyperboloid_to_upper_coords(const double* x, int m, double* out) {
    // stereographic projection to the ball, then the ball/half involution
    std::array<double, 9> y{};
    const double den = 1.0 + x[0];
    for (int i = 0; i < m; ++i) y[i] = x[i + 1] / den;
    y[m - 1] += 1.0;
    double nn = 0.0;
    for (int i = 0; i < m; ++i) nn += y[i] * y[i];
    const double s = 2.0 / nn;
    for (int i = 0; i < m; ++i) out[i] = y[i] * s;
    out[m - 1] -= 1.0;
}

double hyp_distance(const ModelPoint& p, const ModelPoint& q) {
    if (!point_valid(p) || !point_valid(q))
        throw InvalidPointError("hyp_distance: invalid point");
    if (p.dim() != q.dim()) throw DimensionError("hyp_distance: dimension mismatch");
    const ModelPoint ph = convert(p, Model::hyperboloid);
    const ModelPoint qh = convert(q, Model::hyperboloid);
    const double c = -lorentz_inner(ph.coords, qh.coords);
    return std::acosh(std::max(1.0, c));
}

double distance_upper_half(std::span<const double> z, std::span<const double> w) {
    if (z.size() != w.size()) throw DimensionError("distance_upper_half: dimension mismatch");
    const double zm = z.back(), wm = w.back();
    if (!(zm > 0.0) || !(wm > 0.0))
        throw InvalidPointError("distance_upper_half: height must be positive");
    double d2 = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double t = z[i] - w[i];
        d2 += t * t;
    }
    return std::acosh(std::max(1.0, 1.0 + d2 / (2.0 * zm * wm)));
}

double busemann_eval(const ModelPoint& z, const BusemannRay& ray) {
    if (z.model != Model::upper_half)
        throw InvalidPointError("busemann_eval: expects an upper-half point");
    const double zm = z.coords.back();
    if (!(zm > 0.0)) throw DomainError("busemann_eval: height must be positive");
    if (!(ray.c > 0.0)) throw DomainError("busemann_eval: ray parameter must be positive");
    return std::log(zm / ray.c);
}

double busemann_limit_approx(const ModelPoint& z, const BusemannRay& ray, double t) {
    if (!(t > 0.0)) throw DomainError("busemann_limit_approx: t must be positive");
    if (!(ray.c > 0.0)) throw DomainError("busemann_limit_approx: ray parameter must be positive");
    const ModelPoint zu = z.model == Model::upper_half ? z : convert(z, Model::upper_half);
    std::vector<double> ray_pt(zu.coords.size(), 0.0);
    ray_pt.back() = ray.c * std::exp(t);  // unit-speed vertical ray
    return t - distance_upper_half(zu.coords, ray_pt);
}

bool horoball_contains(const ModelPoint& z, const HoroballSpec& h) {
    if (!(h.c > 0.0)) throw DomainError("horoball_contains: c must be positive");
    const ModelPoint zu = z.model == Model::upper_half ? z : convert(z, Model::upper_half);
    if (!point_valid(zu)) throw InvalidPointError("horoball_contains: invalid point");
    return zu.coords.back() > h.c;  // strict: the horosphere itself is excluded
}

// Upper-half metric gamma_ij = delta_ij / z_m^2, conformal factor
// phi = -ln z_m, Christoffels Gamma^k_ij = (delta_ik d_j phi + delta_jk d_i phi
// - delta_ij d_k phi).  For B = ln(z_m/c):
//   dB_i       = delta_im / z_m
//   Hess B_ij  = d_i d_j B - Gamma^k_ij dB_k = (delta_im delta_jm - delta_ij)/z_m^2
// which equals -(gamma_ij - dB_i dB_j) exactly.
double busemann_hessian_residual(const ModelPoint& z, const BusemannRay& ray) {
    if (z.model != Model::upper_half)
        throw InvalidPointError("busemann_hessian_residual: expects an upper-half point");
    const int m = z.dim();
    const double zm = z.coords.back();
    if (!(zm > 0.0) || !(ray.c > 0.0))
        throw DomainError("busemann_hessian_residual: heights and c must be positive");
    const double inv2 = 1.0 / (zm * zm);
    double worst = 0.0;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            const double dij = (i == j) ? 1.0 : 0.0;
            const double dBi = (i == m - 1) ? 1.0 / zm : 0.0;
            const double dBj = (j == m - 1) ? 1.0 / zm : 0.0;
            // second partials of B: only d_m d_m B = -1/z_m^2 is nonzero
            const double partial = (i == m - 1 && j == m - 1) ? -inv2 : 0.0;
            // Gamma^k_ij dB_k, only k = m-1 contributes
            const double dphi_i = (i == m - 1) ? -1.0 / zm : 0.0;
            const double dphi_j = (j == m - 1) ? -1.0 / zm : 0.0;
            const double gamma_k =
                ((i == m - 1 ? 1.0 : 0.0) * dphi_j + (j == m - 1 ? 1.0 : 0.0) * dphi_i -
                 dij * (-1.0 / zm));
            const double hess = partial - gamma_k * (1.0 / zm);
            const double target = -(dij * inv2 - dBi * dBj);
            worst = std::max(worst, std::fabs(hess - target));
        }
    }
    return worst;
}

double busemann_gradient_norm(const ModelPoint& z, const BusemannRay& ray) {
    if (z.model != Model::upper_half)
        throw InvalidPointError("busemann_gradient_norm: expects an upper-half point");
    const double zm = z.coords.back();
    if (!(zm > 0.0) || !(ray.c > 0.0))
        throw DomainError("busemann_gradient_norm: heights and c must be positive");
    // |grad B|^2 = gamma^{ij} dB_i dB_j = z_m^2 * (1/z_m)^2
    const double dBm = 1.0 / zm;
    return std::sqrt(zm * zm * dBm * dBm);
}

}  // namespace horolab::hyp
