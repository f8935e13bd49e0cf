// Models of hyperbolic space H^m(-1): hyperboloid sheet in Minkowski space,
// upper half-space, and Poincare ball.  Isometric conversions, distance,
// the Busemann function of the canonical vertical ray, horoballs, and the
// Hessian comparison identity checker.
//
// The hyperboloid is the internal canonical model; distances convert to it.
// Busemann machinery is exposed for the vertical ray of the upper-half
// model only.
#pragma once

#include <span>
#include <vector>

#include "horolab/errors.hpp"

namespace horolab::hyp {

enum class Model { hyperboloid, upper_half, ball };

// Validation tolerance: absolute 1e-10 at unit scale, relaxed in proportion
// to the squared coordinate size so far-out (but exact) points validate.
inline constexpr double kInvariantTol = 1e-10;

struct ModelPoint {
    Model model = Model::hyperboloid;
    std::vector<double> coords;  // m+1 entries for hyperboloid, m otherwise

    int dim() const {
        return model == Model::hyperboloid ? static_cast<int>(coords.size()) - 1
                                           : static_cast<int>(coords.size());
    }
};

// The canonical vertical geodesic ray {(0,...,0,z_m) : z_m >= c} in
// upper-half coordinates; c > 0.
struct BusemannRay {
    double c = 1.0;
};

// Upper-half-space horoball {z_m > c}, boundary excluded.
struct HoroballSpec {
    double c = 1.0;
};

// Minkowski pairing -p0*q0 + sum_i pi*qi.
double lorentz_inner(std::span<const double> p, std::span<const double> q);

// Construct with invariant validation (throws InvalidPointError).
ModelPoint make_point(Model model, std::vector<double> coords);

// True if the coordinates satisfy the model invariant.
bool point_valid(const ModelPoint& p);

ModelPoint convert(const ModelPoint& p, Model target);

// Allocation-free hyperboloid -> upper-half conversion (same maps as
// convert, no validation).  x has m+1 entries, out has m.
void hyperboloid_to_upper_coords(const double* x, int m, double* out);

double hyp_distance(const ModelPoint& p, const ModelPoint& q);

// Closed-form distance between two upper-half points (no conversion).
double distance_upper_half(std::span<const double> z, std::span<const double> w);

// B_c(z) = ln(z_m / c).  Requires an upper-half point.
double busemann_eval(const ModelPoint& z, const BusemannRay& ray);

// t - d(z, c(t)) with c(t) the unit-speed ray point at height c*e^t.
// Nondecreasing in t, converges to busemann_eval from below.
double busemann_limit_approx(const ModelPoint& z, const BusemannRay& ray, double t);

bool horoball_contains(const ModelPoint& z, const HoroballSpec& h);

// Max componentwise residual of Hess B + (gamma - dB ⊗ dB) at z, computed
// from the closed form of B and the upper-half Christoffel symbols.  Zero
// (to roundoff) everywhere: the Hessian comparison is an equality on H^m.
double busemann_hessian_residual(const ModelPoint& z, const BusemannRay& ray);

// |grad B| in the hyperbolic metric at z (identically 1).
double busemann_gradient_norm(const ModelPoint& z, const BusemannRay& ray);

}  // namespace horolab::hyp
