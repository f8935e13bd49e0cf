// Discrete differential geometry of spacelike graphs x0 = u(x) in Minkowski
// space R^{m+1}_1: induced metric, second fundamental form, mean curvature,
// Gauss map into the hyperboloid model, energy density, tension field,
// Laplace-Beltrami operator, intrinsic balls, and Ricci bounds.
//
// Discretization: uniform grid, centered second-order differences, flux
// form for all divergence-type operators.  Curvature fields live on
// interior nodes (boundary entries zero); first-derivative fields extend
// to the boundary with one-sided stencils so flux operators reach the full
// one-node margin.  Sup norms exclude the one-node margin; quantities built
// from third differences are read two nodes in.
#pragma once

#include <cstddef>
#include <vector>

#include "horolab/grid.hpp"
#include "horolab/hyperbolic.hpp"

namespace horolab::geom {

struct SpacelikeGraph {
    GridDomain domain;
    ScalarField u;       // one value per node
    double slack = 1e-6; // delta: max interior |grad u| <= 1 - delta
};

struct SpacelikeReport {
    bool spacelike = false;
    double max_gradient = 0.0;  // centered differences over interior nodes
};

struct GeometryFields {
    int m = 0;
    std::size_t n = 0;
    // first-derivative data, defined on all nodes (one-sided at boundary)
    std::vector<double> grad;        // n*m
    std::vector<double> g;           // n*m*m, g_ij = delta_ij - u_i u_j
    std::vector<double> g_inv;       // n*m*m
    std::vector<double> det_g;       // n
    std::vector<double> sqrt_det_g;  // n
    std::vector<double> frame;       // n*m*m; row i = coefficients of e_i in the
                                     // coordinate tangent basis (Gram-Schmidt, axis 1 first)
    // curvature data, interior nodes only
    std::vector<double> h;           // n*m*m, h_ij = u_ij / sqrt(1-|grad u|^2)
    std::vector<double> H;           // n, (1/m) g^{ij} h_ij
    std::vector<double> h_norm_sq;   // n, g^{ik} g^{jl} h_ij h_kl
    bool metric_ready = false;
    bool shape_ready = false;

    const double* g_at(std::size_t f) const { return g.data() + f * m * m; }
    const double* g_inv_at(std::size_t f) const { return g_inv.data() + f * m * m; }
    const double* h_at(std::size_t f) const { return h.data() + f * m * m; }
    const double* frame_at(std::size_t f) const { return frame.data() + f * m * m; }
    const double* grad_at(std::size_t f) const { return grad.data() + f * m; }
};

struct GaussField {
    int m = 0;
    std::size_t n = 0;
    std::vector<double> nu;        // n*(m+1), hyperboloid points (all nodes)
    std::vector<double> df_fd;     // n*m*m, frame components by finite differences (interior)
    std::vector<double> df_shape;  // n*m*m, frame components via the second fundamental form
    std::vector<double> df_gap;    // n, max componentwise disagreement of the two routes
    std::vector<double> energy;    // n, |df|^2 = g^{ij} <d_i nu, d_j nu> (interior)

    const double* nu_at(std::size_t f) const { return nu.data() + f * (m + 1); }
};

struct IntrinsicBall {
    std::size_t center = 0;
    double radius = 0.0;
    std::vector<std::size_t> nodes;  // flat indices with dist <= radius
    ScalarField dist;                // full grid; +inf outside the interior
    bool clipped = false;            // ball reached the innermost interior ring
};

struct TensionField {
    std::vector<double> tau;   // n*m, upper-half components (interior)
    ScalarField norm;          // n, hyperbolic norm of tau (interior)
};

struct RicciReport {
    ScalarField min_eig;   // per-node smallest Ricci eigenvalue (orthonormal frame)
    double global_min = 0.0;
    double bound = 0.0;    // -m^2 max(H)^2 / 4, the a-priori lower bound
    bool bound_ok = false; // min_eig >= bound - 1e-10 everywhere
};

SpacelikeReport check_spacelike(const ScalarField& u, const GridDomain& dom, double delta,
                                Exec exec = Exec::serial);

// Metric parts only (grad, g, g_inv, det, frame).
GeometryFields induced_metric(const SpacelikeGraph& graph, Exec exec = Exec::serial);

// Metric parts plus h, H, |h|^2.
GeometryFields shape_and_mean_curvature(const SpacelikeGraph& graph, Exec exec = Exec::serial);

// Conservative flux-form evaluation of div(grad u / sqrt(1-|grad u|^2)) - mH
// at interior nodes.
ScalarField cmc_residual(const SpacelikeGraph& graph, double H, Exec exec = Exec::serial);

GaussField gauss_map(const SpacelikeGraph& graph, const GeometryFields& geo,
                     Exec exec = Exec::serial);
GaussField gauss_map(const SpacelikeGraph& graph, Exec exec = Exec::serial);

// |df|^2 = g^{ij} <P d_i nu, P d_j nu>_L with P the projection onto the
// tangent space of the hyperboloid at nu.  Interior nodes.
ScalarField energy_density(const GaussField& gauss, const GeometryFields& geo,
                           const GridDomain& dom, Exec exec = Exec::serial);

// Flux-form Laplace-Beltrami (1/sqrt g) d_i(sqrt g g^{ij} d_j phi) at interior
// nodes; diagonal terms via face fluxes, cross terms via nested centered
// differences, which makes the operator exactly self-adjoint in the
// sqrt(g)-weighted inner product on compactly supported fields.
ScalarField laplace_beltrami(const ScalarField& phi, const GeometryFields& geo,
                             const GridDomain& dom, Exec exec = Exec::serial);

// Shared kernel: sum_a D-_a(Aface_aa D+_a phi) + sum_{a!=b} Dc_a(A_ab Dc_b phi)
// with nodal coefficient field A (n*m*m); face coefficients are endpoint
// averages of A_aa.  Output on interior nodes.
void apply_div_form(const std::vector<double>& A, const ScalarField& phi, const GridDomain& dom,
                    ScalarField& out, Exec exec);

// Tension of the Gauss map in upper-half coordinates of the target:
// tau^a = Lap f^a + Gamma^a_{bc}(f) g^{ij} d_i f^b d_j f^c.  Populated two
// rings in from the boundary (third-difference stencil); sup norms read the
// same region.
TensionField tension_field(const GaussField& gauss, const GeometryFields& geo,
                           const GridDomain& dom, Exec exec = Exec::serial);

// Dijkstra ball over the full diagonal stencil on interior nodes with edge
// lengths sqrt(g_ij v^i v^j) averaged at the endpoints.
IntrinsicBall intrinsic_ball(const GeometryFields& geo, const GridDomain& dom,
                             std::size_t center, double radius);

RicciReport ricci_min(const GeometryFields& geo, const GridDomain& dom,
                      Exec exec = Exec::serial);

// Upper-half height of a hyperboloid Gauss vector without model conversion:
// 1 / (nu_0 + nu_m).  Used as an independent oracle and for cheap horoball
// screening.
double gauss_height(const double* nu, int m);

}  // namespace horolab::geom
