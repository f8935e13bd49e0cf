// Damped Newton solver for the Dirichlet problem of the spacelike CMC
// equation  div( grad u / sqrt(1 - |grad u|^2) ) = m H  on a grid box,
// plus the exact solution families (hyperboloids, planes) used as oracles
// and the grid-refinement order study.
//
// The nonlinear residual is the conservative face-flux form of
// graph_geometry::cmc_residual.  The Newton operator freezes the flux
// coefficients g^{-1}(p)/sqrt(1-|p|^2) at the current gradient and
// assembles them in the same structurally symmetric flux form as
// laplace_beltrami, so the inner solve is plain preconditioned CG.  The
// equation degenerates as |grad u| -> 1; a gradient cap keeps every
// iterate uniformly elliptic and the line search rejects steps that
// violate it.  Non-convergence is a report, not an exception.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "horolab/graph_geometry.hpp"
#include "horolab/grid.hpp"

namespace horolab::solver {

struct DirichletProblem {
    GridDomain domain;
    ScalarField boundary;  // full-size field; only boundary-node entries are read
    double H = 0.0;
};

struct SolverConfig {
    double tol = 1e-10;          // residual sup-norm target
    int max_newton = 60;
    double damping = 1.0;        // initial step factor in (0, 1]
    double gradient_cap = 0.99;  // 1 - delta_solve
    double linear_tol = 1e-10;   // relative CG tolerance
    int linear_max_iter = 20000;
    bool deterministic = false;  // serial loops and serial reductions throughout
};

struct SolveReport {
    int iterations = 0;               // accepted Newton steps
    double final_residual = 0.0;      // sup norm over interior nodes
    double max_grad = 0.0;            // centered nodal gradient, interior
    bool converged = false;
    std::vector<double> residual_history;  // per accepted iterate, starting at the initial one
    bool cap_stalled = false;         // line search exhausted against the gradient cap
    long long cg_iterations = 0;
    std::string message;
};

struct SolveResult {
    geom::SpacelikeGraph graph;
    SolveReport report;
};

SolveResult solve(const DirichletProblem& problem, const SolverConfig& config);

// Closed-form field families.
struct FieldGenerator {
    std::function<double(const double*)> f;  // takes m coordinates
    ScalarField sample(const GridDomain& dom) const;
};

// u(x) = sqrt(1/H^2 + |x - center|^2) + shift, the CMC hyperboloid with
// mean curvature H > 0.
FieldGenerator exact_hyperboloid(double H, std::vector<double> center, double shift);

// u(x) = a.x + b with |a| < 1; H = 0 exactly and the Gauss map is constant.
FieldGenerator exact_plane(std::vector<double> a, double b);

struct ConvergenceReport {
    std::vector<int> sizes;
    std::vector<double> spacings;
    std::vector<double> residual_sup;   // of the exact field
    std::vector<double> solve_error;    // sup |u_solved - u_exact|
    std::vector<bool> converged;
    double order_residual = 0.0;        // least-squares slope log err vs log h
    double order_solve = 0.0;
    bool exact_family = false;          // errors at machine precision, slopes meaningless
    bool all_converged = false;
};

// Solve the Dirichlet problem with boundary data from `exact` on centered
// grids [-half, half]^m of the given sizes (each about twice the previous)
// and fit observed orders.
ConvergenceReport convergence_study(const FieldGenerator& exact, double H, double half,
                                    int m, const std::vector<int>& sizes,
                                    const SolverConfig& config);

// Least-squares slope of log(error) against log(spacing).
double fit_order(const std::vector<double>& spacings, const std::vector<double>& errors);

// Preconditioned conjugate gradients on an SPD operator given as a callback.
// Returns iterations used; relres receives the achieved relative residual.
int cg_solve(std::size_t n, const std::function<void(const double*, double*)>& apply_spd,
             const std::vector<double>& diag_precond, const std::vector<double>& rhs,
             std::vector<double>& x, double tol_rel, int max_iter, Exec exec, double* relres);

}  // namespace horolab::solver
