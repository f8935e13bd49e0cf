// Numerical verification of the gradient-estimate machinery: the
// superharmonic comparison condition, the ratio field
// phi = |df| / (B∘f - g), the gradient-estimate report over intrinsic
// balls, Bochner / refined-Kato spot checks, the key horofunction
// inequality, the mean-curvature-vanishing chain, the scalar Liouville
// variant, and the hyperplane-rigidity flattening trend.
//
// Inequality checks sample a fixed deterministic node subset (stride 2,
// at least 2 nodes from the boundary) and use the tolerance schedule
// 10 * spacing * scale, where scale is derived from the magnitudes of the
// fields entering each check (third-difference quantities lose one order).
#pragma once

#include <cstddef>
#include <vector>

#include "horolab/cmc_solver.hpp"
#include "horolab/graph_geometry.hpp"
#include "horolab/grid.hpp"

namespace horolab::estimate {

struct ComparisonFn {
    enum class Kind { constant, field };
    Kind kind = Kind::constant;
    double value = 0.0;
    ScalarField values;  // used when kind == field; one value per node

    static ComparisonFn constant(double v) { return {Kind::constant, v, {}}; }
    static ComparisonFn field(ScalarField f) { return {Kind::field, 0.0, std::move(f)}; }
    double at(std::size_t f) const { return kind == Kind::constant ? value : values[f]; }
};

// Deterministic sample set: nodes at depth >= min_depth on a stride-2
// lattice, row-major, thinned evenly to at most max_count entries.
std::vector<std::size_t> sample_nodes(const GridDomain& dom, int min_depth,
                                      std::size_t max_count);

struct SuperharmonicReport {
    ScalarField certificate;        // Lap e^{-g} per interior node
    ScalarField grad_sq_minus_lap;  // |grad g|^2 - Lap g per interior node
    double max_certificate = 0.0;
    double tolerance = 0.0;         // 10 * spacing^2 * scale
    bool pass = false;
};

SuperharmonicReport superharmonic_check(const ComparisonFn& g, const geom::GeometryFields& geo,
                                        const GridDomain& dom, Exec exec = Exec::serial);

struct PhiField {
    ScalarField phi;   // interior nodes
    ScalarField gap;   // B∘f - g after normalization, all nodes
    double shift = 0.0;          // amount subtracted from g
    double min_gap_before = 0.0; // over the normalization node set
};

// phi = |df| / (B∘f - g) with B the Busemann function of the vertical ray
// at height c.  Throws HoroballViolationError if the gap is <= 0 anywhere
// on the normalization set; when enforce_unit_gap is set, g is shifted so
// the minimum gap is >= 1 (recorded in `shift`).  `gap_nodes` selects the
// normalization set (default: all interior nodes).
PhiField phi_field(const geom::GaussField& gauss, const geom::GeometryFields& geo,
                   const GridDomain& dom, const ComparisonFn& g, double c,
                   Exec exec = Exec::serial, const std::vector<std::size_t>* gap_nodes = nullptr,
                   bool enforce_unit_gap = true);

struct EstimateReport {
    double a = 0.0;
    double k = 0.0;            // sqrt(max(0, -measured global Ricci min))
    double k_bound = 0.0;      // m*max|H|/2, from the a-priori Ricci bound
    double sup_phi = 0.0;      // over B_{a/2}(x0)
    double implied_constant = 0.0;  // sup_phi * a / (1 + k a)
    double min_gap = 0.0;      // over B_a(x0), after normalization
    double min_gap_before = 0.0;
    double shift = 0.0;
    std::size_t ball_nodes = 0, half_ball_nodes = 0;
};

EstimateReport gradient_estimate_report(const geom::SpacelikeGraph& graph, std::size_t x0,
                                        double a, const ComparisonFn& g, double c,
                                        Exec exec = Exec::serial);

struct BochnerSample {
    std::size_t node = 0;
    double bochner_lhs = 0.0;   // (1/2) Lap |df|^2
    double bochner_rhs = 0.0;   // |ddf|^2 - k^2 |df|^2
    double kato_lhs = 0.0;      // |ddf|^2
    double kato_rhs = 0.0;      // (1 + 1/(2mn)) |grad |df||^2
    double combined_lhs = 0.0;  // |df| Lap |df|
    double combined_rhs = 0.0;  // eps |grad |df||^2 - k^2 |df|^2
};

struct BochnerReport {
    double epsilon = 0.0;  // 1/(2 m n)
    double k_sq = 0.0;
    std::vector<BochnerSample> samples;
    double viol_bochner = 0.0, viol_kato = 0.0, viol_combined = 0.0;
    double tol_bochner = 0.0, tol_kato = 0.0, tol_combined = 0.0;
    bool pass = false;
};

BochnerReport bochner_check(const geom::SpacelikeGraph& graph,
                            const std::vector<std::size_t>& samples, Exec exec = Exec::serial);

struct KeySample {
    std::size_t node = 0;
    double lhs = 0.0;  // (eps/4)|grad B∘f|^2/gap^2 - (Lap B∘f)/gap
    double rhs = 0.0;  // (eps/4)|df|^2/gap^2
    double lap_B = 0.0;
    double nonradial_energy = 0.0;  // sum over non-radial target directions
};

struct KeyInequalityReport {
    double epsilon = 0.0;
    std::vector<KeySample> samples;
    double viol_key = 0.0;       // max(0, rhs - lhs)
    double viol_concavity = 0.0; // max(0, Lap B∘f + nonradial energy)
    double tol_key = 0.0, tol_concavity = 0.0;
    double shift = 0.0;
    bool pass = false;
};

KeyInequalityReport key_inequality_check(const geom::SpacelikeGraph& graph,
                                         const ComparisonFn& g, double c,
                                         const std::vector<std::size_t>& samples,
                                         Exec exec = Exec::serial);

struct VanishingSample {
    std::size_t node = 0;
    double value = 0.0;        // |grad h|^2 + Lap h with h = -(B∘f - g)
    double half_energy = 0.0;  // (1/2)|df|^2
    double mean_term = 0.0;    // (m/2) H^2
};

struct VanishingReport {
    std::vector<VanishingSample> samples;
    double viol_energy = 0.0;  // max(0, half_energy - value)
    double viol_mean = 0.0;    // max(0, mean_term - value)
    double tol = 0.0;
    double shift = 0.0;
    bool pass = false;
};

VanishingReport mean_curvature_vanishing_check(const geom::SpacelikeGraph& graph,
                                               const ComparisonFn& g, double c,
                                               const std::vector<std::size_t>& samples,
                                               Exec exec = Exec::serial);

struct ScalarLiouvilleReport {
    ScalarField f;       // the discrete harmonic function
    ScalarField ratio;   // |grad f| / (f - g), interior
    double sup_ratio = 0.0;       // over B_{a/2}(x0)
    double implied_constant = 0.0;
    double k = 0.0;
    double min_gap = 0.0;
    double shift = 0.0;
    long long cg_iterations = 0;
};

// Solves the Laplace-Beltrami Dirichlet problem for f (boundary data given
// as a full-size field) and reports the Liouville ratio over B_{a/2}(x0).
// geo needs shape fields populated (k is measured from the Ricci minimum).
ScalarLiouvilleReport scalar_liouville_check(const geom::GeometryFields& geo,
                                             const GridDomain& dom,
                                             const ScalarField& boundary,
                                             const ComparisonFn& g, std::size_t x0, double a,
                                             Exec exec = Exec::serial);

// Boundary data family for the flattening trend: tilted plane plus a
// compactly supported ridge profile in the last coordinate,
//   u(x) = tilt * x_0 + amp * (1 - (x_{m-1}/width)^2)^3 on |x_{m-1}| < width.
solver::FieldGenerator tilted_plane_bump(double tilt, double amp, double width, int m);

struct RigidityTrendConfig {
    std::vector<double> a_list{2.0, 4.0, 8.0};
    double tilt = 0.3;
    double bump_amp = 0.25;   // 0 => pure plane data
    double bump_width = 1.0;
    double c = 0.3;           // horoball height
    int m = 2;
    int nodes_per_unit = 16;  // grid spacing 1/nodes_per_unit
    solver::SolverConfig solver;
};

struct RigidityTrendEntry {
    double a = 0.0;
    int nodes = 0;
    bool solved = false;
    bool horoball_ok = false;
    double min_height = 0.0;  // min Gauss height over interior nodes
    double sup_h = 0.0;       // sup sqrt(|h|^2) over B_{a/2}(center)
};

struct RigidityTrendReport {
    std::vector<RigidityTrendEntry> entries;
    std::vector<double> ratios;  // successive sup_h ratios
    bool strictly_decreasing = false;
    bool partial = false;             // some solve failed
    bool horoball_violation = false;  // some Gauss image left the horoball
};

// Solves the maximal (H = 0) Dirichlet problem on [-a, a]^m for each a and
// reports the decay of sup |h| over B_{a/2}; if the Gauss image leaves
// {z_m > c} the entry is flagged instead of trended.
RigidityTrendReport hyperplane_rigidity_trend(const RigidityTrendConfig& config);

}  // namespace horolab::estimate
