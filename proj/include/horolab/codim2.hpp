// Spacelike surfaces in R^4_2 at the level of second-fundamental-form
// fields over a flat 2-D parameter grid: parallel-mean-curvature residuals,
// the split of the Gauss-map differential into the two H^2 factors, the
// harmonicity residuals of the factors, their energy densities, and the
// exact linear equivalence between the three residual systems.
//
// Scope: induced metric = identity, normal connection omega_34 = 0, so
// covariant derivatives of h^alpha_ij reduce to partials.  Fields are the
// data; no immersion is constructed.
#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "horolab/grid.hpp"

namespace horolab::codim2 {

// Symmetric 2x2 field components packed as [s11, s12, s22] per node.
struct SecondFormField2D {
    GridDomain grid;           // m == 2
    std::vector<double> h3;    // n*3
    std::vector<double> h4;    // n*3

    static SecondFormField2D make(GridDomain grid);
    double h(int alpha, int i, int j, std::size_t f) const {
        const auto& v = alpha == 3 ? h3 : h4;
        return v[f * 3 + i + j];  // (0,0)->0, (0,1)/(1,0)->1, (1,1)->2
    }
};

struct MeanCurvatureVector2D {
    ScalarField H3, H4;   // (1/2)(h^a_11 + h^a_22)
    ScalarField norm;     // |Hvec|
};

MeanCurvatureVector2D mean_curvature_vector(const SecondFormField2D& f,
                                            Exec exec = Exec::serial);

// The four divergence residuals whose simultaneous vanishing is parallel
// mean curvature: rows (d1 h3_11 + d2 h3_12,  d1 h3_12 + d2 h3_22,
//                        d1 h4_11 + d2 h4_12,  d1 h4_12 + d2 h4_22).
// Interior nodes, centered differences.
std::array<ScalarField, 4> parallel_H_residual(const SecondFormField2D& f,
                                               Exec exec = Exec::serial);

// Harmonicity residuals of the first split factor:
//   (r1 + r4, r3 - r2) in terms of the residuals above, evaluated by its
// own finite differences.
std::array<ScalarField, 2> gamma1_harmonic_residual(const SecondFormField2D& f,
                                                    Exec exec = Exec::serial);
// Second factor: (r1 - r4, r3 + r2).
std::array<ScalarField, 2> gamma2_harmonic_residual(const SecondFormField2D& f,
                                                    Exec exec = Exec::serial);

struct EquivalenceReport {
    double max_discrepancy = 0.0;  // worst nodal mismatch of the +/- combinations
    double det_combination = 0.0;  // determinant of the 4x4 combination matrix
    bool pass = false;             // max_discrepancy <= 1e-12 and |det| == 4
};

// Verifies nodewise that the factor-harmonicity residuals equal the stated
// +/- combinations of the parallel-mean-curvature residuals (an exact
// linear identity on shared stencils), and that the 4x4 combination matrix
// is invertible with determinant +/-4.
EquivalenceReport equivalence_check(const SecondFormField2D& f, Exec exec = Exec::serial);

struct SplitGaussDifferential {
    std::vector<double> a;  // n*4 row-major 2x2, first factor
    std::vector<double> b;  // n*4, second factor
    ScalarField e1, e2;     // energy densities (1/2) sum of squares
};

// a11 = h3_11 + h4_12, a12 = h3_12 + h4_22, a21 = h4_11 - h3_12,
// a22 = h4_12 - h3_22; b from the sign-flipped combinations.
SplitGaussDifferential split_differential(const SecondFormField2D& f,
                                          Exec exec = Exec::serial);

struct AdaptedFrameReport {
    SecondFormField2D rotated;        // after the per-node normal rotation
    ScalarField normal_angle;         // psi per node
    ScalarField tangent_angle;        // theta per node
    double max_offdiag_normal = 0.0;  // off-diagonals after the normal rotation only
    double max_offdiag_tangent = 0.0; // after the simultaneous tangent rotation
};

// Rotates the normal frame per node so e3 is parallel to the mean curvature
// vector, then computes the tangent rotation minimizing both off-diagonals
// simultaneously and reports the residual.  Throws DegenerateFrameError
// where |Hvec| = 0.
AdaptedFrameReport adapted_frame(const SecondFormField2D& f,
                                 const MeanCurvatureVector2D& Hvec, Exec exec = Exec::serial);

// Max defect of full symmetry of d_k h^alpha_ij in (i, j, k); reported, not
// enforced (it holds for genuine immersions, not for arbitrary fields).
double codazzi_symmetry_defect(const SecondFormField2D& f, Exec exec = Exec::serial);

}  // namespace horolab::codim2
