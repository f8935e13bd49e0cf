#include "horolab/codim2.hpp"

#include <algorithm>
#include <cmath>

namespace horolab::codim2 {

namespace {

// centered derivative along axis `ax` of packed component `comp`
double dcomp(const std::vector<double>& v, const GridDomain& dom, std::size_t f, int ax,
             int comp) {
    const std::size_t s = dom.stride[ax];
    return (v[(f + s) * 3 + comp] - v[(f - s) * 3 + comp]) / (2.0 * dom.spacing);
}

void require_2d(const SecondFormField2D& f, const char* op) {
    if (f.grid.m != 2) throw DimensionError(std::string(op) + ": grid must be 2-D");
    if (f.h3.size() != f.grid.n * 3 || f.h4.size() != f.grid.n * 3)
        throw DimensionError(std::string(op) + ": component fields have the wrong size");
}

}  // namespace

SecondFormField2D SecondFormField2D::make(GridDomain grid) {
    if (grid.m != 2) throw DimensionError("SecondFormField2D: grid must be 2-D");
    SecondFormField2D f;
    f.h3.assign(grid.n * 3, 0.0);
    f.h4.assign(grid.n * 3, 0.0);
    f.grid = std::move(grid);
    return f;
}

MeanCurvatureVector2D mean_curvature_vector(const SecondFormField2D& f, Exec exec) {
    require_2d(f, "mean_curvature_vector");
    const GridDomain& dom = f.grid;
    MeanCurvatureVector2D mv;
    mv.H3.assign(dom.n, 0.0);
    mv.H4.assign(dom.n, 0.0);
    mv.norm.assign(dom.n, 0.0);
    parallel_for(dom.n, exec, [&](std::size_t fl) {
        mv.H3[fl] = 0.5 * (f.h3[fl * 3 + 0] + f.h3[fl * 3 + 2]);
        mv.H4[fl] = 0.5 * (f.h4[fl * 3 + 0] + f.h4[fl * 3 + 2]);
        mv.norm[fl] = std::hypot(mv.H3[fl], mv.H4[fl]);
    });
    return mv;
}

std::array<ScalarField, 4> parallel_H_residual(const SecondFormField2D& f, Exec exec) {
    require_2d(f, "parallel_H_residual");
    const GridDomain& dom = f.grid;
    std::array<ScalarField, 4> r;
    for (auto& v : r) v.assign(dom.n, 0.0);
    for_each_at_depth(dom, 1, exec, [&](std::size_t fl, const Index&) {
        r[0][fl] = dcomp(f.h3, dom, fl, 0, 0) + dcomp(f.h3, dom, fl, 1, 1);
        r[1][fl] = dcomp(f.h3, dom, fl, 0, 1) + dcomp(f.h3, dom, fl, 1, 2);
        r[2][fl] = dcomp(f.h4, dom, fl, 0, 0) + dcomp(f.h4, dom, fl, 1, 1);
        r[3][fl] = dcomp(f.h4, dom, fl, 0, 1) + dcomp(f.h4, dom, fl, 1, 2);
    });
    return r;
}

std::array<ScalarField, 2> gamma1_harmonic_residual(const SecondFormField2D& f, Exec exec) {
    require_2d(f, "gamma1_harmonic_residual");
    const GridDomain& dom = f.grid;
    std::array<ScalarField, 2> r;
    for (auto& v : r) v.assign(dom.n, 0.0);
    for_each_at_depth(dom, 1, exec, [&](std::size_t fl, const Index&) {
        r[0][fl] = dcomp(f.h3, dom, fl, 0, 0) + dcomp(f.h3, dom, fl, 1, 1) +
                   dcomp(f.h4, dom, fl, 0, 1) + dcomp(f.h4, dom, fl, 1, 2);
        r[1][fl] = dcomp(f.h4, dom, fl, 0, 0) + dcomp(f.h4, dom, fl, 1, 1) -
                   dcomp(f.h3, dom, fl, 0, 1) - dcomp(f.h3, dom, fl, 1, 2);
    });
    return r;
}

std::array<ScalarField, 2> gamma2_harmonic_residual(const SecondFormField2D& f, Exec exec) {
    require_2d(f, "gamma2_harmonic_residual");
    const GridDomain& dom = f.grid;
    std::array<ScalarField, 2> r;
    for (auto& v : r) v.assign(dom.n, 0.0);
    for_each_at_depth(dom, 1, exec, [&](std::size_t fl, const Index&) {
        r[0][fl] = dcomp(f.h3, dom, fl, 0, 0) + dcomp(f.h3, dom, fl, 1, 1) -
                   dcomp(f.h4, dom, fl, 0, 1) - dcomp(f.h4, dom, fl, 1, 2);
        r[1][fl] = dcomp(f.h4, dom, fl, 0, 0) + dcomp(f.h4, dom, fl, 1, 1) +
                   dcomp(f.h3, dom, fl, 0, 1) + dcomp(f.h3, dom, fl, 1, 2);
    });
    return r;
}

EquivalenceReport equivalence_check(const SecondFormField2D& f, Exec exec) {
    require_2d(f, "equivalence_check");
    const GridDomain& dom = f.grid;
    const auto r39 = parallel_H_residual(f, exec);
    const auto g1 = gamma1_harmonic_residual(f, exec);
    const auto g2 = gamma2_harmonic_residual(f, exec);
    EquivalenceReport rep;
    double worst = 0.0;
    for_each_at_depth(dom, 1, Exec::serial, [&](std::size_t fl, const Index&) {
        worst = std::max(worst, std::fabs(g1[0][fl] - (r39[0][fl] + r39[3][fl])));
        worst = std::max(worst, std::fabs(g1[1][fl] - (r39[2][fl] - r39[1][fl])));
        worst = std::max(worst, std::fabs(g2[0][fl] - (r39[0][fl] - r39[3][fl])));
        worst = std::max(worst, std::fabs(g2[1][fl] - (r39[2][fl] + r39[1][fl])));
    });
    rep.max_discrepancy = worst;
    // combination matrix in the residual order (r1, r2, r3, r4)
    const double T[16] = {1, 0, 0, 1,   //
                          0, -1, 1, 0,  //
                          1, 0, 0, -1,  //
                          0, 1, 1, 0};
    rep.det_combination = smallmat::det(T, 4);
    rep.pass = worst <= 1e-12 && std::fabs(std::fabs(rep.det_combination) - 4.0) <= 1e-12;
    return rep;
}

SplitGaussDifferential split_differential(const SecondFormField2D& f, Exec exec) {
    require_2d(f, "split_differential");
    const GridDomain& dom = f.grid;
    SplitGaussDifferential sd;
    sd.a.assign(dom.n * 4, 0.0);
    sd.b.assign(dom.n * 4, 0.0);
    sd.e1.assign(dom.n, 0.0);
    sd.e2.assign(dom.n, 0.0);
    parallel_for(dom.n, exec, [&](std::size_t fl) {
        const double h311 = f.h3[fl * 3 + 0], h312 = f.h3[fl * 3 + 1], h322 = f.h3[fl * 3 + 2];
        const double h411 = f.h4[fl * 3 + 0], h412 = f.h4[fl * 3 + 1], h422 = f.h4[fl * 3 + 2];
        double* a = sd.a.data() + fl * 4;
        double* b = sd.b.data() + fl * 4;
        a[0] = h311 + h412;
        a[1] = h312 + h422;
        a[2] = h411 - h312;
        a[3] = h412 - h322;
        // second factor: pullbacks of the sign-flipped form combinations
        b[0] = h311 - h412;
        b[1] = h312 - h422;
        b[2] = h411 + h312;
        b[3] = h412 + h322;
        sd.e1[fl] = 0.5 * (a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + a[3] * a[3]);
        sd.e2[fl] = 0.5 * (b[0] * b[0] + b[1] * b[1] + b[2] * b[2] + b[3] * b[3]);
    });
    return sd;
}

AdaptedFrameReport adapted_frame(const SecondFormField2D& f, const MeanCurvatureVector2D& Hvec,
                                 Exec exec) {
    require_2d(f, "adapted_frame");
    const GridDomain& dom = f.grid;
    for (std::size_t fl = 0; fl < dom.n; ++fl)
        if (!(Hvec.norm[fl] > 0.0))
            throw DegenerateFrameError(
                "adapted_frame: |Hvec| = 0 at node " + std::to_string(fl), fl);

    AdaptedFrameReport rep;
    rep.rotated = SecondFormField2D::make(dom);
    rep.normal_angle.assign(dom.n, 0.0);
    rep.tangent_angle.assign(dom.n, 0.0);
    ScalarField off_n(dom.n, 0.0), off_t(dom.n, 0.0);
    parallel_for(dom.n, exec, [&](std::size_t fl) {
        const double psi = std::atan2(Hvec.H4[fl], Hvec.H3[fl]);
        rep.normal_angle[fl] = psi;
        const double cp = std::cos(psi), sp = std::sin(psi);
        double r3[3], r4[3];
        for (int cmp = 0; cmp < 3; ++cmp) {
            const double v3 = f.h3[fl * 3 + cmp], v4 = f.h4[fl * 3 + cmp];
            r3[cmp] = cp * v3 + sp * v4;
            r4[cmp] = -sp * v3 + cp * v4;
        }
        off_n[fl] = std::max(std::fabs(r3[1]), std::fabs(r4[1]));
        // simultaneous tangent rotation: off-diagonal of R^T S R is
        // v2 cos(2t) - v1 sin(2t) with v1 = (s11-s22)/2, v2 = s12, so pick
        // (cos 2t, sin 2t) as the smallest eigenvector of sum_alpha w w^T,
        // w = (v2, -v1).
        const double v31 = 0.5 * (r3[0] - r3[2]), v32 = r3[1];
        const double v41 = 0.5 * (r4[0] - r4[2]), v42 = r4[1];
        const double M00 = v32 * v32 + v42 * v42;
        const double M01 = -(v32 * v31 + v42 * v41);
        const double M11 = v31 * v31 + v41 * v41;
        const double tr = M00 + M11;
        const double disc = std::sqrt(std::max(0.0, 0.25 * (M00 - M11) * (M00 - M11) +
                                                       M01 * M01));
        const double lam_min = 0.5 * tr - disc;
        // eigenvector for lam_min
        double c2t, s2t;
        const double a0 = M00 - lam_min, b0 = M01;
        if (std::fabs(a0) + std::fabs(b0) < 1e-300) {
            c2t = 1.0;
            s2t = 0.0;
        } else if (std::fabs(b0) > std::fabs(a0)) {
            // (c, s) orthogonal to row (b0, M11 - lam_min)
            const double d0 = M11 - lam_min;
            const double nn = std::hypot(d0, b0);
            c2t = d0 / nn;
            s2t = -b0 / nn;
        } else {
            const double nn = std::hypot(a0, b0);
            c2t = -b0 / nn;
            s2t = a0 / nn;
        }
        const double theta = 0.5 * std::atan2(s2t, c2t);
        rep.tangent_angle[fl] = theta;
        const double ct = std::cos(theta), st = std::sin(theta);
        double* o3 = rep.rotated.h3.data() + fl * 3;
        double* o4 = rep.rotated.h4.data() + fl * 3;
        auto rot = [&](const double* s, double* o) {
            // R^T S R with R = [[ct, -st], [st, ct]]
            const double s11 = s[0], s12 = s[1], s22 = s[2];
            o[0] = ct * ct * s11 + 2.0 * ct * st * s12 + st * st * s22;
            o[1] = (s22 - s11) * ct * st + s12 * (ct * ct - st * st);
            o[2] = st * st * s11 - 2.0 * ct * st * s12 + ct * ct * s22;
        };
        rot(r3, o3);
        rot(r4, o4);
        off_t[fl] = std::max(std::fabs(o3[1]), std::fabs(o4[1]));
    });
    rep.max_offdiag_normal = *std::max_element(off_n.begin(), off_n.end());
    rep.max_offdiag_tangent = *std::max_element(off_t.begin(), off_t.end());
    return rep;
}

double codazzi_symmetry_defect(const SecondFormField2D& f, Exec exec) {
    require_2d(f, "codazzi_symmetry_defect");
    const GridDomain& dom = f.grid;
    ScalarField defect(dom.n, 0.0);
    for_each_at_depth(dom, 1, exec, [&](std::size_t fl, const Index&) {
        // h_{ijk} = d_k h_{ij}; full symmetry needs d_1 h_{i2} == d_2 h_{i1}
        double w = 0.0;
        w = std::max(w, std::fabs(dcomp(f.h3, dom, fl, 0, 1) - dcomp(f.h3, dom, fl, 1, 0)));
        w = std::max(w, std::fabs(dcomp(f.h3, dom, fl, 0, 2) - dcomp(f.h3, dom, fl, 1, 1)));
        w = std::max(w, std::fabs(dcomp(f.h4, dom, fl, 0, 1) - dcomp(f.h4, dom, fl, 1, 0)));
        w = std::max(w, std::fabs(dcomp(f.h4, dom, fl, 0, 2) - dcomp(f.h4, dom, fl, 1, 1)));
        defect[fl] = w;
    });
    return max_abs_at_depth(defect, dom, 1, Exec::serial);
}

}  // namespace horolab::codim2
