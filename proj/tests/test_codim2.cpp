#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "horolab/codim2.hpp"

using namespace horolab;
using namespace horolab::codim2;

namespace {

using FieldFn = std::function<double(double, double)>;

SecondFormField2D make_field(const GridDomain& dom, const FieldFn& h311, const FieldFn& h312,
                             const FieldFn& h322, const FieldFn& h411, const FieldFn& h412,
                             const FieldFn& h422) {
    auto f = SecondFormField2D::make(dom);
    for_each_node(dom, Exec::serial, [&](std::size_t fl, const Index& idx) {
        const double x = dom.coord(0, idx[0]), y = dom.coord(1, idx[1]);
        f.h3[fl * 3 + 0] = h311(x, y);
        f.h3[fl * 3 + 1] = h312(x, y);
        f.h3[fl * 3 + 2] = h322(x, y);
        f.h4[fl * 3 + 0] = h411(x, y);
        f.h4[fl * 3 + 1] = h412(x, y);
        f.h4[fl * 3 + 2] = h422(x, y);
    });
    return f;
}

FieldFn zero = [](double, double) { return 0.0; };

// smooth random trigonometric component
FieldFn random_component(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double a = u(rng), b = u(rng), kx = 2.0 * u(rng), ky = 2.0 * u(rng), ph = 3.0 * u(rng);
    return [=](double x, double y) {
        return a * std::sin(kx * x + ky * y + ph) + b * std::cos(kx * y - ky * x);
    };
}

}  // namespace

TEST_CASE("parallel mean curvature residuals") {
    const auto dom = GridDomain::centered(1.0, 33, 2);
    // constant fields: all four residuals vanish identically
    {
        auto cst = [](double v) { return FieldFn([v](double, double) { return v; }); };
        const auto f = make_field(dom, cst(1.0), cst(-0.5), cst(2.0), cst(0.3), cst(0.0),
                                  cst(-1.0));
        const auto r = parallel_H_residual(f);
        for (const auto& field : r)
            CHECK(max_abs_at_depth(field, dom, 1, Exec::serial) == 0.0);
    }
    // h3_11 = y, everything else zero: no derivative enters the residuals
    {
        const auto f = make_field(dom, [](double, double y) { return y; }, zero, zero, zero,
                                  zero, zero);
        const auto r = parallel_H_residual(f);
        for (const auto& field : r)
            CHECK(max_abs_at_depth(field, dom, 1, Exec::serial) < 1e-13);
    }
    // h3_11 = x: the first residual is identically one
    {
        const auto f = make_field(dom, [](double x, double) { return x; }, zero, zero, zero,
                                  zero, zero);
        const auto r = parallel_H_residual(f);
        for_each_at_depth(dom, 1, Exec::serial, [&](std::size_t fl, const Index&) {
            CHECK(r[0][fl] == doctest::Approx(1.0).epsilon(1e-12));
        });
        CHECK(max_abs_at_depth(r[1], dom, 1, Exec::serial) < 1e-13);
    }
}

TEST_CASE("factor harmonicity equals the +/- residual combinations") {
    const auto dom = GridDomain::centered(1.0, 33, 2);
    std::mt19937_64 rng(7);  // seeded random smooth fields
    for (int trial = 0; trial < 20; ++trial) {
        const auto f = make_field(dom, random_component(rng), random_component(rng),
                                  random_component(rng), random_component(rng),
                                  random_component(rng), random_component(rng));
        const auto rep = equivalence_check(f);
        CHECK(rep.pass);
        CHECK(rep.max_discrepancy <= 1e-12);
        CHECK(std::fabs(rep.det_combination) == doctest::Approx(4.0).epsilon(1e-14));
    }
}

TEST_CASE("divergence-free construction satisfies every residual system") {
    // polynomial fields with degree <= 2 per variable are differentiated
    // exactly by centered stencils; rows are built divergence-free
    const auto dom = GridDomain::centered(1.0, 17, 2);
    const auto f = make_field(
        dom, [](double, double y) { return y * y; },          // h3_11
        [](double x, double) { return x * x; },               // h3_12
        [](double x, double y) { return -2.0 * x * y; },      // h3_22
        [](double x, double y) { return 2.0 * x * y; },       // h4_11
        [](double, double y) { return -y * y; },              // h4_12
        [](double x, double) { return x * x; });              // h4_22
    for (const auto& field : parallel_H_residual(f))
        CHECK(max_abs_at_depth(field, dom, 1, Exec::serial) < 1e-12);
    for (const auto& field : gamma1_harmonic_residual(f))
        CHECK(max_abs_at_depth(field, dom, 1, Exec::serial) < 1e-12);
    for (const auto& field : gamma2_harmonic_residual(f))
        CHECK(max_abs_at_depth(field, dom, 1, Exec::serial) < 1e-12);
}

TEST_CASE("split differential block and energies") {
    const auto dom = GridDomain::centered(1.0, 9, 2);
    // zero fields
    {
        const auto sd = split_differential(SecondFormField2D::make(dom));
        CHECK(max_abs_at_depth(sd.e1, dom, 0, Exec::serial) == 0.0);
        CHECK(max_abs_at_depth(sd.e2, dom, 0, Exec::serial) == 0.0);
    }
    // adapted diagonal fields: a11 = lambda, a12 = sigma, a21 = rho,
    // a22 = -mu, and the two factor energies agree exactly
    {
        const double lam = 1.3, mu = -0.7, rho = 0.4, sig = 2.1;
        auto cst = [](double v) { return FieldFn([v](double, double) { return v; }); };
        const auto f = make_field(dom, cst(lam), zero, cst(mu), cst(rho), zero, cst(sig));
        const auto sd = split_differential(f);
        for_each_node(dom, Exec::serial, [&](std::size_t fl, const Index&) {
            CHECK(sd.a[fl * 4 + 0] == lam);
            CHECK(sd.a[fl * 4 + 1] == sig);
            CHECK(sd.a[fl * 4 + 2] == rho);
            CHECK(sd.a[fl * 4 + 3] == -mu);
            const double expect = 0.5 * (lam * lam + mu * mu + rho * rho + sig * sig);
            CHECK(sd.e1[fl] == doctest::Approx(expect).epsilon(1e-15));
            CHECK(sd.e2[fl] == sd.e1[fl]);  // exact equality in adapted frames
        });
    }
}

TEST_CASE("split differential is linear in the fields; energies are not") {
    const auto dom = GridDomain::centered(1.0, 9, 2);
    std::mt19937_64 rng(23);
    const auto f = make_field(dom, random_component(rng), random_component(rng),
                              random_component(rng), random_component(rng),
                              random_component(rng), random_component(rng));
    const auto g = make_field(dom, random_component(rng), random_component(rng),
                              random_component(rng), random_component(rng),
                              random_component(rng), random_component(rng));
    const double al = 0.625, be = -1.5;  // exactly representable
    auto combo = SecondFormField2D::make(dom);
    for (std::size_t i = 0; i < combo.h3.size(); ++i) {
        combo.h3[i] = al * f.h3[i] + be * g.h3[i];
        combo.h4[i] = al * f.h4[i] + be * g.h4[i];
    }
    const auto sf = split_differential(f);
    const auto sg = split_differential(g);
    const auto sc = split_differential(combo);
    for (std::size_t i = 0; i < sc.a.size(); ++i) {
        CHECK(sc.a[i] == doctest::Approx(al * sf.a[i] + be * sg.a[i]).epsilon(1e-13));
        CHECK(sc.b[i] == doctest::Approx(al * sf.b[i] + be * sg.b[i]).epsilon(1e-13));
    }
}

TEST_CASE("total energy doubles the factor energy in adapted diagonal frames") {
    const auto dom = GridDomain::centered(1.0, 9, 2);
    auto cst = [](double v) { return FieldFn([v](double, double) { return v; }); };
    const auto f = make_field(dom, cst(0.9), zero, cst(-0.4), cst(1.1), zero, cst(0.2));
    const auto sd = split_differential(f);
    for_each_node(dom, Exec::serial, [&](std::size_t fl, const Index&) {
        CHECK(sd.e1[fl] + sd.e2[fl] == doctest::Approx(2.0 * sd.e1[fl]).epsilon(1e-15));
    });
}

TEST_CASE("adapted frame recovers diagonal forms") {
    const auto dom = GridDomain::centered(1.0, 9, 2);
    auto diag_field = [&](double l3, double m3, double l4, double m4) {
        auto cst = [](double v) { return FieldFn([v](double, double) { return v; }); };
        return make_field(dom, cst(l3), zero, cst(m3), cst(l4), zero, cst(m4));
    };

    // already adapted: identity rotations, zero residual
    {
        const auto f = diag_field(1.0, 0.5, 0.2, -0.2);  // H3 > 0, H4 = 0
        const auto rep = adapted_frame(f, mean_curvature_vector(f));
        CHECK(rep.max_offdiag_normal <= 1e-14);
        CHECK(rep.max_offdiag_tangent <= 1e-14);
        for_each_node(dom, Exec::serial, [&](std::size_t fl, const Index&) {
            CHECK(rep.normal_angle[fl] == 0.0);
            CHECK(rep.tangent_angle[fl] == 0.0);
        });
    }
    // normal frame rotated by a constant angle: the off-diagonals come back
    {
        const auto d = diag_field(1.0, 0.5, 0.2, -0.2);
        const double psi0 = 0.6;
        auto rot = SecondFormField2D::make(dom);
        for (std::size_t i = 0; i < rot.h3.size(); ++i) {
            rot.h3[i] = std::cos(psi0) * d.h3[i] - std::sin(psi0) * d.h4[i];
            rot.h4[i] = std::sin(psi0) * d.h3[i] + std::cos(psi0) * d.h4[i];
        }
        const auto rep = adapted_frame(rot, mean_curvature_vector(rot));
        CHECK(rep.max_offdiag_normal <= 1e-12);
        CHECK(rep.max_offdiag_tangent <= 1e-12);
    }
    // tangent-rotated commuting pair: the simultaneous rotation kills both
    // off-diagonals
    {
        const auto d = diag_field(1.4, 0.3, -0.5, 0.8);
        const double th0 = 0.35, ct = std::cos(th0), st = std::sin(th0);
        auto rot = SecondFormField2D::make(dom);
        auto rot_sym = [&](const double* s, double* o) {
            // R S R^T, the inverse of the frame change applied by the op
            o[0] = ct * ct * s[0] - 2.0 * ct * st * s[1] + st * st * s[2];
            o[1] = (s[0] - s[2]) * ct * st + s[1] * (ct * ct - st * st);
            o[2] = st * st * s[0] + 2.0 * ct * st * s[1] + ct * ct * s[2];
        };
        for (std::size_t fl = 0; fl < dom.n; ++fl) {
            rot_sym(d.h3.data() + fl * 3, rot.h3.data() + fl * 3);
            rot_sym(d.h4.data() + fl * 3, rot.h4.data() + fl * 3);
        }
        const auto rep = adapted_frame(rot, mean_curvature_vector(rot));
        CHECK(rep.max_offdiag_tangent <= 1e-10);
    }
    // zero mean curvature vector is a degenerate frame
    {
        const auto f = diag_field(1.0, -1.0, 0.5, -0.5);  // trace-free: Hvec = 0
        CHECK_THROWS_AS(adapted_frame(f, mean_curvature_vector(f)), DegenerateFrameError);
    }
}

TEST_CASE("codazzi symmetry defect is reported, not enforced") {
    const auto dom = GridDomain::centered(1.0, 17, 2);
    // gradient-of-potential fields have symmetric derivatives
    const auto sym = make_field(
        dom, [](double x, double y) { return x * y; },
        [](double x, double y) { return 0.5 * (x * x + y * y); },
        [](double x, double y) { return x * y; }, zero, zero, zero);
    CHECK(codazzi_symmetry_defect(sym) < 1e-12);
    // generic fields have an order-one defect
    const auto asym = make_field(dom, [](double, double y) { return y; }, zero, zero, zero,
                                 zero, zero);
    CHECK(codazzi_symmetry_defect(asym) == doctest::Approx(1.0).epsilon(1e-12));
}
