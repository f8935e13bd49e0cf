// Acceptance suite: every criterion runs at its stated tolerance and prints
// one PASS/FAIL line.  Exit code 0 iff all criteria pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "horolab/cmc_solver.hpp"
#include "horolab/codim2.hpp"
#include "horolab/estimate_lab.hpp"
#include "horolab/graph_geometry.hpp"
#include "horolab/hyperbolic.hpp"

using namespace horolab;

namespace {

int g_failures = 0;

struct Criterion {
    int id;
    std::string name;
    bool pass = true;
    std::vector<std::string> notes;
    double seconds = 0.0;

    void expect(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            notes.push_back("FAILED: " + what);
        }
    }
    void note(const std::string& s) { notes.push_back(s); }
};

void run_criterion(int id, const std::string& name, double time_budget,
                   const std::function<void(Criterion&)>& body) {
    Criterion c{id, name, true, {}, 0.0};
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.pass = false;
        c.notes.push_back(std::string("exception: ") + e.what());
    }
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (time_budget > 0.0 && c.seconds > time_budget) {
        c.pass = false;
        c.notes.push_back("runtime " + std::to_string(c.seconds) + "s exceeds budget " +
                          std::to_string(time_budget) + "s");
    }
    std::printf("[%s] criterion %2d: %s (%.2fs)\n", c.pass ? "PASS" : "FAIL", id, name.c_str(),
                c.seconds);
    for (const auto& n : c.notes) std::printf("         - %s\n", n.c_str());
    if (!c.pass) ++g_failures;
}

ScalarField sample(const GridDomain& dom, const std::function<double(const double*)>& f) {
    ScalarField out(dom.n, 0.0);
    for_each_node(dom, Exec::serial, [&](std::size_t fl, const Index& idx) {
        std::array<double, kMaxDim> x{};
        dom.coords(idx.data(), x.data());
        out[fl] = f(x.data());
    });
    return out;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

solver::SolveResult solve_or_fail(Criterion& c, const solver::DirichletProblem& pb,
                                  const solver::SolverConfig& cfg) {
    auto sr = solver::solve(pb, cfg);
    c.expect(sr.report.converged, "solve converged (" + sr.report.message + ")");
    return sr;
}

double rel_energy_discrepancy(const geom::SpacelikeGraph& graph) {
    const auto geo = geom::shape_and_mean_curvature(graph, Exec::omp);
    const auto gauss = geom::gauss_map(graph, geo, Exec::omp);
    double diff = 0.0, scale = 0.0;
    for_each_at_depth(graph.domain, 1, Exec::serial, [&](std::size_t f, const Index&) {
        diff = std::max(diff, std::fabs(gauss.energy[f] - geo.h_norm_sq[f]));
        scale = std::max(scale, std::fabs(geo.h_norm_sq[f]));
    });
    return diff / std::max(scale, 1e-14);
}

}  // namespace

int main() {
    solver::SolverConfig cfg;  // defaults: tol 1e-10, cap 0.99

    run_criterion(1, "exactness on affine solutions", 1.0, [&](Criterion& c) {
        const auto dom = GridDomain::centered(1.0, 33, 2);
        const std::vector<std::vector<double>> tilts{{0.9, 0.0}, {0.3, -0.2}, {0.0, 0.85}};
        for (const auto& a : tilts) {
            geom::SpacelikeGraph g{dom, solver::exact_plane(a, 0.5).sample(dom), 1e-9};
            const auto res = geom::cmc_residual(g, 0.0, Exec::omp);
            const double sup = max_abs_at_depth(res, dom, 1, Exec::serial);
            c.expect(sup <= 1e-12, "residual " + fmt(sup) + " <= 1e-12 for tilt " +
                                       fmt(a[0]) + "," + fmt(a[1]));
            const auto gauss = geom::gauss_map(g, Exec::omp);
            double dev = 0.0;
            const double* nu0 = gauss.nu_at(dom.n / 2);
            for_each_node(dom, Exec::serial, [&](std::size_t f, const Index&) {
                for (int k = 0; k <= 2; ++k)
                    dev = std::max(dev, std::fabs(gauss.nu_at(f)[k] - nu0[k]));
            });
            c.expect(dev <= 1e-12, "Gauss map constant, deviation " + fmt(dev));
        }
    });

    run_criterion(2, "hyperboloid oracle: residual order and solver recovery", 60.0,
                  [&](Criterion& c) {
        const auto gen = solver::exact_hyperboloid(1.0, {0.0, 0.0}, 0.0);
        const auto rep = solver::convergence_study(gen, 1.0, 1.0, 2, {33, 65, 129}, cfg);
        c.expect(rep.all_converged, "all solves converged");
        c.expect(std::fabs(rep.order_residual - 2.0) <= 0.3,
                 "residual order " + fmt(rep.order_residual) + " within 2.0 +/- 0.3");
        for (std::size_t i = 0; i < rep.sizes.size(); ++i) {
            const double bound = 5.0 * rep.spacings[i] * rep.spacings[i];
            c.expect(rep.solve_error[i] <= bound,
                     "solve error " + fmt(rep.solve_error[i]) + " <= 5 h^2 = " + fmt(bound) +
                         " at " + std::to_string(rep.sizes[i]) + "^2");
        }
        c.note("residual sups: " + fmt(rep.residual_sup[0]) + " / " +
               fmt(rep.residual_sup[1]) + " / " + fmt(rep.residual_sup[2]));
    });

    run_criterion(3, "energy density equals |h|^2", 120.0, [&](Criterion& c) {
        // exact hyperboloid at 65^2
        {
            const auto dom = GridDomain::centered(1.0, 65, 2);
            geom::SpacelikeGraph g{
                dom, solver::exact_hyperboloid(1.0, {0.0, 0.0}, 0.0).sample(dom), 1e-6};
            const double rel = rel_energy_discrepancy(g);
            c.expect(rel <= 5e-2, "hyperboloid relative discrepancy " + fmt(rel) + " <= 5e-2");
        }
        // three solved CMC problems at 65^2
        struct Case {
            double H;
            double half;
            bool bump;
        } cases[] = {{1.0, 1.0, false}, {0.0, 1.0, true}, {0.5, 1.0, true}};
        for (const auto& cs : cases) {
            solver::DirichletProblem pb;
            pb.domain = GridDomain::centered(cs.half, 65, 2);
            pb.boundary = (cs.bump ? estimate::tilted_plane_bump(0.3, 0.25, 1.0, 2)
                                   : solver::exact_hyperboloid(1.0, {0.0, 0.0}, 0.0))
                              .sample(pb.domain);
            pb.H = cs.H;
            const auto sr = solve_or_fail(c, pb, cfg);
            if (!sr.report.converged) continue;
            const double rel = rel_energy_discrepancy(sr.graph);
            c.expect(rel <= 5e-2, "solved H=" + fmt(cs.H) + " relative discrepancy " +
                                      fmt(rel) + " <= 5e-2");
        }
        // order >= 1 under refinement (exact hyperboloid family)
        std::vector<double> hs, discs;
        for (int nodes : {33, 65, 129}) {
            const auto dom = GridDomain::centered(1.0, nodes, 2);
            geom::SpacelikeGraph g{
                dom, solver::exact_hyperboloid(1.0, {0.0, 0.0}, 0.0).sample(dom), 1e-6};
            hs.push_back(dom.spacing);
            discs.push_back(rel_energy_discrepancy(g));
        }
        const double order = solver::fit_order(hs, discs);
        c.expect(order >= 1.0, "discrepancy order " + fmt(order) + " >= 1");
    });

    run_criterion(4, "harmonicity of the Gauss map for constant H", 120.0, [&](Criterion& c) {
        std::vector<double> hs, sups;
        for (int nodes : {33, 65, 129}) {
            solver::DirichletProblem pb;
            pb.domain = GridDomain::centered(1.0, nodes, 2);
            pb.boundary = solver::exact_hyperboloid(1.0, {0.0, 0.0}, 0.0).sample(pb.domain);
            pb.H = 1.0;
            const auto sr = solve_or_fail(c, pb, cfg);
            if (!sr.report.converged) return;
            const auto geo = geom::shape_and_mean_curvature(sr.graph, Exec::omp);
            const auto tf =
                geom::tension_field(geom::gauss_map(sr.graph, geo, Exec::omp), geo, pb.domain,
                                    Exec::omp);
            hs.push_back(pb.domain.spacing);
            sups.push_back(max_abs_at_depth(tf.norm, pb.domain, 2, Exec::serial));
        }
        const double order = solver::fit_order(hs, sups);
        c.expect(order >= 1.0, "tension order " + fmt(order) + " >= 1");
        c.expect(sups.back() <= 0.1,
                 "tension sup " + fmt(sups.back()) + " <= 0.1 at 129^2");
        c.note("tension sups: " + fmt(sups[0]) + " / " + fmt(sups[1]) + " / " + fmt(sups[2]));
    });

    run_criterion(5, "gradient estimate trend at k = 0", 300.0, [&](Criterion& c) {
        const double cearth = 0.3;
        std::vector<double> implied;
        for (double a : {2.0, 4.0, 8.0}) {
            solver::DirichletProblem pb;
            pb.domain = GridDomain::centered(1.5 * a, 97, 2);
            pb.boundary = estimate::tilted_plane_bump(0.3, 0.25, 1.0, 2).sample(pb.domain);
            pb.H = 0.0;
            const auto sr = solve_or_fail(c, pb, cfg);
            if (!sr.report.converged) return;
            // Gauss image verified inside the horoball {z_m > c}
            const auto gauss = geom::gauss_map(sr.graph, Exec::omp);
            double min_height = 1e300;
            for_each_at_depth(pb.domain, 1, Exec::serial, [&](std::size_t f, const Index&) {
                min_height = std::min(min_height, geom::gauss_height(gauss.nu_at(f), 2));
            });
            c.expect(min_height > cearth, "Gauss image inside {z > " + fmt(cearth) +
                                              "}: min height " + fmt(min_height));
            Index ci{};
            ci[0] = 48;
            ci[1] = 48;
            const auto rep = estimate::gradient_estimate_report(
                sr.graph, pb.domain.flat(ci.data()), a, estimate::ComparisonFn::constant(0.0),
                cearth, Exec::omp);
            implied.push_back(rep.implied_constant);
            c.note("a=" + fmt(a) + ": sup_phi=" + fmt(rep.sup_phi) +
                   " implied=" + fmt(rep.implied_constant) + " k=" + fmt(rep.k));
        }
        for (std::size_t i = 1; i < implied.size(); ++i)
            c.expect(implied[i] <= 1.1 * implied[i - 1],
                     "implied constant non-increasing within 10%: " + fmt(implied[i - 1]) +
                         " -> " + fmt(implied[i]));
    });

    run_criterion(6, "Bernstein flattening trend", 300.0, [&](Criterion& c) {
        estimate::RigidityTrendConfig tc;
        tc.a_list = {2.0, 4.0, 8.0};
        tc.solver = cfg;
        const auto rep = estimate::hyperplane_rigidity_trend(tc);
        c.expect(!rep.partial, "all solves converged");
        c.expect(!rep.horoball_violation, "Gauss images stayed in the horoball");
        c.expect(rep.strictly_decreasing, "sup |h| strictly decreasing in a");
        if (rep.entries.size() == 3 && rep.entries[2].sup_h >= 0.0) {
            const double ratio =
                rep.entries[2].sup_h / std::max(rep.entries[1].sup_h, 1e-300);
            c.expect(ratio <= 0.7, "sup|h|(a=8) / sup|h|(a=4) = " + fmt(ratio) + " <= 0.7");
            c.note("sup|h|: " + fmt(rep.entries[0].sup_h) + " / " + fmt(rep.entries[1].sup_h) +
                   " / " + fmt(rep.entries[2].sup_h));
        }
        // pure plane data: numerically zero at every a (iterative solver
        // rounding only)
        estimate::RigidityTrendConfig plain = tc;
        plain.a_list = {2.0, 4.0};
        plain.bump_amp = 0.0;
        const auto rep0 = estimate::hyperplane_rigidity_trend(plain);
        for (const auto& e : rep0.entries)
            c.expect(e.sup_h <= 1e-10, "pure plane sup|h| " + fmt(e.sup_h) + " <= 1e-10");
    });

    run_criterion(7, "Bochner and refined Kato spot checks", 120.0, [&](Criterion& c) {
        std::vector<double> viols;
        for (int nodes : {33, 65, 129}) {
            solver::DirichletProblem pb;
            pb.domain = GridDomain::centered(1.0, nodes, 2);
            pb.boundary = solver::exact_hyperboloid(1.0, {0.0, 0.0}, 0.0).sample(pb.domain);
            pb.H = 1.0;
            const auto sr = solve_or_fail(c, pb, cfg);
            if (!sr.report.converged) return;
            const auto samples = estimate::sample_nodes(pb.domain, 2, 100);
            c.expect(samples.size() == 100, "100 deterministic sample nodes");
            const auto rep = estimate::bochner_check(sr.graph, samples, Exec::omp);
            c.expect(rep.epsilon == 1.0 / (2.0 * 2 * 2), "epsilon = 1/(2mn) used verbatim");
            c.expect(rep.pass, "violations within the order-1 schedule at " +
                                   std::to_string(nodes) + "^2");
            viols.push_back(std::max({rep.viol_bochner, rep.viol_kato, rep.viol_combined}));
        }
        c.expect(viols.back() <= 0.5 * viols.front() + 1e-12,
                 "violations decay under refinement: " + fmt(viols.front()) + " -> " +
                     fmt(viols.back()));
    });

    run_criterion(8, "codimension-2 exact identities", 30.0, [&](Criterion& c) {
        const auto dom = GridDomain::centered(1.0, 33, 2);
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int trial = 0; trial < 20; ++trial) {
            auto f = codim2::SecondFormField2D::make(dom);
            for (int comp = 0; comp < 6; ++comp) {
                const double a0 = u(rng), b0 = u(rng), kx = 2.0 * u(rng), ky = 2.0 * u(rng),
                             ph = 3.0 * u(rng);
                auto& vec = comp < 3 ? f.h3 : f.h4;
                const int cc = comp % 3;
                for_each_node(dom, Exec::serial, [&](std::size_t fl, const Index& idx) {
                    const double x = dom.coord(0, idx[0]), y = dom.coord(1, idx[1]);
                    vec[fl * 3 + cc] =
                        a0 * std::sin(kx * x + ky * y + ph) + b0 * std::cos(kx * y - ky * x);
                });
            }
            const auto rep = codim2::equivalence_check(f, Exec::omp);
            if (!rep.pass)
                c.expect(false, "equivalence trial " + std::to_string(trial) +
                                    ": discrepancy " + fmt(rep.max_discrepancy));
        }
        c.note("20 seeded random fields checked to 1e-12");
        // adapted diagonal frames: block values and exact energy equality
        const double lam = 0.9, mu = -0.4, rho = 1.1, sig = 0.2;
        auto f = codim2::SecondFormField2D::make(dom);
        for (std::size_t fl = 0; fl < dom.n; ++fl) {
            f.h3[fl * 3 + 0] = lam;
            f.h3[fl * 3 + 2] = mu;
            f.h4[fl * 3 + 0] = rho;
            f.h4[fl * 3 + 2] = sig;
        }
        const auto sd = codim2::split_differential(f, Exec::omp);
        bool block_ok = true, energy_ok = true;
        for (std::size_t fl = 0; fl < dom.n; ++fl) {
            block_ok = block_ok && sd.a[fl * 4 + 0] == lam && sd.a[fl * 4 + 1] == sig &&
                       sd.a[fl * 4 + 2] == rho && sd.a[fl * 4 + 3] == -mu;
            energy_ok = energy_ok && sd.e1[fl] == sd.e2[fl];
        }
        c.expect(block_ok, "adapted-frame a-components match the diagonal block");
        c.expect(energy_ok, "e(gamma1) = e(gamma2) exactly in adapted frames");
    });

    run_criterion(9, "hyperbolic self-test", 5.0, [&](Criterion& c) {
        std::mt19937_64 rng(3);
        std::normal_distribution<double> gaussd(0.0, 1.0);
        std::uniform_real_distribution<double> unif(0.0, 4.0);
        const hyp::BusemannRay ray{1.0};
        double rt = 0.0, iso = 0.0, bus = 0.0, hess = 0.0, grad = 0.0;
        for (int m : {2, 3}) {
            for (int t = 0; t < 100; ++t) {
                std::vector<double> dir(m);
                double nn = 0.0;
                for (auto& v : dir) {
                    v = gaussd(rng);
                    nn += v * v;
                }
                const double sc = std::tanh(0.5 * unif(rng)) / std::sqrt(std::max(nn, 1e-30));
                for (auto& v : dir) v *= sc;
                const auto p = hyp::make_point(hyp::Model::ball, dir);
                std::vector<double> dir2(m);
                nn = 0.0;
                for (auto& v : dir2) {
                    v = gaussd(rng);
                    nn += v * v;
                }
                const double sc2 = std::tanh(0.5 * unif(rng)) / std::sqrt(std::max(nn, 1e-30));
                for (auto& v : dir2) v *= sc2;
                const auto q = hyp::make_point(hyp::Model::ball, dir2);
                for (auto target :
                     {hyp::Model::hyperboloid, hyp::Model::upper_half, hyp::Model::ball}) {
                    const auto pc = hyp::convert(p, target);
                    const auto back = hyp::convert(pc, hyp::Model::ball);
                    for (int i = 0; i < m; ++i)
                        rt = std::max(rt, std::fabs(back.coords[i] - p.coords[i]));
                    const auto qc = hyp::convert(q, target);
                    iso = std::max(iso, std::fabs(hyp::hyp_distance(pc, qc) -
                                                  hyp::hyp_distance(p, q)));
                }
                const auto zu = hyp::convert(p, hyp::Model::upper_half);
                bus = std::max(bus, std::fabs(hyp::busemann_limit_approx(zu, ray, 20.0) -
                                              hyp::busemann_eval(zu, ray)));
                hess = std::max(hess, hyp::busemann_hessian_residual(zu, ray));
                grad = std::max(grad, std::fabs(hyp::busemann_gradient_norm(zu, ray) - 1.0));
            }
        }
        c.expect(rt <= 1e-10, "round trips " + fmt(rt) + " <= 1e-10");
        c.expect(iso <= 1e-9, "distance isometry " + fmt(iso) + " <= 1e-9");
        c.expect(bus <= 1e-6, "Busemann closed form vs t=20 limit " + fmt(bus) + " <= 1e-6");
        c.expect(hess <= 1e-9, "Hessian identity residual " + fmt(hess) + " <= 1e-9");
        c.expect(grad <= 1e-10, "|grad B| = 1 within " + fmt(grad) + " <= 1e-10");
    });

    run_criterion(10, "scalar Liouville check", 120.0, [&](Criterion& c) {
        // closed-form ratio on [-1,1]^2
        {
            const auto dom = GridDomain::centered(1.0, 65, 2);
            geom::SpacelikeGraph flat{dom, ScalarField(dom.n, 0.0), 1e-6};
            const auto geo = geom::shape_and_mean_curvature(flat, Exec::omp);
            const auto bdry = sample(dom, [](const double* x) { return x[0] + 10.0; });
            Index ci{};
            ci[0] = 32;
            ci[1] = 32;
            const auto rep = estimate::scalar_liouville_check(
                geo, dom, bdry, estimate::ComparisonFn::constant(0.0), dom.flat(ci.data()),
                0.5, Exec::omp);
            double worst = 0.0;
            for_each_at_depth(dom, 1, Exec::serial, [&](std::size_t f, const Index& idx) {
                std::array<double, kMaxDim> x{};
                dom.coords(idx.data(), x.data());
                const double oracle = 1.0 / (x[0] + 10.0);
                worst = std::max(worst, std::fabs(rep.ratio[f] - oracle) / oracle);
            });
            c.expect(worst <= 0.01, "ratio field matches 1/(x1+10) within 1%: worst rel " +
                                        fmt(worst));
        }
        // implied constant bounded across growing a on a large flat grid
        {
            const auto dom = GridDomain::centered(9.0, 145, 2);
            geom::SpacelikeGraph flat{dom, ScalarField(dom.n, 0.0), 1e-6};
            const auto geo = geom::shape_and_mean_curvature(flat, Exec::omp);
            const auto bdry = sample(dom, [](const double* x) { return x[0] + 10.0; });
            Index ci{};
            ci[0] = 72;
            ci[1] = 72;
            for (double a : {2.0, 4.0, 8.0}) {
                const auto rep = estimate::scalar_liouville_check(
                    geo, dom, bdry, estimate::ComparisonFn::constant(0.0),
                    dom.flat(ci.data()), a, Exec::omp);
                c.expect(rep.implied_constant <= 2.0,
                         "implied constant " + fmt(rep.implied_constant) + " <= 2 at a = " +
                             fmt(a));
                c.note("a=" + fmt(a) + ": sup_ratio=" + fmt(rep.sup_ratio) +
                       " implied=" + fmt(rep.implied_constant));
            }
        }
    });

    std::printf("%s: %d criteria failed\n", g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
                g_failures);
    return g_failures == 0 ? 0 : 1;
}
