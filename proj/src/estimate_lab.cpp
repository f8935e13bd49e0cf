#include "horolab/estimate_lab.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "horolab/hyperbolic.hpp"

namespace horolab::estimate {

namespace {

// Busemann values of the Gauss image on every node, via model conversion.
ScalarField busemann_of_gauss(const geom::GaussField& gauss, const GridDomain& dom, double c,
                              Exec exec) {
    if (!(c > 0.0)) throw DomainError("busemann_of_gauss: c must be positive");
    const int m = dom.m;
    ScalarField beta(dom.n, 0.0);
    for_each_node(dom, exec, [&](std::size_t f, const Index&) {
        std::array<double, kMaxDim> q{};
        hyp::hyperboloid_to_upper_coords(gauss.nu_at(f), m, q.data());
        beta[f] = std::log(q[m - 1] / c);  // busemann_eval in upper-half coordinates
    });
    return beta;
}

// |grad phi|^2 in the induced metric at an interior node.
double grad_sq_metric(const ScalarField& v, const geom::GeometryFields& geo,
                      const GridDomain& dom, std::size_t f) {
    const int m = dom.m;
    std::array<double, kMaxDim> dv{};
    for (int a = 0; a < m; ++a) dv[a] = d1_centered(v, f, dom.stride[a], dom.spacing);
    const double* gi = geo.g_inv_at(f);
    double s = 0.0;
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) s += gi[a * m + b] * dv[a] * dv[b];
    return s;
}

struct GapField {
    ScalarField gap;  // all nodes
    double shift = 0.0;
    double min_gap_before = 0.0;
};

// gap = beta - g, normalized so min over `nodes` (default: interior) is
// >= 1.  Throws HoroballViolationError if the raw gap is <= 0 on the set.
GapField make_gap(const ScalarField& beta, const ComparisonFn& g, const GridDomain& dom,
                  const std::vector<std::size_t>* nodes, bool enforce_unit_gap) {
    GapField out;
    double min_raw = 1e300;
    std::size_t argmin = 0;
    auto scan = [&](std::size_t f) {
        const double v = beta[f] - g.at(f);
        if (v < min_raw) {
            min_raw = v;
            argmin = f;
        }
    };
    if (nodes) {
        for (std::size_t f : *nodes) scan(f);
    } else {
        for_each_at_depth(dom, 1, Exec::serial, [&](std::size_t f, const Index&) { scan(f); });
    }
    out.min_gap_before = min_raw;
    if (min_raw <= 0.0)
        throw HoroballViolationError(
            "Gauss image leaves the horoball: B∘f - g = " + std::to_string(min_raw) +
                " at node " + std::to_string(argmin),
            argmin);
    out.gap.assign(dom.n, 0.0);
    if (enforce_unit_gap && min_raw < 1.0) {
        out.shift = 1.0 - min_raw;
        if (g.kind == ComparisonFn::Kind::constant) {
            // constant path: fold g and the shift into one subtrahend so the
            // result is bit-identical under g -> g + s reparameterizations
            const double min_beta = min_raw + g.value;  // == min beta over the set
            const double eff = min_beta - 1.0;
            for (std::size_t f = 0; f < dom.n; ++f) out.gap[f] = beta[f] - eff;
            return out;
        }
        for (std::size_t f = 0; f < dom.n; ++f) out.gap[f] = beta[f] - (g.at(f) - out.shift);
        return out;
    }
    for (std::size_t f = 0; f < dom.n; ++f) out.gap[f] = beta[f] - g.at(f);
    return out;
}

ScalarField comparison_as_field(const ComparisonFn& g, const GridDomain& dom) {
    if (g.kind == ComparisonFn::Kind::field) {
        if (g.values.size() != dom.n)
            throw DimensionError("comparison function field has the wrong size");
        return g.values;
    }
    return ScalarField(dom.n, g.value);
}

double k_from_ricci(const geom::GeometryFields& geo, const GridDomain& dom, Exec exec,
                    double* k_bound) {
    const auto ric = geom::ricci_min(geo, dom, exec);
    if (k_bound) *k_bound = std::sqrt(std::max(0.0, -ric.bound));
    return std::sqrt(std::max(0.0, -ric.global_min));
}

void require_sample_depth(const std::vector<std::size_t>& samples, const GridDomain& dom,
                          const char* op) {
    Index idx{};
    for (std::size_t f : samples) {
        dom.unflatten(f, idx.data());
        if (dom.depth(idx.data()) < 2)
            throw DomainError(std::string(op) +
                              ": samples must be at least 2 nodes from the boundary");
    }
}

}  // namespace

std::vector<std::size_t> sample_nodes(const GridDomain& dom, int min_depth,
                                      std::size_t max_count) {
    std::vector<std::size_t> all;
    for_each_at_depth(dom, min_depth, Exec::serial, [&](std::size_t f, const Index& idx) {
        for (int a = 0; a < dom.m; ++a)
            if ((idx[a] - min_depth) % 2 != 0) return;
        all.push_back(f);
    });
    if (all.size() <= max_count || max_count == 0) return all;
    std::vector<std::size_t> out;
    out.reserve(max_count);
    for (std::size_t i = 0; i < max_count; ++i)
        out.push_back(all[i * all.size() / max_count]);
    return out;
}

SuperharmonicReport superharmonic_check(const ComparisonFn& g, const geom::GeometryFields& geo,
                                        const GridDomain& dom, Exec exec) {
    const ScalarField gf = comparison_as_field(g, dom);
    ScalarField v(dom.n, 0.0);
    parallel_for(dom.n, exec, [&](std::size_t f) { v[f] = std::exp(-gf[f]); });
    SuperharmonicReport rep;
    rep.certificate = geom::laplace_beltrami(v, geo, dom, exec);
    const ScalarField lap_g = geom::laplace_beltrami(gf, geo, dom, exec);
    rep.grad_sq_minus_lap.assign(dom.n, 0.0);
    for_each_at_depth(dom, 1, exec, [&](std::size_t f, const Index&) {
        rep.grad_sq_minus_lap[f] = grad_sq_metric(gf, geo, dom, f) - lap_g[f];
    });
    double vmax = 1.0;
    double cmax = -1e300;
    for_each_at_depth(dom, 1, Exec::serial, [&](std::size_t f, const Index&) {
        vmax = std::max(vmax, std::fabs(v[f]));
        cmax = std::max(cmax, rep.certificate[f]);
    });
    rep.max_certificate = cmax;
    rep.tolerance = 10.0 * dom.spacing * dom.spacing * vmax;
    rep.pass = cmax <= rep.tolerance;
    return rep;
}

PhiField phi_field(const geom::GaussField& gauss, const geom::GeometryFields& geo,
                   const GridDomain& dom, const ComparisonFn& g, double c, Exec exec,
                   const std::vector<std::size_t>* gap_nodes, bool enforce_unit_gap) {
    if (gauss.n != dom.n || geo.n != dom.n)
        throw DimensionError("phi_field: fields on different grids");
    const ScalarField beta = busemann_of_gauss(gauss, dom, c, exec);
    GapField gapf = make_gap(beta, g, dom, gap_nodes, enforce_unit_gap);
    PhiField out;
    out.gap = std::move(gapf.gap);
    out.shift = gapf.shift;
    out.min_gap_before = gapf.min_gap_before;
    out.phi.assign(dom.n, 0.0);
    for_each_at_depth(dom, 1, exec, [&](std::size_t f, const Index&) {
        out.phi[f] = std::sqrt(std::max(0.0, gauss.energy[f])) / out.gap[f];
    });
    return out;
}

EstimateReport gradient_estimate_report(const geom::SpacelikeGraph& graph, std::size_t x0,
                                        double a, const ComparisonFn& g, double c, Exec exec) {
    if (!(a > 0.0)) throw DomainError("gradient_estimate_report: a must be positive");
    const GridDomain& dom = graph.domain;
    const auto geo = geom::shape_and_mean_curvature(graph, exec);
    const auto gauss = geom::gauss_map(graph, geo, exec);
    const auto ball_a = geom::intrinsic_ball(geo, dom, x0, a);
    if (ball_a.clipped)
        throw DomainTooSmallError("gradient_estimate_report: B_a(x0) exits the domain interior");
    const auto ball_half = geom::intrinsic_ball(geo, dom, x0, 0.5 * a);
    const PhiField pf = phi_field(gauss, geo, dom, g, c, exec, &ball_a.nodes, true);

    EstimateReport rep;
    rep.a = a;
    rep.shift = pf.shift;
    rep.min_gap_before = pf.min_gap_before;
    rep.ball_nodes = ball_a.nodes.size();
    rep.half_ball_nodes = ball_half.nodes.size();
    double min_gap = 1e300, sup_phi = 0.0;
    for (std::size_t f : ball_a.nodes) min_gap = std::min(min_gap, pf.gap[f]);
    for (std::size_t f : ball_half.nodes) sup_phi = std::max(sup_phi, pf.phi[f]);
    rep.min_gap = min_gap;
    rep.sup_phi = sup_phi;
    rep.k = k_from_ricci(geo, dom, exec, &rep.k_bound);
    rep.implied_constant = sup_phi * a / (1.0 + rep.k * a);
    return rep;
}

BochnerReport bochner_check(const geom::SpacelikeGraph& graph,
                            const std::vector<std::size_t>& samples, Exec exec) {
    const GridDomain& dom = graph.domain;
    const int m = dom.m;
    require_sample_depth(samples, dom, "bochner_check");
    const auto geo = geom::shape_and_mean_curvature(graph, exec);
    const auto gauss = geom::gauss_map(graph, geo, exec);
    const ScalarField& e = gauss.energy;
    ScalarField s(dom.n, 0.0);
    parallel_for(dom.n, exec, [&](std::size_t f) { s[f] = std::sqrt(std::max(0.0, e[f])); });
    const ScalarField lap_e = geom::laplace_beltrami(e, geo, dom, exec);
    const ScalarField lap_s = geom::laplace_beltrami(s, geo, dom, exec);

    BochnerReport rep;
    rep.epsilon = 1.0 / (2.0 * m * m);  // target dimension n equals m for the Gauss map
    const double k2 = [&] {
        const auto ric = geom::ricci_min(geo, dom, exec);
        return std::max(0.0, -ric.global_min);
    }();
    rep.k_sq = k2;

    rep.samples.resize(samples.size());
    parallel_for(samples.size(), exec, [&](std::size_t si) {
        const std::size_t f = samples[si];
        // second covariant derivative of the shape tensor:
        // (grad h)_{k,ij} = d_k h_ij - Gamma^p_{ki} h_pj - Gamma^p_{kj} h_ip
        // with graph Christoffels Gamma^p_{ki} = -u_{ki} (g^{-1} grad u)_p.
        const double* gi = geo.g_inv_at(f);
        const double* p = geo.grad_at(f);
        std::array<double, kMaxDim> gp{};  // g^{-1} grad u
        for (int a = 0; a < m; ++a) {
            double v = 0.0;
            for (int b = 0; b < m; ++b) v += gi[a * m + b] * p[b];
            gp[a] = v;
        }
        std::array<double, static_cast<std::size_t>(kMaxDim) * kMaxDim> uij{};
        hessian_at(graph.u, dom, f, uij.data());
        std::array<double, static_cast<std::size_t>(kMaxDim) * kMaxDim * kMaxDim> dh{};
        for (int k = 0; k < m; ++k)
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) {
                    double v = (geo.h[(f + dom.stride[k]) * m * m + i * m + j] -
                                geo.h[(f - dom.stride[k]) * m * m + i * m + j]) /
                               (2.0 * dom.spacing);
                    for (int q = 0; q < m; ++q) {
                        // -Gamma^q_{ki} h_qj - Gamma^q_{kj} h_iq
                        v += uij[k * m + i] * gp[q] * geo.h[f * m * m + q * m + j];
                        v += uij[k * m + j] * gp[q] * geo.h[f * m * m + i * m + q];
                    }
                    dh[(k * m + i) * m + j] = v;
                }
        double dh_sq = 0.0;
        for (int k = 0; k < m; ++k)
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j)
                    for (int kk = 0; kk < m; ++kk)
                        for (int ii = 0; ii < m; ++ii)
                            for (int jj = 0; jj < m; ++jj)
                                dh_sq += gi[k * m + kk] * gi[i * m + ii] * gi[j * m + jj] *
                                         dh[(k * m + i) * m + j] * dh[(kk * m + ii) * m + jj];
        const double grad_s_sq = grad_sq_metric(s, geo, dom, f);
        BochnerSample& smp = rep.samples[si];
        smp.node = f;
        smp.bochner_lhs = 0.5 * lap_e[f];
        smp.bochner_rhs = dh_sq - k2 * e[f];
        smp.kato_lhs = dh_sq;
        smp.kato_rhs = (1.0 + rep.epsilon) * grad_s_sq;
        smp.combined_lhs = s[f] * lap_s[f];
        smp.combined_rhs = rep.epsilon * grad_s_sq - k2 * e[f];
    });

    double scale_b = 1.0, scale_k = 1.0, scale_c = 1.0;
    for (const auto& smp : rep.samples) {
        rep.viol_bochner = std::max(rep.viol_bochner, smp.bochner_rhs - smp.bochner_lhs);
        rep.viol_kato = std::max(rep.viol_kato, smp.kato_rhs - smp.kato_lhs);
        rep.viol_combined = std::max(rep.viol_combined, smp.combined_rhs - smp.combined_lhs);
        scale_b = std::max({scale_b, std::fabs(smp.bochner_lhs), std::fabs(smp.bochner_rhs)});
        scale_k = std::max({scale_k, std::fabs(smp.kato_lhs), std::fabs(smp.kato_rhs)});
        scale_c = std::max({scale_c, std::fabs(smp.combined_lhs), std::fabs(smp.combined_rhs)});
    }
    rep.viol_bochner = std::max(0.0, rep.viol_bochner);
    rep.viol_kato = std::max(0.0, rep.viol_kato);
    rep.viol_combined = std::max(0.0, rep.viol_combined);
    rep.tol_bochner = 10.0 * dom.spacing * scale_b;
    rep.tol_kato = 10.0 * dom.spacing * scale_k;
    rep.tol_combined = 10.0 * dom.spacing * scale_c;
    rep.pass = rep.viol_bochner <= rep.tol_bochner && rep.viol_kato <= rep.tol_kato &&
               rep.viol_combined <= rep.tol_combined;
    return rep;
}

KeyInequalityReport key_inequality_check(const geom::SpacelikeGraph& graph,
                                         const ComparisonFn& g, double c,
                                         const std::vector<std::size_t>& samples, Exec exec) {
    const GridDomain& dom = graph.domain;
    const int m = dom.m;
    require_sample_depth(samples, dom, "key_inequality_check");
    const auto geo = geom::shape_and_mean_curvature(graph, exec);
    const auto gauss = geom::gauss_map(graph, geo, exec);
    const ScalarField beta = busemann_of_gauss(gauss, dom, c, exec);
    GapField gapf = make_gap(beta, g, dom, nullptr, true);
    const ScalarField lap_beta = geom::laplace_beltrami(beta, geo, dom, exec);

    // upper-half coordinates of the Gauss image for the non-radial energy
    std::vector<ScalarField> w(m, ScalarField(dom.n, 0.0));
    for_each_node(dom, exec, [&](std::size_t f, const Index&) {
        const double* nv = gauss.nu_at(f);
        hyp::ModelPoint pt{hyp::Model::hyperboloid, std::vector<double>(nv, nv + m + 1)};
        const auto q = hyp::convert(pt, hyp::Model::upper_half);
        for (int cc = 0; cc < m; ++cc) w[cc][f] = q.coords[cc];
    });

    KeyInequalityReport rep;
    rep.epsilon = 1.0 / (2.0 * m * m);
    rep.shift = gapf.shift;
    rep.samples.resize(samples.size());
    parallel_for(samples.size(), exec, [&](std::size_t si) {
        const std::size_t f = samples[si];
        const double gapv = gapf.gap[f];
        const double grad_beta_sq = grad_sq_metric(beta, geo, dom, f);
        // non-radial energy: frame components of dw along the horizontal
        // target coordinates, measured in the target metric delta/w_m^2
        const double* fr = geo.frame_at(f);
        const double wm = w[m - 1][f];
        double nonrad = 0.0;
        for (int comp = 0; comp < m - 1; ++comp) {
            std::array<double, kMaxDim> dwc{};
            for (int a = 0; a < m; ++a)
                dwc[a] = d1_centered(w[comp], f, dom.stride[a], dom.spacing);
            for (int i = 0; i < m; ++i) {
                double v = 0.0;
                for (int a = 0; a < m; ++a) v += fr[i * m + a] * dwc[a];
                nonrad += (v / wm) * (v / wm);
            }
        }
        KeySample& smp = rep.samples[si];
        smp.node = f;
        smp.lhs = 0.25 * rep.epsilon * grad_beta_sq / (gapv * gapv) - lap_beta[f] / gapv;
        smp.rhs = 0.25 * rep.epsilon * std::max(0.0, gauss.energy[f]) / (gapv * gapv);
        smp.lap_B = lap_beta[f];
        smp.nonradial_energy = nonrad;
    });
    double scale_key = 1.0, scale_conc = 1.0;
    for (const auto& smp : rep.samples) {
        rep.viol_key = std::max(rep.viol_key, smp.rhs - smp.lhs);
        rep.viol_concavity = std::max(rep.viol_concavity, smp.lap_B + smp.nonradial_energy);
        scale_key = std::max({scale_key, std::fabs(smp.lhs), std::fabs(smp.rhs)});
        scale_conc = std::max({scale_conc, std::fabs(smp.lap_B), smp.nonradial_energy});
    }
    rep.viol_key = std::max(0.0, rep.viol_key);
    rep.viol_concavity = std::max(0.0, rep.viol_concavity);
    rep.tol_key = 10.0 * dom.spacing * scale_key;
    rep.tol_concavity = 10.0 * dom.spacing * scale_conc;
    rep.pass = rep.viol_key <= rep.tol_key && rep.viol_concavity <= rep.tol_concavity;
    return rep;
}

VanishingReport mean_curvature_vanishing_check(const geom::SpacelikeGraph& graph,
                                               const ComparisonFn& g, double c,
                                               const std::vector<std::size_t>& samples,
                                               Exec exec) {
    const GridDomain& dom = graph.domain;
    const int m = dom.m;
    require_sample_depth(samples, dom, "mean_curvature_vanishing_check");
    const auto geo = geom::shape_and_mean_curvature(graph, exec);
    const auto gauss = geom::gauss_map(graph, geo, exec);
    const ScalarField beta = busemann_of_gauss(gauss, dom, c, exec);
    GapField gapf = make_gap(beta, g, dom, nullptr, true);
    const ScalarField lap_gap = geom::laplace_beltrami(gapf.gap, geo, dom, exec);

    VanishingReport rep;
    rep.shift = gapf.shift;
    rep.samples.resize(samples.size());
    parallel_for(samples.size(), exec, [&](std::size_t si) {
        const std::size_t f = samples[si];
        VanishingSample& smp = rep.samples[si];
        smp.node = f;
        smp.value = grad_sq_metric(gapf.gap, geo, dom, f) - lap_gap[f];
        smp.half_energy = 0.5 * std::max(0.0, gauss.energy[f]);
        smp.mean_term = 0.5 * m * geo.H[f] * geo.H[f];
    });
    double scale = 1.0;
    for (const auto& smp : rep.samples) {
        rep.viol_energy = std::max(rep.viol_energy, smp.half_energy - smp.value);
        rep.viol_mean = std::max(rep.viol_mean, smp.mean_term - smp.value);
        scale = std::max({scale, std::fabs(smp.value), smp.half_energy});
    }
    rep.viol_energy = std::max(0.0, rep.viol_energy);
    rep.viol_mean = std::max(0.0, rep.viol_mean);
    rep.tol = 10.0 * dom.spacing * scale;
    rep.pass = rep.viol_energy <= rep.tol && rep.viol_mean <= rep.tol;
    return rep;
}

ScalarLiouvilleReport scalar_liouville_check(const geom::GeometryFields& geo,
                                             const GridDomain& dom, const ScalarField& boundary,
                                             const ComparisonFn& g, std::size_t x0, double a,
                                             Exec exec) {
    if (boundary.size() != dom.n)
        throw DimensionError("scalar_liouville_check: boundary field size mismatch");
    const int m = dom.m;
    // assemble nodal coefficients sqrt(g) g^{-1} and solve the flux-form
    // Dirichlet problem by CG on interior unknowns
    std::vector<double> A(dom.n * m * m, 0.0);
    parallel_for(dom.n, exec, [&](std::size_t f) {
        const double* gi = geo.g_inv_at(f);
        for (int i = 0; i < m * m; ++i) A[f * m * m + i] = geo.sqrt_det_g[f] * gi[i];
    });
    std::vector<std::size_t> interior;
    interior.reserve(count_at_depth(dom, 1));
    for_each_at_depth(dom, 1, Exec::serial,
                      [&](std::size_t f, const Index&) { interior.push_back(f); });

    ScalarField bc(dom.n, 0.0);
    for_each_node(dom, Exec::serial, [&](std::size_t f, const Index& idx) {
        if (dom.depth(idx.data()) == 0) bc[f] = boundary[f];
    });
    ScalarField rhs_full(dom.n, 0.0);
    geom::apply_div_form(A, bc, dom, rhs_full, exec);
    std::vector<double> rhs(interior.size(), 0.0);
    parallel_for(interior.size(), exec, [&](std::size_t k) { rhs[k] = rhs_full[interior[k]]; });

    ScalarField buf(dom.n, 0.0), outbuf(dom.n, 0.0);
    auto apply = [&](const double* x, double* y) {
        parallel_for(interior.size(), exec, [&](std::size_t k) { buf[interior[k]] = x[k]; });
        geom::apply_div_form(A, buf, dom, outbuf, exec);
        parallel_for(interior.size(), exec, [&](std::size_t k) { y[k] = -outbuf[interior[k]]; });
        parallel_for(interior.size(), exec, [&](std::size_t k) { buf[interior[k]] = 0.0; });
    };
    std::vector<double> diag(interior.size(), 0.0);
    const double h2 = dom.spacing * dom.spacing;
    parallel_for(interior.size(), exec, [&](std::size_t k) {
        const std::size_t f = interior[k];
        double acc = 0.0;
        for (int ax = 0; ax < m; ++ax) {
            const std::size_t sa = dom.stride[ax];
            acc += 0.5 * (A[f * m * m + ax * m + ax] + A[(f + sa) * m * m + ax * m + ax]);
            acc += 0.5 * (A[(f - sa) * m * m + ax * m + ax] + A[f * m * m + ax * m + ax]);
        }
        diag[k] = acc / h2;
    });
    std::vector<double> x(interior.size(), 0.0);
    double relres = 0.0;
    ScalarLiouvilleReport rep;
    rep.cg_iterations =
        solver::cg_solve(interior.size(), apply, diag, rhs, x, 1e-12, 50000, exec, &relres);
    if (relres > 1e-8)
        throw SolverError("scalar_liouville_check: harmonic solve did not converge (relres " +
                          std::to_string(relres) + ")");
    rep.f = bc;
    for (std::size_t k = 0; k < interior.size(); ++k) rep.f[interior[k]] = x[k];

    const auto ball_a = geom::intrinsic_ball(geo, dom, x0, a);
    if (ball_a.clipped)
        throw DomainTooSmallError("scalar_liouville_check: B_a(x0) exits the domain interior");
    const auto ball_half = geom::intrinsic_ball(geo, dom, x0, 0.5 * a);

    // gap normalization over B_a, same convention as phi_field
    GapField gapf = make_gap(rep.f, g, dom, &ball_a.nodes, true);
    rep.shift = gapf.shift;
    double min_gap = 1e300;
    for (std::size_t f : ball_a.nodes) min_gap = std::min(min_gap, gapf.gap[f]);
    rep.min_gap = min_gap;
    rep.ratio.assign(dom.n, 0.0);
    for_each_at_depth(dom, 1, exec, [&](std::size_t f, const Index&) {
        rep.ratio[f] = std::sqrt(std::max(0.0, grad_sq_metric(rep.f, geo, dom, f))) /
                       gapf.gap[f];
    });
    double sup = 0.0;
    for (std::size_t f : ball_half.nodes) sup = std::max(sup, rep.ratio[f]);
    rep.sup_ratio = sup;
    rep.k = k_from_ricci(geo, dom, exec, nullptr);
    rep.implied_constant = sup * a / (1.0 + rep.k * a);
    return rep;
}

solver::FieldGenerator tilted_plane_bump(double tilt, double amp, double width, int m) {
    return solver::FieldGenerator{[tilt, amp, width, m](const double* x) {
        double v = tilt * x[0];
        const double t = x[m - 1] / width;
        if (std::fabs(t) < 1.0) {
            const double q = 1.0 - t * t;
            v += amp * q * q * q;
        }
        return v;
    }};
}

RigidityTrendReport hyperplane_rigidity_trend(const RigidityTrendConfig& config) {
    RigidityTrendReport rep;
    const auto data = tilted_plane_bump(config.tilt, config.bump_amp, config.bump_width,
                                        config.m);
    const Exec exec = config.solver.deterministic ? Exec::serial : Exec::omp;
    for (double a : config.a_list) {
        RigidityTrendEntry entry;
        entry.a = a;
        entry.nodes = static_cast<int>(std::lround(2.0 * a * config.nodes_per_unit)) + 1;
        const GridDomain dom = GridDomain::centered(a, entry.nodes, config.m);
        solver::DirichletProblem pb{dom, data.sample(dom), 0.0};
        solver::SolveResult sr = solver::solve(pb, config.solver);
        entry.solved = sr.report.converged;
        if (entry.solved) {
            const auto geo = geom::shape_and_mean_curvature(sr.graph, exec);
            const auto gauss = geom::gauss_map(sr.graph, geo, exec);
            double min_h = 1e300;
            for_each_at_depth(dom, 1, Exec::serial, [&](std::size_t f, const Index&) {
                min_h = std::min(min_h, geom::gauss_height(gauss.nu_at(f), config.m));
            });
            entry.min_height = min_h;
            entry.horoball_ok = min_h > config.c;
            if (!entry.horoball_ok) rep.horoball_violation = true;
            // center node
            Index cidx{};
            for (int ax = 0; ax < config.m; ++ax) cidx[ax] = dom.shape[ax] / 2;
            const auto ball = geom::intrinsic_ball(geo, dom, dom.flat(cidx.data()), 0.5 * a);
            double sup_h = 0.0;
            for (std::size_t f : ball.nodes)
                sup_h = std::max(sup_h, std::sqrt(std::max(0.0, geo.h_norm_sq[f])));
            entry.sup_h = sup_h;
        } else {
            rep.partial = true;
        }
        rep.entries.push_back(entry);
    }
    rep.strictly_decreasing = true;
    for (std::size_t i = 1; i < rep.entries.size(); ++i) {
        if (!rep.entries[i].solved || !rep.entries[i - 1].solved) continue;
        const double prev = rep.entries[i - 1].sup_h;
        rep.ratios.push_back(prev > 0.0 ? rep.entries[i].sup_h / prev : 0.0);
        if (!(rep.entries[i].sup_h < prev)) rep.strictly_decreasing = false;
    }
    return rep;
}

}  // namespace horolab::estimate
