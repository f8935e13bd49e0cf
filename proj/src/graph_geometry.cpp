#include "horolab/graph_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include "horolab/smallmat.hpp"

namespace horolab::geom {

namespace {

// Gram-Schmidt of the coordinate tangent basis in the metric g, axis 1
// first.  Row i of `frame` holds the coefficients of the i-th orthonormal
// vector in the coordinate basis (lower triangular).
void orthonormal_frame(const double* g, int m, double* frame) {
    for (int i = 0; i < m * m; ++i) frame[i] = 0.0;
    for (int i = 0; i < m; ++i) {
        std::array<double, kMaxDim> v{};
        v[i] = 1.0;
        for (int j = 0; j < i; ++j) {
            // <E_i, e_j>_g = sum_pq E_i^p g_pq e_j^q = sum_q g_iq e_j^q
            double proj = 0.0;
            for (int q = 0; q < m; ++q) proj += g[i * m + q] * frame[j * m + q];
            for (int q = 0; q < m; ++q) v[q] -= proj * frame[j * m + q];
        }
        double nn = 0.0;
        for (int p = 0; p < m; ++p)
            for (int q = 0; q < m; ++q) nn += v[p] * g[p * m + q] * v[q];
        const double inv = 1.0 / std::sqrt(std::max(nn, 1e-300));
        for (int q = 0; q < m; ++q) frame[i * m + q] = v[q] * inv;
    }
}

void require_spacelike(const SpacelikeGraph& graph, const char* op) {
    const auto rep = check_spacelike(graph.u, graph.domain, graph.slack);
    if (!rep.spacelike)
        throw ConstraintError(std::string(op) + ": field is not spacelike with slack " +
                              std::to_string(graph.slack) + " (max |grad u| = " +
                              std::to_string(rep.max_gradient) + ")");
}

}  // namespace

SpacelikeReport check_spacelike(const ScalarField& u, const GridDomain& dom, double delta,
                                Exec exec) {
    if (u.size() != dom.n) throw DimensionError("check_spacelike: field/domain size mismatch");
    const double h = dom.spacing;
    const double mx = parallel_max(count_at_depth(dom, 1), exec, [&](std::size_t t) {
        Index idx{};
        std::size_t rem = t;
        for (int a = dom.m - 1; a >= 0; --a) {
            const int len = dom.shape[a] - 2;
            idx[a] = static_cast<int>(rem % static_cast<std::size_t>(len)) + 1;
            rem /= static_cast<std::size_t>(len);
        }
        const std::size_t f = dom.flat(idx.data());
        double s = 0.0;
        for (int a = 0; a < dom.m; ++a) {
            const double d = d1_centered(u, f, dom.stride[a], h);
            s += d * d;
        }
        return std::sqrt(s);
    });
    SpacelikeReport rep;
    rep.max_gradient = std::max(0.0, mx);
    rep.spacelike = rep.max_gradient <= 1.0 - delta;
    return rep;
}

GeometryFields induced_metric(const SpacelikeGraph& graph, Exec exec) {
    require_spacelike(graph, "induced_metric");
    const GridDomain& dom = graph.domain;
    const int m = dom.m;
    GeometryFields gf;
    gf.m = m;
    gf.n = dom.n;
    gf.grad.assign(dom.n * m, 0.0);
    gf.g.assign(dom.n * m * m, 0.0);
    gf.g_inv.assign(dom.n * m * m, 0.0);
    gf.det_g.assign(dom.n, 0.0);
    gf.sqrt_det_g.assign(dom.n, 0.0);
    gf.frame.assign(dom.n * m * m, 0.0);
    for_each_node(dom, exec, [&](std::size_t f, const Index& idx) {
        double* p = gf.grad.data() + f * m;
        grad_at(graph.u, dom, f, idx.data(), p);
        double p2 = 0.0;
        for (int a = 0; a < m; ++a) p2 += p[a] * p[a];
        double* g = gf.g.data() + f * m * m;
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) g[a * m + b] = (a == b ? 1.0 : 0.0) - p[a] * p[b];
        gf.det_g[f] = smallmat::det(g, m);
        gf.sqrt_det_g[f] = std::sqrt(std::max(gf.det_g[f], 0.0));
        // rank-one inverse: (I - pp^T)^{-1} = I + pp^T / (1 - |p|^2)
        double* gi = gf.g_inv.data() + f * m * m;
        const double w = 1.0 / (1.0 - p2);
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) gi[a * m + b] = (a == b ? 1.0 : 0.0) + p[a] * p[b] * w;
        orthonormal_frame(g, m, gf.frame.data() + f * m * m);
    });
    gf.metric_ready = true;
    return gf;
}

GeometryFields shape_and_mean_curvature(const SpacelikeGraph& graph, Exec exec) {
    GeometryFields gf = induced_metric(graph, exec);
    const GridDomain& dom = graph.domain;
    const int m = dom.m;
    gf.h.assign(dom.n * m * m, 0.0);
    gf.H.assign(dom.n, 0.0);
    gf.h_norm_sq.assign(dom.n, 0.0);
    for_each_at_depth(dom, 1, exec, [&](std::size_t f, const Index&) {
        const double* p = gf.grad_at(f);
        double p2 = 0.0;
        for (int a = 0; a < m; ++a) p2 += p[a] * p[a];
        const double w = 1.0 / std::sqrt(1.0 - p2);
        std::array<double, static_cast<std::size_t>(kMaxDim) * kMaxDim> hess{};
        hessian_at(graph.u, dom, f, hess.data());
        double* hm = gf.h.data() + f * m * m;
        for (int a = 0; a < m * m; ++a) hm[a] = hess[a] * w;
        const double* gi = gf.g_inv_at(f);
        double tr = 0.0;
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) tr += gi[a * m + b] * hm[a * m + b];
        gf.H[f] = tr / m;
        double hn = 0.0;
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b)
                for (int c = 0; c < m; ++c)
                    for (int d = 0; d < m; ++d)
                        hn += gi[a * m + c] * gi[b * m + d] * hm[a * m + b] * hm[c * m + d];
        gf.h_norm_sq[f] = hn;
    });
    gf.shape_ready = true;
    return gf;
}

// Face gradient for the flux form: axis component by the two-point
// difference across the face, transverse components by averaging the
// centered differences at the face endpoints.  `f` is the low node of the
// face along axis a; idx its multi-index.
static void face_gradient(const ScalarField& u, const GridDomain& dom, std::size_t f, int a,
                          double* out) {
    const double h = dom.spacing;
    const std::size_t sa = dom.stride[a];
    for (int b = 0; b < dom.m; ++b) {
        if (b == a) {
            out[b] = (u[f + sa] - u[f]) / h;
            continue;
        }
        const std::size_t sb = dom.stride[b];
        // centered transverse differences exist because idx is interior in b
        const double lo = d1_centered(u, f, sb, h);
        const double hi = d1_centered(u, f + sa, sb, h);
        out[b] = 0.5 * (lo + hi);
    }
}

ScalarField cmc_residual(const SpacelikeGraph& graph, double H, Exec exec) {
    require_spacelike(graph, "cmc_residual");
    const GridDomain& dom = graph.domain;
    const int m = dom.m;
    const double h = dom.spacing;
    ScalarField res(dom.n, 0.0);
    for_each_at_depth(dom, 1, exec, [&](std::size_t f, const Index&) {
        double div = 0.0;
        for (int a = 0; a < m; ++a) {
            std::array<double, kMaxDim> gp{}, gmn{};
            face_gradient(graph.u, dom, f, a, gp.data());
            face_gradient(graph.u, dom, f - dom.stride[a], a, gmn.data());
            double p2p = 0.0, p2m = 0.0;
            for (int b = 0; b < m; ++b) {
                p2p += gp[b] * gp[b];
                p2m += gmn[b] * gmn[b];
            }
            const double Fp = gp[a] / std::sqrt(1.0 - p2p);
            const double Fm = gmn[a] / std::sqrt(1.0 - p2m);
            div += (Fp - Fm) / h;
        }
        res[f] = div - m * H;
    });
    return res;
}

GaussField gauss_map(const SpacelikeGraph& graph, const GeometryFields& geo, Exec exec) {
    if (!geo.metric_ready || !geo.shape_ready)
        throw ConstraintError("gauss_map: geometry fields missing shape data");
    const GridDomain& dom = graph.domain;
    const int m = dom.m;
    GaussField gauss;
    gauss.m = m;
    gauss.n = dom.n;
    gauss.nu.assign(dom.n * (m + 1), 0.0);
    gauss.df_fd.assign(dom.n * m * m, 0.0);
    gauss.df_shape.assign(dom.n * m * m, 0.0);
    gauss.df_gap.assign(dom.n, 0.0);
    // nu = (1, grad u) / sqrt(1 - |grad u|^2) on every node
    for_each_node(dom, exec, [&](std::size_t f, const Index&) {
        const double* p = geo.grad_at(f);
        double p2 = 0.0;
        for (int a = 0; a < m; ++a) p2 += p[a] * p[a];
        const double w = 1.0 / std::sqrt(1.0 - p2);
        double* nv = gauss.nu.data() + f * (m + 1);
        nv[0] = w;
        for (int a = 0; a < m; ++a) nv[a + 1] = p[a] * w;
    });
    // per-component views of nu for the derivative stencils
    std::vector<ScalarField> nu_comp(m + 1, ScalarField(dom.n, 0.0));
    parallel_for(dom.n, exec, [&](std::size_t f) {
        for (int c = 0; c <= m; ++c) nu_comp[c][f] = gauss.nu[f * (m + 1) + c];
    });
    // df in the orthonormal frame, two routes
    for_each_at_depth(dom, 1, exec, [&](std::size_t f, const Index& idx) {
        const double* fr = geo.frame_at(f);
        const double* hm = geo.h_at(f);
        const double* p = geo.grad_at(f);
        // ambient derivatives of nu, shifted off the boundary ring
        std::array<double, static_cast<std::size_t>(kMaxDim) * (kMaxDim + 1)> dnu{};
        for (int a = 0; a < m; ++a)
            for (int c = 0; c <= m; ++c)
                dnu[a * (m + 1) + c] = d1_interior(nu_comp[c], dom, f, idx.data(), a);
        double* dfd = gauss.df_fd.data() + f * m * m;
        double* dfs = gauss.df_shape.data() + f * m * m;
        double gap = 0.0;
        for (int i = 0; i < m; ++i) {
            for (int k = 0; k < m; ++k) {
                // route (a): <d_{e_i} nu, e_k>_L with e_k as an ambient vector
                // e_k ambient = (sum_p c_k^p u_p, c_k^1, ..., c_k^m)
                double ek0 = 0.0;
                for (int q = 0; q < m; ++q) ek0 += fr[k * m + q] * p[q];
                double val = 0.0;
                for (int pax = 0; pax < m; ++pax) {
                    const double ci = fr[i * m + pax];
                    if (ci == 0.0) continue;
                    const double* dn = dnu.data() + pax * (m + 1);
                    double ip = -dn[0] * ek0;
                    for (int q = 0; q < m; ++q) ip += dn[q + 1] * fr[k * m + q];
                    val += ci * ip;
                }
                dfd[i * m + k] = val;
                // route (b): frame components of the second fundamental form
                double hv = 0.0;
                for (int pax = 0; pax < m; ++pax)
                    for (int q = 0; q < m; ++q)
                        hv += fr[i * m + pax] * fr[k * m + q] * hm[pax * m + q];
                dfs[i * m + k] = hv;
                gap = std::max(gap, std::fabs(val - hv));
            }
        }
        gauss.df_gap[f] = gap;
    });
    gauss.energy = energy_density(gauss, geo, dom, exec);
    return gauss;
}

GaussField gauss_map(const SpacelikeGraph& graph, Exec exec) {
    return gauss_map(graph, shape_and_mean_curvature(graph, exec), exec);
}

ScalarField energy_density(const GaussField& gauss, const GeometryFields& geo,
                           const GridDomain& dom, Exec exec) {
    if (gauss.n != dom.n || geo.n != dom.n)
        throw DimensionError("energy_density: fields on different grids");
    const int m = dom.m;
    std::vector<ScalarField> nu_comp(m + 1, ScalarField(dom.n, 0.0));
    parallel_for(dom.n, exec, [&](std::size_t f) {
        for (int c = 0; c <= m; ++c) nu_comp[c][f] = gauss.nu[f * (m + 1) + c];
    });
    ScalarField e(dom.n, 0.0);
    for_each_at_depth(dom, 1, exec, [&](std::size_t f, const Index& idx) {
        const double* gi = geo.g_inv_at(f);
        const double* nv = gauss.nu_at(f);
        // projected ambient derivatives of nu: P w = w + <w, nu>_L nu
        std::array<double, static_cast<std::size_t>(kMaxDim) * (kMaxDim + 1)> dnu{};
        for (int a = 0; a < m; ++a) {
            double* dn = dnu.data() + a * (m + 1);
            for (int c = 0; c <= m; ++c) dn[c] = d1_interior(nu_comp[c], dom, f, idx.data(), a);
            double ip = -dn[0] * nv[0];
            for (int c = 1; c <= m; ++c) ip += dn[c] * nv[c];
            for (int c = 0; c <= m; ++c) dn[c] += ip * nv[c];
        }
        double sum = 0.0;
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                const double* da = dnu.data() + a * (m + 1);
                const double* db = dnu.data() + b * (m + 1);
                double ip = -da[0] * db[0];
                for (int c = 1; c <= m; ++c) ip += da[c] * db[c];
                sum += gi[a * m + b] * ip;
            }
        e[f] = sum;
    });
    return e;
}

void apply_div_form(const std::vector<double>& A, const ScalarField& phi, const GridDomain& dom,
                    ScalarField& out, Exec exec) {
    const int m = dom.m;
    const double h = dom.spacing;
    if (out.size() != dom.n) out.assign(dom.n, 0.0);
    for_each_at_depth(dom, 1, exec, [&](std::size_t f, const Index&) {
        double acc = 0.0;
        for (int a = 0; a < m; ++a) {
            const std::size_t sa = dom.stride[a];
            // diagonal: D-( mu(A_aa) D+ phi )
            const double cap = 0.5 * (A[f * m * m + a * m + a] + A[(f + sa) * m * m + a * m + a]);
            const double cam = 0.5 * (A[(f - sa) * m * m + a * m + a] + A[f * m * m + a * m + a]);
            acc += (cap * (phi[f + sa] - phi[f]) - cam * (phi[f] - phi[f - sa])) / (h * h);
            // cross: Dc_a( A_ab Dc_b phi ), evaluated at the axis neighbors
            for (int b = 0; b < m; ++b) {
                if (b == a) continue;
                const std::size_t sb = dom.stride[b];
                const double up =
                    A[(f + sa) * m * m + a * m + b] * (phi[f + sa + sb] - phi[f + sa - sb]);
                const double dn =
                    A[(f - sa) * m * m + a * m + b] * (phi[f - sa + sb] - phi[f - sa - sb]);
                acc += (up - dn) / (4.0 * h * h);
            }
        }
        out[f] = acc;
    });
}

ScalarField laplace_beltrami(const ScalarField& phi, const GeometryFields& geo,
                             const GridDomain& dom, Exec exec) {
    if (phi.size() != dom.n || geo.n != dom.n)
        throw DimensionError("laplace_beltrami: fields on different grids");
    const int m = dom.m;
    std::vector<double> A(dom.n * m * m, 0.0);
    parallel_for(dom.n, exec, [&](std::size_t f) {
        const double* gi = geo.g_inv_at(f);
        const double s = geo.sqrt_det_g[f];
        for (int a = 0; a < m * m; ++a) A[f * m * m + a] = s * gi[a];
    });
    ScalarField out(dom.n, 0.0);
    apply_div_form(A, phi, dom, out, exec);
    for_each_at_depth(dom, 1, exec,
                      [&](std::size_t f, const Index&) { out[f] /= geo.sqrt_det_g[f]; });
    return out;
}

TensionField tension_field(const GaussField& gauss, const GeometryFields& geo,
                           const GridDomain& dom, Exec exec) {
    if (gauss.n != dom.n || geo.n != dom.n)
        throw DimensionError("tension_field: fields on different grids");
    const int m = dom.m;
    // upper-half coordinates of nu on every node
    std::vector<ScalarField> w(m, ScalarField(dom.n, 0.0));
    for_each_node(dom, exec, [&](std::size_t f, const Index&) {
        std::array<double, kMaxDim> q{};
        hyp::hyperboloid_to_upper_coords(gauss.nu_at(f), m, q.data());
        for (int c = 0; c < m; ++c) w[c][f] = q[c];
    });
    std::vector<ScalarField> lap(m);
    for (int c = 0; c < m; ++c) lap[c] = laplace_beltrami(w[c], geo, dom, exec);
    TensionField tf;
    tf.tau.assign(dom.n * m, 0.0);
    tf.norm.assign(dom.n, 0.0);
    // second differences of the nu-derived coordinates are only consistent
    // two rings in (the boundary ring mixes one-sided and centered stencils)
    for_each_at_depth(dom, 2, exec, [&](std::size_t f, const Index&) {
        const double* gi = geo.g_inv_at(f);
        const double wm = w[m - 1][f];
        // A^{bc} = g^{ij} d_i w^b d_j w^c
        std::array<double, static_cast<std::size_t>(kMaxDim) * kMaxDim> Abc{};
        std::array<double, static_cast<std::size_t>(kMaxDim) * kMaxDim> dw{};
        for (int b = 0; b < m; ++b)
            for (int a = 0; a < m; ++a)
                dw[b * m + a] = d1_centered(w[b], f, dom.stride[a], dom.spacing);
        for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c) {
                double s = 0.0;
                for (int i = 0; i < m; ++i)
                    for (int j = 0; j < m; ++j)
                        s += gi[i * m + j] * dw[b * m + i] * dw[c * m + j];
                Abc[b * m + c] = s;
            }
        double trA = 0.0;
        for (int b = 0; b < m; ++b) trA += Abc[b * m + b];
        double nrm2 = 0.0;
        for (int al = 0; al < m; ++al) {
            // Gamma-term of the upper-half target:
            //   (-2 A^{al,m} + delta_{al,m} tr A) / w_m
            double gam = -2.0 * Abc[al * m + (m - 1)];
            if (al == m - 1) gam += trA;
            const double t = lap[al][f] + gam / wm;
            tf.tau[f * m + al] = t;
            nrm2 += t * t;
        }
        tf.norm[f] = std::sqrt(nrm2) / wm;  // hyperbolic metric delta/w_m^2
    });
    return tf;
}

IntrinsicBall intrinsic_ball(const GeometryFields& geo, const GridDomain& dom,
                             std::size_t center, double radius) {
    if (!(radius > 0.0)) throw DomainError("intrinsic_ball: radius must be positive");
    const int m = dom.m;
    Index cidx{};
    dom.unflatten(center, cidx.data());
    if (dom.depth(cidx.data()) < 1)
        throw DomainError("intrinsic_ball: center must be an interior node");
    const double inf = std::numeric_limits<double>::infinity();
    IntrinsicBall ball;
    ball.center = center;
    ball.radius = radius;
    ball.dist.assign(dom.n, inf);

    // node "speed" along offset v: sqrt(g_ij v^i v^j) * h, averaged at the
    // edge endpoints
    const auto edge_half = [&](std::size_t f, const int* v) {
        const double* g = geo.g_at(f);
        double q = 0.0;
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) q += g[a * m + b] * v[a] * v[b];
        return 0.5 * std::sqrt(std::max(q, 0.0)) * dom.spacing;
    };

    // enumerate the (3^m - 1) nonzero offsets once
    std::vector<std::array<int, kMaxDim>> offsets;
    {
        int total = 1;
        for (int a = 0; a < m; ++a) total *= 3;
        for (int t = 0; t < total; ++t) {
            std::array<int, kMaxDim> v{};
            int rem = t;
            bool zero = true;
            for (int a = 0; a < m; ++a) {
                v[a] = rem % 3 - 1;
                rem /= 3;
                if (v[a] != 0) zero = false;
            }
            if (!zero) offsets.push_back(v);
        }
    }

    using QE = std::pair<double, std::size_t>;
    std::priority_queue<QE, std::vector<QE>, std::greater<>> pq;
    ball.dist[center] = 0.0;
    pq.push({0.0, center});
    Index idx{}, nb{};
    while (!pq.empty()) {
        const auto [d, f] = pq.top();
        pq.pop();
        if (d > ball.dist[f] || d > radius) continue;
        dom.unflatten(f, idx.data());
        for (const auto& v : offsets) {
            bool ok = true;
            for (int a = 0; a < m; ++a) {
                nb[a] = idx[a] + v[a];
                if (nb[a] < 1 || nb[a] > dom.shape[a] - 2) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            const std::size_t fn = dom.flat(nb.data());
            const double nd = d + edge_half(f, v.data()) + edge_half(fn, v.data());
            if (nd < ball.dist[fn]) {
                ball.dist[fn] = nd;
                if (nd <= radius) pq.push({nd, fn});
            }
        }
    }
    for_each_at_depth(dom, 1, Exec::serial, [&](std::size_t f, const Index& ix) {
        if (ball.dist[f] <= radius) {
            ball.nodes.push_back(f);
            if (dom.depth(ix.data()) == 1) ball.clipped = true;
        }
    });
    return ball;
}

RicciReport ricci_min(const GeometryFields& geo, const GridDomain& dom, Exec exec) {
    if (!geo.shape_ready) throw ConstraintError("ricci_min: shape fields not populated");
    const int m = dom.m;
    RicciReport rep;
    rep.min_eig.assign(dom.n, 0.0);
    double maxH = 0.0;
    for_each_at_depth(dom, 1, exec, [&](std::size_t f, const Index&) {
        // Ricci in the orthonormal frame: hh - (tr h) h with h frame components
        const double* fr = geo.frame_at(f);
        const double* hm = geo.h_at(f);
        std::array<double, static_cast<std::size_t>(kMaxDim) * kMaxDim> hf{}, hh{}, ric{};
        for (int i = 0; i < m; ++i)
            for (int k = 0; k < m; ++k) {
                double v = 0.0;
                for (int p = 0; p < m; ++p)
                    for (int q = 0; q < m; ++q)
                        v += fr[i * m + p] * fr[k * m + q] * hm[p * m + q];
                hf[i * m + k] = v;
            }
        smallmat::matmul(hf.data(), hf.data(), m, hh.data());
        double tr = 0.0;
        for (int i = 0; i < m; ++i) tr += hf[i * m + i];
        for (int i = 0; i < m * m; ++i) ric[i] = hh[i];
        for (int i = 0; i < m; ++i)
            for (int k = 0; k < m; ++k) ric[i * m + k] -= tr * hf[i * m + k];
        rep.min_eig[f] = smallmat::min_eig_sym(ric.data(), m);
    });
    double gmin = std::numeric_limits<double>::infinity();
    for_each_at_depth(dom, 1, Exec::serial, [&](std::size_t f, const Index&) {
        gmin = std::min(gmin, rep.min_eig[f]);
        maxH = std::max(maxH, std::fabs(geo.H[f]));
    });
    rep.global_min = gmin;
    rep.bound = -0.25 * m * m * maxH * maxH;
    rep.bound_ok = gmin >= rep.bound - 1e-10;
    return rep;
}

double gauss_height(const double* nu, int m) { return 1.0 / (nu[0] + nu[m]); }

}  // namespace horolab::geom
