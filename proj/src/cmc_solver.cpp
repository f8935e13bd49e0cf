#include "horolab/cmc_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace horolab::solver {

namespace {

struct InteriorMap {
    std::vector<std::size_t> flat;  // dof -> flat node index
    std::size_t size() const { return flat.size(); }
};

InteriorMap interior_map(const GridDomain& dom) {
    InteriorMap im;
    im.flat.reserve(count_at_depth(dom, 1));
    for_each_at_depth(dom, 1, Exec::serial,
                      [&](std::size_t f, const Index&) { im.flat.push_back(f); });
    return im;
}

// max over faces of |grad u|^2 with the face-gradient stencil, and max
// centered nodal gradient over interior nodes.
void gradient_extremes(const ScalarField& u, const GridDomain& dom, Exec exec,
                       double* max_face_sq, double* max_node) {
    const int m = dom.m;
    // faces along axis a: low node has idx[a] in [0, shape[a]-2] and is
    // interior in every other axis (the transverse stencil must exist)
    double mf = 0.0;
    for (int a = 0; a < m; ++a) {
        std::size_t total = 1;
        std::array<int, kMaxDim> len{};
        for (int b = 0; b < m; ++b) {
            len[b] = (b == a) ? dom.shape[b] - 1 : dom.shape[b] - 2;
            total *= static_cast<std::size_t>(len[b]);
        }
        const double v = parallel_max(total, exec, [&](std::size_t t) {
            Index idx{};
            std::size_t rem = t;
            for (int b = m - 1; b >= 0; --b) {
                idx[b] = static_cast<int>(rem % static_cast<std::size_t>(len[b])) +
                         ((b == a) ? 0 : 1);
                rem /= static_cast<std::size_t>(len[b]);
            }
            const std::size_t f = dom.flat(idx.data());
            const double h = dom.spacing;
            double p2 = 0.0;
            for (int b = 0; b < m; ++b) {
                double d;
                if (b == a) {
                    d = (u[f + dom.stride[a]] - u[f]) / h;
                } else {
                    const double lo = d1_centered(u, f, dom.stride[b], h);
                    const double hi = d1_centered(u, f + dom.stride[a], dom.stride[b], h);
                    d = 0.5 * (lo + hi);
                }
                p2 += d * d;
            }
            return p2;
        });
        mf = std::max(mf, v);
    }
    *max_face_sq = std::max(0.0, mf);
    const auto rep = geom::check_spacelike(u, dom, 0.0, exec);
    *max_node = rep.max_gradient;
}

double residual_sup(const ScalarField& res, const GridDomain& dom, Exec exec) {
    return max_abs_at_depth(res, dom, 1, exec);
}

// Newton coefficient field A(p) = g^{-1}(p) / sqrt(1 - |p|^2) at every node
// (one-sided gradients on the boundary).
void newton_coefficients(const ScalarField& u, const GridDomain& dom, Exec exec,
                         std::vector<double>& A) {
    const int m = dom.m;
    A.assign(dom.n * m * m, 0.0);
    for_each_node(dom, exec, [&](std::size_t f, const Index& idx) {
        std::array<double, kMaxDim> p{};
        grad_at(u, dom, f, idx.data(), p.data());
        double p2 = 0.0;
        for (int a = 0; a < m; ++a) p2 += p[a] * p[a];
        p2 = std::min(p2, 1.0 - 1e-12);
        const double w = 1.0 / std::sqrt(1.0 - p2);
        const double q = w / (1.0 - p2);
        double* out = A.data() + f * m * m;
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b)
                out[a * m + b] = (a == b ? w : 0.0) + p[a] * p[b] * q;
    });
}

// Structurally symmetric frozen-coefficient Newton operator (negated so it
// is SPD): y = -[ sum_a D-( mu(A_aa) D+ x ) + cross terms ].  x, y are
// interior dof vectors; x is implicitly zero on the boundary.
struct NewtonOperator {
    const GridDomain& dom;
    const InteriorMap& im;
    const std::vector<double>& A;
    Exec exec;
    // scatter buffer reused across applications
    mutable ScalarField full;

    void apply(const double* x, double* y) const {
        const int m = dom.m;
        const double h = dom.spacing;
        if (full.size() != dom.n) full.assign(dom.n, 0.0);
        parallel_for(im.size(), exec, [&](std::size_t k) { full[im.flat[k]] = x[k]; });
        parallel_for(im.size(), exec, [&](std::size_t k) {
            const std::size_t f = im.flat[k];
            double acc = 0.0;
            for (int a = 0; a < m; ++a) {
                const std::size_t sa = dom.stride[a];
                const double cap =
                    0.5 * (A[f * m * m + a * m + a] + A[(f + sa) * m * m + a * m + a]);
                const double cam =
                    0.5 * (A[(f - sa) * m * m + a * m + a] + A[f * m * m + a * m + a]);
                acc += (cap * (full[f + sa] - full[f]) - cam * (full[f] - full[f - sa])) /
                       (h * h);
                for (int b = 0; b < m; ++b) {
                    if (b == a) continue;
                    const std::size_t sb = dom.stride[b];
                    const double up = A[(f + sa) * m * m + a * m + b] *
                                      (full[f + sa + sb] - full[f + sa - sb]);
                    const double dn = A[(f - sa) * m * m + a * m + b] *
                                      (full[f - sa + sb] - full[f - sa - sb]);
                    acc += (up - dn) / (4.0 * h * h);
                }
            }
            y[k] = -acc;
        });
        parallel_for(im.size(), exec, [&](std::size_t k) { full[im.flat[k]] = 0.0; });
    }

    void jacobi_diag(std::vector<double>& d) const {
        const int m = dom.m;
        const double h = dom.spacing;
        d.assign(im.size(), 0.0);
        parallel_for(im.size(), exec, [&](std::size_t k) {
            const std::size_t f = im.flat[k];
            double acc = 0.0;
            for (int a = 0; a < m; ++a) {
                const std::size_t sa = dom.stride[a];
                const double cap =
                    0.5 * (A[f * m * m + a * m + a] + A[(f + sa) * m * m + a * m + a]);
                const double cam =
                    0.5 * (A[(f - sa) * m * m + a * m + a] + A[f * m * m + a * m + a]);
                acc += (cap + cam) / (h * h);
            }
            d[k] = acc;
        });
    }
};

// Least-squares affine fit a.x + b over the boundary nodes.
void affine_boundary_fit(const DirichletProblem& pb, std::vector<double>& a, double& b) {
    const GridDomain& dom = pb.domain;
    const int m = dom.m;
    // normal equations for [a, b]
    std::vector<double> M((m + 1) * (m + 1), 0.0), rhs(m + 1, 0.0);
    Index idx{};
    std::array<double, kMaxDim + 1> x{};
    for (std::size_t f = 0; f < dom.n; ++f) {
        dom.unflatten(f, idx.data());
        if (dom.depth(idx.data()) != 0) continue;
        dom.coords(idx.data(), x.data());
        x[m] = 1.0;
        for (int i = 0; i <= m; ++i) {
            for (int j = 0; j <= m; ++j) M[i * (m + 1) + j] += x[i] * x[j];
            rhs[i] += x[i] * pb.boundary[f];
        }
    }
    std::vector<double> Minv((m + 1) * (m + 1), 0.0);
    smallmat::inverse(M.data(), m + 1, Minv.data());
    a.assign(m, 0.0);
    b = 0.0;
    for (int i = 0; i <= m; ++i) {
        double s = 0.0;
        for (int j = 0; j <= m; ++j) s += Minv[i * (m + 1) + j] * rhs[j];
        if (i < m)
            a[i] = s;
        else
            b = s;
    }
}

// McShane-Whitney extension with Lipschitz budget kappa over the diagonal
// grid graph: the midpoint of the largest and smallest kappa-Lipschitz
// interpolants of the boundary values.  Gradient-capped by construction
// whenever the data is kappa-compatible.
ScalarField lipschitz_extension(const DirichletProblem& pb, double kappa, bool* compatible) {
    const GridDomain& dom = pb.domain;
    const int m = dom.m;
    const double inf = std::numeric_limits<double>::infinity();
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
    auto sweep = [&](double sign) {
        // value function min_B (sign*u_b[B] + kappa * d(I, B)) via
        // multi-source Dijkstra with Euclidean edge lengths
        ScalarField val(dom.n, inf);
        using QE = std::pair<double, std::size_t>;
        std::priority_queue<QE, std::vector<QE>, std::greater<>> pq;
        for_each_node(dom, Exec::serial, [&](std::size_t f, const Index& idx) {
            if (dom.depth(idx.data()) == 0) {
                val[f] = sign * pb.boundary[f];
                pq.push({val[f], f});
            }
        });
        Index idx{}, nb{};
        while (!pq.empty()) {
            const auto [d, f] = pq.top();
            pq.pop();
            if (d > val[f]) continue;
            dom.unflatten(f, idx.data());
            for (const auto& v : offsets) {
                bool ok = true;
                double len2 = 0.0;
                for (int a = 0; a < m; ++a) {
                    nb[a] = idx[a] + v[a];
                    if (nb[a] < 0 || nb[a] > dom.shape[a] - 1) {
                        ok = false;
                        break;
                    }
                    len2 += static_cast<double>(v[a]) * v[a];
                }
                if (!ok) continue;
                const std::size_t fn = dom.flat(nb.data());
                const double nd = d + kappa * dom.spacing * std::sqrt(len2);
                if (nd < val[fn]) {
                    val[fn] = nd;
                    pq.push({nd, fn});
                }
            }
        }
        return val;
    };
    const ScalarField hi = sweep(1.0);   // smallest Lipschitz extension from above
    ScalarField lo = sweep(-1.0);        // -(largest from below)
    ScalarField out(dom.n, 0.0);
    *compatible = true;
    for (std::size_t f = 0; f < dom.n; ++f) {
        lo[f] = -lo[f];
        if (lo[f] > hi[f] + 1e-12) *compatible = false;
        out[f] = 0.5 * (lo[f] + hi[f]);
    }
    for_each_node(dom, Exec::serial, [&](std::size_t f, const Index& idx) {
        if (dom.depth(idx.data()) == 0) out[f] = pb.boundary[f];
    });
    return out;
}

// Flat 2nd-order Laplace extension of the boundary remainder (boundary
// values minus the affine fit); returns the full initial iterate.
ScalarField initial_iterate(const DirichletProblem& pb, const SolverConfig& cfg, Exec exec,
                            long long* cg_iters) {
    const GridDomain& dom = pb.domain;
    const int m = dom.m;
    std::vector<double> afit;
    double bfit = 0.0;
    affine_boundary_fit(pb, afit, bfit);
    ScalarField affine(dom.n, 0.0);
    for_each_node(dom, Exec::serial, [&](std::size_t f, const Index& idx) {
        std::array<double, kMaxDim> x{};
        dom.coords(idx.data(), x.data());
        double v = bfit;
        for (int a = 0; a < m; ++a) v += afit[a] * x[a];
        affine[f] = v;
    });
    // remainder on the boundary
    ScalarField rem(dom.n, 0.0);
    double rem_max = 0.0;
    for_each_node(dom, Exec::serial, [&](std::size_t f, const Index& idx) {
        if (dom.depth(idx.data()) == 0) {
            rem[f] = pb.boundary[f] - affine[f];
            rem_max = std::max(rem_max, std::fabs(rem[f]));
        }
    });
    const InteriorMap im = interior_map(dom);
    ScalarField ext(dom.n, 0.0);
    if (rem_max > 0.0) {
        // CG on the flat 2m+1-point Laplacian with the remainder as data
        const double h = dom.spacing;
        ScalarField bc = rem;  // boundary entries only
        std::vector<double> rhs(im.size(), 0.0);
        parallel_for(im.size(), exec, [&](std::size_t k) {
            const std::size_t f = im.flat[k];
            Index idx{};
            dom.unflatten(f, idx.data());
            double s = 0.0;
            for (int a = 0; a < m; ++a) {
                Index nb = idx;
                nb[a] -= 1;
                if (dom.depth(nb.data()) == 0) s += bc[f - dom.stride[a]];
                nb[a] += 2;
                if (dom.depth(nb.data()) == 0) s += bc[f + dom.stride[a]];
            }
            rhs[k] = s / (h * h);
        });
        ScalarField lap_buf(dom.n, 0.0);
        auto apply = [&](const double* x, double* y) {
            parallel_for(im.size(), exec, [&](std::size_t k) { lap_buf[im.flat[k]] = x[k]; });
            parallel_for(im.size(), exec, [&](std::size_t k) {
                const std::size_t f = im.flat[k];
                double acc = 2.0 * m * lap_buf[f];
                for (int a = 0; a < m; ++a)
                    acc -= lap_buf[f + dom.stride[a]] + lap_buf[f - dom.stride[a]];
                y[k] = acc / (h * h);
            });
            parallel_for(im.size(), exec, [&](std::size_t k) { lap_buf[im.flat[k]] = 0.0; });
        };
        std::vector<double> diag(im.size(), 2.0 * m / (h * h));
        std::vector<double> x(im.size(), 0.0);
        double relres = 0.0;
        const int it = cg_solve(im.size(), apply, diag, rhs, x, 1e-12,
                                cfg.linear_max_iter, exec, &relres);
        *cg_iters += it;
        for (std::size_t k = 0; k < im.size(); ++k) ext[im.flat[k]] = x[k];
        for_each_node(dom, Exec::serial, [&](std::size_t f, const Index& idx) {
            if (dom.depth(idx.data()) == 0) ext[f] = rem[f];
        });
    }
    // assemble, shrinking the interior remainder if the cap is violated
    ScalarField u(dom.n, 0.0);
    double scale = 1.0;
    for (int attempt = 0; attempt <= 8; ++attempt) {
        for (std::size_t f = 0; f < dom.n; ++f) u[f] = affine[f] + scale * ext[f];
        for_each_node(dom, Exec::serial, [&](std::size_t f, const Index& idx) {
            if (dom.depth(idx.data()) == 0) u[f] = pb.boundary[f];
        });
        double mf2 = 0.0, mn = 0.0;
        gradient_extremes(u, dom, exec, &mf2, &mn);
        if (std::sqrt(mf2) <= cfg.gradient_cap && mn <= cfg.gradient_cap) return u;
        scale *= 0.5;
    }
    // harmonic extension overshoots the cap (it does for steep or narrow
    // boundary features); fall back to a gradient-capped Lipschitz extension
    for (double shrink : {1.2, 1.5, 2.0, 3.0}) {
        bool compatible = false;
        ScalarField mw = lipschitz_extension(pb, cfg.gradient_cap / shrink, &compatible);
        if (!compatible) continue;
        double mf2 = 0.0, mn = 0.0;
        gradient_extremes(mw, dom, exec, &mf2, &mn);
        if (std::sqrt(mf2) <= cfg.gradient_cap && mn <= cfg.gradient_cap) return mw;
    }
    return u;  // infeasible; the caller reports the cap stall
}

}  // namespace

int cg_solve(std::size_t n, const std::function<void(const double*, double*)>& apply_spd,
             const std::vector<double>& diag_precond, const std::vector<double>& rhs,
             std::vector<double>& x, double tol_rel, int max_iter, Exec exec, double* relres) {
    std::vector<double> r(n, 0.0), z(n, 0.0), p(n, 0.0), Ap(n, 0.0);
    if (x.size() != n) x.assign(n, 0.0);
    apply_spd(x.data(), Ap.data());
    parallel_for(n, exec, [&](std::size_t i) { r[i] = rhs[i] - Ap[i]; });
    const double bnorm = std::sqrt(parallel_sum(n, exec, [&](std::size_t i) {
        return rhs[i] * rhs[i];
    }));
    if (bnorm == 0.0) {
        std::fill(x.begin(), x.end(), 0.0);
        if (relres) *relres = 0.0;
        return 0;
    }
    parallel_for(n, exec, [&](std::size_t i) { z[i] = r[i] / diag_precond[i]; });
    p = z;
    double rz = parallel_sum(n, exec, [&](std::size_t i) { return r[i] * z[i]; });
    int it = 0;
    double rn = std::sqrt(parallel_sum(n, exec, [&](std::size_t i) { return r[i] * r[i]; }));
    while (it < max_iter && rn > tol_rel * bnorm) {
        apply_spd(p.data(), Ap.data());
        const double pAp = parallel_sum(n, exec, [&](std::size_t i) { return p[i] * Ap[i]; });
        if (!(pAp > 0.0) || !std::isfinite(pAp))
            throw SolverError("cg_solve: operator lost positive definiteness");
        const double alpha = rz / pAp;
        parallel_for(n, exec, [&](std::size_t i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * Ap[i];
        });
        parallel_for(n, exec, [&](std::size_t i) { z[i] = r[i] / diag_precond[i]; });
        const double rz_new = parallel_sum(n, exec, [&](std::size_t i) { return r[i] * z[i]; });
        const double beta = rz_new / rz;
        rz = rz_new;
        parallel_for(n, exec, [&](std::size_t i) { p[i] = z[i] + beta * p[i]; });
        rn = std::sqrt(parallel_sum(n, exec, [&](std::size_t i) { return r[i] * r[i]; }));
        ++it;
    }
    if (relres) *relres = rn / bnorm;
    return it;
}

SolveResult solve(const DirichletProblem& problem, const SolverConfig& config) {
    const GridDomain& dom = problem.domain;
    if (problem.boundary.size() != dom.n)
        throw DimensionError("solve: boundary field/domain size mismatch");
    if (!(config.tol > 0.0) || !(config.gradient_cap > 0.0) || !(config.gradient_cap < 1.0) ||
        !(config.damping > 0.0) || config.damping > 1.0)
        throw DomainError("solve: invalid solver configuration");
    const Exec exec = config.deterministic ? Exec::serial : Exec::omp;

    SolveResult out;
    out.graph.domain = dom;
    out.graph.slack = 1.0 - config.gradient_cap;
    SolveReport& rep = out.report;

    ScalarField u = initial_iterate(problem, config, exec, &rep.cg_iterations);
    double mf2 = 0.0, mn = 0.0;
    gradient_extremes(u, dom, exec, &mf2, &mn);
    if (std::sqrt(mf2) > config.gradient_cap || mn > config.gradient_cap) {
        rep.converged = false;
        rep.cap_stalled = true;
        rep.max_grad = mn;
        rep.message = "initial iterate violates the gradient cap; boundary data may not admit "
                      "a spacelike extension";
        out.graph.u = std::move(u);
        return out;
    }

    const InteriorMap im = interior_map(dom);
    geom::SpacelikeGraph trial_graph{dom, u, 1.0 - config.gradient_cap};
    ScalarField res = geom::cmc_residual(trial_graph, problem.H, exec);
    double sup = residual_sup(res, dom, exec);
    rep.residual_history.push_back(sup);

    std::vector<double> A;
    std::vector<double> rhs(im.size(), 0.0), delta(im.size(), 0.0), diag;
    ScalarField u_trial(dom.n, 0.0);

    while (rep.iterations < config.max_newton && sup > config.tol) {
        newton_coefficients(u, dom, exec, A);
        NewtonOperator op{dom, im, A, exec, ScalarField(dom.n, 0.0)};
        parallel_for(im.size(), exec, [&](std::size_t k) { rhs[k] = res[im.flat[k]]; });
        op.jacobi_diag(diag);
        std::fill(delta.begin(), delta.end(), 0.0);
        double relres = 0.0;
        rep.cg_iterations += cg_solve(
            im.size(), [&](const double* x, double* y) { op.apply(x, y); }, diag, rhs, delta,
            config.linear_tol, config.linear_max_iter, exec, &relres);

        double lambda = config.damping;
        bool accepted = false;
        bool all_cap_rejections = true;
        for (int bt = 0; bt < 40; ++bt) {
            parallel_for(dom.n, exec, [&](std::size_t f) { u_trial[f] = u[f]; });
            parallel_for(im.size(), exec, [&](std::size_t k) {
                u_trial[im.flat[k]] += lambda * delta[k];
            });
            double tf2 = 0.0, tn = 0.0;
            gradient_extremes(u_trial, dom, exec, &tf2, &tn);
            if (std::sqrt(tf2) > config.gradient_cap || tn > config.gradient_cap) {
                lambda *= 0.5;
                continue;
            }
            trial_graph.u = u_trial;
            ScalarField res_trial = geom::cmc_residual(trial_graph, problem.H, exec);
            const double sup_trial = residual_sup(res_trial, dom, exec);
            if (sup_trial < sup) {
                u.swap(u_trial);
                res.swap(res_trial);
                sup = sup_trial;
                accepted = true;
                break;
            }
            all_cap_rejections = false;
            lambda *= 0.5;
        }
        if (!accepted) {
            rep.cap_stalled = all_cap_rejections;
            rep.message = all_cap_rejections
                              ? "line search stalled against the gradient cap"
                              : "line search found no residual decrease";
            break;
        }
        ++rep.iterations;
        rep.residual_history.push_back(sup);
    }

    gradient_extremes(u, dom, exec, &mf2, &mn);
    rep.final_residual = sup;
    rep.max_grad = mn;
    rep.converged = sup <= config.tol && mn <= config.gradient_cap &&
                    std::sqrt(mf2) <= config.gradient_cap;
    if (rep.converged) rep.message = "converged";
    else if (rep.message.empty())
        rep.message = "iteration cap reached";
    out.graph.u = std::move(u);
    return out;
}

ScalarField FieldGenerator::sample(const GridDomain& dom) const {
    ScalarField out(dom.n, 0.0);
    for_each_node(dom, Exec::serial, [&](std::size_t fl, const Index& idx) {
        std::array<double, kMaxDim> x{};
        dom.coords(idx.data(), x.data());
        out[fl] = f(x.data());
    });
    return out;
}

FieldGenerator exact_hyperboloid(double H, std::vector<double> center, double shift) {
    if (!(H > 0.0)) throw DomainError("exact_hyperboloid: H must be positive");
    const double R2 = 1.0 / (H * H);
    return FieldGenerator{[R2, center = std::move(center), shift](const double* x) {
        double r2 = 0.0;
        for (std::size_t a = 0; a < center.size(); ++a) {
            const double d = x[a] - center[a];
            r2 += d * d;
        }
        return std::sqrt(R2 + r2) + shift;
    }};
}

FieldGenerator exact_plane(std::vector<double> a, double b) {
    double n2 = 0.0;
    for (double v : a) n2 += v * v;
    if (!(n2 < 1.0)) throw ConstraintError("exact_plane: |a| must be < 1 (spacelike)");
    return FieldGenerator{[a = std::move(a), b](const double* x) {
        double v = b;
        for (std::size_t i = 0; i < a.size(); ++i) v += a[i] * x[i];
        return v;
    }};
}

double fit_order(const std::vector<double>& spacings, const std::vector<double>& errors) {
    const std::size_t n = spacings.size();
    double sx = 0.0, sy = 0.0;
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        lx[i] = std::log(spacings[i]);
        ly[i] = std::log(std::max(errors[i], 1e-300));
        sx += lx[i];
        sy += ly[i];
    }
    const double mx = sx / n, my = sy / n;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num += (lx[i] - mx) * (ly[i] - my);
        den += (lx[i] - mx) * (lx[i] - mx);
    }
    return den > 0.0 ? num / den : 0.0;
}

ConvergenceReport convergence_study(const FieldGenerator& exact, double H, double half, int m,
                                    const std::vector<int>& sizes, const SolverConfig& config) {
    if (sizes.size() < 3)
        throw DimensionError("convergence_study: need at least 3 grid sizes");
    ConvergenceReport rep;
    rep.sizes = sizes;
    double exact_scale = 1.0;
    for (int nsz : sizes) {
        const GridDomain dom = GridDomain::centered(half, nsz, m);
        const ScalarField ue = exact.sample(dom);
        exact_scale = std::max(exact_scale, max_abs_at_depth(ue, dom, 0, Exec::serial));
        geom::SpacelikeGraph graph{dom, ue, 1.0 - config.gradient_cap};
        const ScalarField res = geom::cmc_residual(graph, H, Exec::serial);
        rep.spacings.push_back(dom.spacing);
        rep.residual_sup.push_back(max_abs_at_depth(res, dom, 1, Exec::serial));
        DirichletProblem pb{dom, ue, H};
        SolveResult sr = solve(pb, config);
        rep.converged.push_back(sr.report.converged);
        double err = 0.0;
        for (std::size_t f = 0; f < dom.n; ++f)
            err = std::max(err, std::fabs(sr.graph.u[f] - ue[f]));
        rep.solve_error.push_back(err);
    }
    rep.all_converged = true;
    for (bool c : rep.converged) rep.all_converged = rep.all_converged && c;
    double emax = 0.0;
    for (double e : rep.solve_error) emax = std::max(emax, e);
    rep.exact_family = emax <= 1e-11 * exact_scale &&
                       *std::max_element(rep.residual_sup.begin(), rep.residual_sup.end()) <=
                           1e-9;
    rep.order_residual = fit_order(rep.spacings, rep.residual_sup);
    rep.order_solve = fit_order(rep.spacings, rep.solve_error);
    return rep;
}

}  // namespace horolab::solver
