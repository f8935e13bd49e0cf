// Kernel benchmark: times the nodal field kernels in serial reference mode
// against the OpenMP path on a large grid and prints a speedup table.
//
//   horolab-bench [nodes_per_axis] [repeats]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "horolab/cmc_solver.hpp"
#include "horolab/graph_geometry.hpp"

using namespace horolab;

namespace {

double now() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

template <typename Fn>
double time_best(int repeats, Fn&& fn) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const double t0 = now();
        fn();
        best = std::min(best, now() - t0);
    }
    return best;
}

}  // namespace

int main(int argc, char** argv) {
    const int nodes = argc > 1 ? std::atoi(argv[1]) : 513;
    const int repeats = argc > 2 ? std::atoi(argv[2]) : 3;
    const auto dom = GridDomain::centered(1.0, nodes, 2);
    std::printf("grid %dx%d (%zu nodes), %d repeats, %d threads\n", nodes, nodes, dom.n,
                repeats, max_threads());

    geom::SpacelikeGraph graph{dom, ScalarField(dom.n, 0.0), 1e-6};
    for_each_node(dom, Exec::serial, [&](std::size_t f, const Index& idx) {
        double x[2];
        dom.coords(idx.data(), x);
        graph.u[f] = std::sqrt(1.0 + x[0] * x[0] + x[1] * x[1]);
    });
    const auto geo = geom::shape_and_mean_curvature(graph, Exec::omp);
    const auto gauss = geom::gauss_map(graph, geo, Exec::omp);
    const ScalarField phi = graph.u;

    struct Row {
        const char* name;
        double serial, omp;
    };
    Row rows[] = {
        {"induced_metric",
         time_best(repeats, [&] { geom::induced_metric(graph, Exec::serial); }),
         time_best(repeats, [&] { geom::induced_metric(graph, Exec::omp); })},
        {"shape_and_mean_curvature",
         time_best(repeats, [&] { geom::shape_and_mean_curvature(graph, Exec::serial); }),
         time_best(repeats, [&] { geom::shape_and_mean_curvature(graph, Exec::omp); })},
        {"cmc_residual",
         time_best(repeats, [&] { geom::cmc_residual(graph, 1.0, Exec::serial); }),
         time_best(repeats, [&] { geom::cmc_residual(graph, 1.0, Exec::omp); })},
        {"gauss_map",
         time_best(repeats, [&] { geom::gauss_map(graph, geo, Exec::serial); }),
         time_best(repeats, [&] { geom::gauss_map(graph, geo, Exec::omp); })},
        {"laplace_beltrami",
         time_best(repeats, [&] { geom::laplace_beltrami(phi, geo, dom, Exec::serial); }),
         time_best(repeats, [&] { geom::laplace_beltrami(phi, geo, dom, Exec::omp); })},
        {"energy_density",
         time_best(repeats, [&] { geom::energy_density(gauss, geo, dom, Exec::serial); }),
         time_best(repeats, [&] { geom::energy_density(gauss, geo, dom, Exec::omp); })},
        {"tension_field",
         time_best(repeats, [&] { geom::tension_field(gauss, geo, dom, Exec::serial); }),
         time_best(repeats, [&] { geom::tension_field(gauss, geo, dom, Exec::omp); })},
    };

    std::printf("%-26s %10s %10s %8s\n", "kernel", "serial[s]", "omp[s]", "speedup");
    for (const Row& r : rows)
        std::printf("%-26s %10.4f %10.4f %8.2fx\n", r.name, r.serial, r.omp,
                    r.serial / r.omp);

    // end-to-end: one Newton solve in both modes
    solver::DirichletProblem pb{dom, graph.u, 1.0};
    solver::SolverConfig det;
    det.deterministic = true;
    solver::SolverConfig par;
    par.deterministic = false;
    const double ts = time_best(1, [&] { solver::solve(pb, det); });
    const double tp = time_best(1, [&] { solver::solve(pb, par); });
    std::printf("%-26s %10.4f %10.4f %8.2fx\n", "newton_solve", ts, tp, ts / tp);
    return 0;
}
