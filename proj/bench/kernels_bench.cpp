// Serial reference vs OpenMP kernel timings. Each pair is also checked for
// identical output; a mismatch exits nonzero.

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#include <CLI11.hpp>

#include "edvrp/evaluate.hpp"
#include "edvrp/ga.hpp"
#include "edvrp/instgen.hpp"
#include "edvrp/oracle.hpp"

using namespace edvrp;

namespace {

double best_of(int reps, const std::function<void()>& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void report(const char* name, double serial, double parallel, bool same) {
  std::printf("%-22s serial %10.3f ms  omp %10.3f ms  speedup %5.2fx  %s\n", name, serial * 1e3, parallel * 1e3,
              serial / std::max(parallel, 1e-12), same ? "match" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Serial vs OpenMP kernels"};
  bool quick = false;
  int threads = 0;
  app.add_flag("--quick", quick, "Small sizes and one repetition (smoke test)");
  app.add_option("--threads", threads, "OpenMP threads (default: all)");
  CLI11_PARSE(app, argc, argv);
  if (threads > 0) omp_set_num_threads(threads);

  const int reps = quick ? 1 : 5;
  std::printf("threads: %d\n", omp_get_max_threads());
  bool ok = true;

  {
    instgen::GenParams p;
    p.n_fields = 3;
    p.n_machines = 5;
    p.target_nodes = quick ? 40 : 200;
    p.seed = 1;
    const Instance inst = instgen::generate(p);
    Rng rng(1);
    const auto pop = ga::init_population(inst, quick ? 200 : 5000, rng);
    std::vector<double> a(pop.size()), b(pop.size());
    const double ts = best_of(reps, [&] { evaluate_population_serial(inst, pop, Objective::Makespan, a); });
    const double tp = best_of(reps, [&] { evaluate_population(inst, pop, Objective::Makespan, b); });
    ok &= a == b;
    report("evaluate_population", ts, tp, a == b);
  }

  {
    instgen::GenParams p;
    p.n_fields = 6;
    p.target_nodes = quick ? 40 : 400;
    p.seed = 2;
    const Instance inst = instgen::generate(p);
    const auto fg = instgen::farm_graph(inst);
    DistanceTensor a, b;
    const double ts = best_of(reps, [&] { a = instgen::shortest_distances_serial(fg->graph, fg->entrances); });
    const double tp = best_of(reps, [&] { b = instgen::shortest_distances(fg->graph, fg->entrances); });
    const bool same = std::equal(a.flat().begin(), a.flat().end(), b.flat().begin(), b.flat().end());
    ok &= same;
    report("shortest_distances", ts, tp, same);
  }

  {
    instgen::GenParams p;
    p.n_fields = 2;
    p.n_machines = quick ? 2 : 3;
    p.target_nodes = quick ? 6 : 8;
    p.seed = 3;
    const Instance inst = instgen::generate(p);
    ExactResult a, b;
    const double ts = best_of(1, [&] { a = exact_solve_serial(inst, Objective::TotalIdleDistance); });
    const double tp = best_of(1, [&] { b = exact_solve(inst, Objective::TotalIdleDistance); });
    const bool same = a.optimum == b.optimum && a.solution.routes == b.solution.routes;
    ok &= same;
    report("exact_solve", ts, tp, same);
  }

  return ok ? 0 : 1;
}
