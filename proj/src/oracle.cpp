#include "edvrp/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <string>
#include <vector>

#include "edvrp/evaluate.hpp"
#include "edvrp/ga.hpp"

namespace edvrp {

Budget Budget::wall_clock(double seconds) {
  if (!(seconds > 0.0)) throw DataError("wall-clock budget must be > 0 seconds");
  Budget b;
  b.mode = Mode::WallClock;
  b.seconds = seconds;
  return b;
}

Budget Budget::evaluation_count(std::int64_t count) {
  if (count < 1) throw DataError("evaluation budget must be at least 1");
  Budget b;
  b.mode = Mode::Evaluations;
  b.evaluations = count;
  return b;
}

Solution random_search(const Instance& inst, Objective objective, const Budget& budget, Rng& rng) {
  Chromosome best;
  double best_value = std::numeric_limits<double>::infinity();
  auto sample = [&] {
    Chromosome c = ga::random_chromosome(inst, rng);
    const double v = evaluate_chromosome(inst, c, objective);
    if (v < best_value) {
      best_value = v;
      best = std::move(c);
    }
  };
  if (budget.mode == Budget::Mode::Evaluations) {
    if (budget.evaluations < 1) throw DataError("evaluation budget must be at least 1");
    for (std::int64_t i = 0; i < budget.evaluations; ++i) sample();
  } else {
    using clock = std::chrono::steady_clock;
    const auto deadline =
        clock::now() + std::chrono::duration_cast<clock::duration>(
                           std::chrono::duration<double>(budget.seconds));
    do {
      for (int i = 0; i < 64; ++i) sample();
    } while (clock::now() < deadline);
  }
  return evaluate_routes(inst, decode(best, inst), objective);
}

namespace {

struct Candidate {
  double value = std::numeric_limits<double>::infinity();
  std::vector<Route> routes;
};

bool better(double value, const std::vector<Route>& routes, const Candidate& than) {
  if (value != than.value) return value < than.value;
  return routes < than.routes;
}

double routes_objective(const Instance& inst, const std::vector<Route>& routes,
                        Objective objective) {
  Aggregate agg;
  for (std::size_t k = 0; k < routes.size(); ++k) {
    if (routes[k].empty()) continue;
    const auto mm = machine_metrics(routes[k], inst.machines[k], inst);
    agg.s_P += mm.s_k;
    agg.t_P = std::max(agg.t_P, mm.t_k);
    agg.c_P += mm.c_k_o;
  }
  return objective_value(agg, objective);
}

void check_size(const Instance& inst) {
  const int L = inst.line_count();
  const int M = inst.machine_count();
  if (L > kExactMaxLines || M > kExactMaxMachines || L < 1 || M < 1) {
    throw DataError("exact solver supports 1.." + std::to_string(kExactMaxLines) +
                    " lines and 1.." + std::to_string(kExactMaxMachines) +
                    " machines (instance has L=" + std::to_string(L) +
                    ", M=" + std::to_string(M) + ")");
  }
}

std::int64_t assignment_count(int L, int M) {
  std::int64_t n = 1;
  for (int i = 0; i < L; ++i) n *= M;
  return n;
}

/// Enumerates every ordering and entrance choice for one line-to-machine
/// assignment and folds them into `best`.
void enumerate_assignment(const Instance& inst, Objective objective, std::int64_t assignment,
                          Candidate& best, std::uint64_t& candidates) {
  const int L = inst.line_count();
  const int M = inst.machine_count();
  std::vector<Route> routes(static_cast<std::size_t>(M));
  std::int64_t code = assignment;
  for (int line = 1; line <= L; ++line) {
    routes[static_cast<std::size_t>(code % M)].push_back(Gene{line, Entrance(0)});
    code /= M;
  }
  auto by_line = [](const Gene& a, const Gene& b) { return a.line < b.line; };

  while (true) {
    for (std::uint32_t mask = 0; mask < (1u << L); ++mask) {
      std::uint32_t bit = 0;
      for (auto& r : routes)
        for (auto& g : r) g.entrance = Entrance(static_cast<int>((mask >> bit++) & 1u));
      const double v = routes_objective(inst, routes, objective);
      ++candidates;
      if (better(v, routes, best)) {
        best.value = v;
        best.routes = routes;
      }
    }
    // Odometer over per-machine permutations, last machine fastest.
    int k = M - 1;
    while (k >= 0) {
      auto& r = routes[static_cast<std::size_t>(k)];
      if (std::next_permutation(r.begin(), r.end(), by_line)) break;
      --k;
    }
    if (k < 0) break;
  }
}

ExactResult finish(const Instance& inst, Objective objective, Candidate best,
                   std::uint64_t candidates) {
  ExactResult res;
  res.optimum = best.value;
  res.candidates = candidates;
  res.solution = evaluate_routes(inst, std::move(best.routes), objective);
  return res;
}

}  // namespace

ExactResult exact_solve(const Instance& inst, Objective objective) {
  check_size(inst);
  const std::int64_t total = assignment_count(inst.line_count(), inst.machine_count());
  Candidate best;
  std::uint64_t candidates = 0;
#pragma omp parallel
  {
    Candidate local;
    std::uint64_t local_count = 0;
#pragma omp for schedule(dynamic, 8) nowait
    for (std::int64_t a = 0; a < total; ++a)
      enumerate_assignment(inst, objective, a, local, local_count);
#pragma omp critical(edvrp_exact_reduce)
    {
      candidates += local_count;
      if (!local.routes.empty() && better(local.value, local.routes, best)) best = std::move(local);
    }
  }
  return finish(inst, objective, std::move(best), candidates);
}

ExactResult exact_solve_serial(const Instance& inst, Objective objective) {
  check_size(inst);
  const std::int64_t total = assignment_count(inst.line_count(), inst.machine_count());
  Candidate best;
  std::uint64_t candidates = 0;
  for (std::int64_t a = 0; a < total; ++a)
    enumerate_assignment(inst, objective, a, best, candidates);
  return finish(inst, objective, std::move(best), candidates);
}

}  // namespace edvrp
