#include "edvrp/evaluate.hpp"

#include <algorithm>
#include <cstddef>

namespace edvrp {

double idle_distance(std::span<const Gene> route, const DistanceTensor& tensor) {
  if (route.empty()) return 0.0;
  double s = tensor.at(0, route.front().line, 0, route.front().entrance.index());
  for (std::size_t i = 1; i < route.size(); ++i) {
    const Gene& prev = route[i - 1];
    const Gene& cur = route[i];
    s += tensor.at(prev.line, cur.line, prev.entrance.flipped(), cur.entrance);
  }
  const Gene& last = route.back();
  s += tensor.at(last.line, 0, last.entrance.flipped().index(), 0);
  return s;
}

double work_distance(std::span<const Gene> route, std::span<const WorkingLine> lines) {
  double s = 0.0;
  for (const Gene& g : route) {
    if (g.line < 1 || g.line > static_cast<int>(lines.size()))
      throw DataError("route references unknown line " + std::to_string(g.line));
    s += lines[static_cast<std::size_t>(g.line - 1)].length_m;
  }
  return s;
}

TimeAndFuel time_and_fuel(const Machine& m, double s_k, double s_k_w) {
  const double idle_time = s_k / m.vv;
  const double work_time = s_k_w / m.vw;
  return {idle_time + work_time, idle_time * m.cv + work_time * m.cw};
}

Aggregate aggregate(std::span<const MachineMetrics> metrics) {
  Aggregate agg;
  for (const auto& m : metrics) {
    agg.s_P += m.s_k;
    agg.t_P = std::max(agg.t_P, m.t_k);
    agg.c_P += m.c_k_o;
  }
  return agg;
}

double objective_value(const Aggregate& agg, Objective objective) {
  switch (objective) {
    case Objective::TotalIdleDistance:
      return agg.s_P;
    case Objective::Makespan:
      return agg.t_P;
    case Objective::TotalFuel:
      return agg.c_P;
  }
  return agg.s_P;
}

double fitness(double value) {
  if (value < 0.0) throw DataError("objective value must be non-negative");
  return 1.0 / std::max(value, kFitnessEpsilon);
}

MachineMetrics machine_metrics(std::span<const Gene> route, const Machine& m,
                               const Instance& inst) {
  MachineMetrics mm;
  mm.s_k = idle_distance(route, inst.tensor);
  mm.s_k_w = work_distance(route, inst.lines);
  const auto tf = time_and_fuel(m, mm.s_k, mm.s_k_w);
  mm.t_k = tf.t_k;
  mm.c_k_o = tf.c_k_o;
  return mm;
}

Solution evaluate_routes(const Instance& inst, std::vector<Route> routes, Objective objective) {
  if (routes.size() != inst.machines.size())
    throw DataError("solution has " + std::to_string(routes.size()) + " routes for " +
                    std::to_string(inst.machines.size()) + " machines");
  Solution sol;
  sol.objective = objective;
  sol.per_machine.reserve(routes.size());
  for (std::size_t k = 0; k < routes.size(); ++k)
    sol.per_machine.push_back(machine_metrics(routes[k], inst.machines[k], inst));
  sol.aggregate = aggregate(sol.per_machine);
  sol.routes = std::move(routes);
  return sol;
}

double evaluate_chromosome(const Instance& inst, const Chromosome& chrom, Objective objective) {
  Aggregate agg;
  for (int k = 0; k < chrom.segment_count(); ++k) {
    const auto seg = chrom.segment(k);
    if (seg.empty()) continue;
    const Machine& m = inst.machines[static_cast<std::size_t>(k)];
    const double s = idle_distance(seg, inst.tensor);
    double w = 0.0;
    for (const Gene& g : seg) w += inst.lines[static_cast<std::size_t>(g.line - 1)].length_m;
    const auto tf = time_and_fuel(m, s, w);
    agg.s_P += s;
    agg.t_P = std::max(agg.t_P, tf.t_k);
    agg.c_P += tf.c_k_o;
  }
  return objective_value(agg, objective);
}

void evaluate_population(const Instance& inst, std::span<const Chromosome> population,
                         Objective objective, std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(population.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] =
        evaluate_chromosome(inst, population[static_cast<std::size_t>(i)], objective);
}

void evaluate_population_serial(const Instance& inst, std::span<const Chromosome> population,
                                Objective objective, std::span<double> out) {
  for (std::size_t i = 0; i < population.size(); ++i)
    out[i] = evaluate_chromosome(inst, population[i], objective);
}

}  // namespace edvrp
