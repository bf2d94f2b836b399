#pragma once

#include <span>
#include <utility>
#include <vector>

#include "edvrp/model.hpp"

namespace edvrp {

/// Idle travel of one route: depot -> entrance of the first line, exit of each
/// line -> entrance of the next, exit of the last line -> depot. Depot legs use
/// depot entrance 0. An empty route travels nothing.
double idle_distance(std::span<const Gene> route, const DistanceTensor& tensor);

/// Sum of the lengths of the lines on the route. Throws DataError on unknown ids.
double work_distance(std::span<const Gene> route, std::span<const WorkingLine> lines);

struct TimeAndFuel {
  double t_k = 0.0;
  double c_k_o = 0.0;
};

TimeAndFuel time_and_fuel(const Machine& m, double s_k, double s_k_w);

/// Fleet totals: summed idle distance, makespan, summed fuel.
Aggregate aggregate(std::span<const MachineMetrics> metrics);

double objective_value(const Aggregate& agg, Objective objective);

inline constexpr double kFitnessEpsilon = 1e-9;

/// Reciprocal of an objective value, guarded at kFitnessEpsilon.
double fitness(double value);

MachineMetrics machine_metrics(std::span<const Gene> route, const Machine& m,
                               const Instance& inst);

/// Full evaluation of decoded routes (one per machine).
Solution evaluate_routes(const Instance& inst, std::vector<Route> routes, Objective objective);

/// Objective of a chromosome without building a Solution. The chromosome is
/// assumed valid for inst.
double evaluate_chromosome(const Instance& inst, const Chromosome& chrom, Objective objective);

/// Objective of every chromosome, OpenMP-parallel over the population.
void evaluate_population(const Instance& inst, std::span<const Chromosome> population,
                         Objective objective, std::span<double> out);

/// Single-threaded reference for evaluate_population.
void evaluate_population_serial(const Instance& inst, std::span<const Chromosome> population,
                                Objective objective, std::span<double> out);

}  // namespace edvrp
