// OpenMP kernels against their serial references.

#include <doctest.h>

#include <omp.h>

#include "edvrp/ga.hpp"
#include "edvrp/oracle.hpp"
#include "fixtures.hpp"

using namespace edvrp;

TEST_CASE("population evaluation: parallel equals serial") {
  const Instance inst = fx::farm(60, 3, 5, 40);
  Rng rng(60);
  const auto pop = ga::init_population(inst, 257, rng);
  std::vector<double> par(pop.size()), ser(pop.size());
  for (Objective o : {Objective::TotalIdleDistance, Objective::Makespan, Objective::TotalFuel}) {
    evaluate_population(inst, pop, o, par);
    evaluate_population_serial(inst, pop, o, ser);
    CHECK(par == ser);
  }
}

TEST_CASE("shortest distances: parallel equals serial") {
  const Instance inst = fx::farm(61, 4, 3, 40);
  const auto fg = instgen::farm_graph(inst);
  REQUIRE(fg.has_value());
  const auto a = instgen::shortest_distances(fg->graph, fg->entrances);
  const auto b = instgen::shortest_distances_serial(fg->graph, fg->entrances);
  CHECK(std::equal(a.flat().begin(), a.flat().end(), b.flat().begin(), b.flat().end()));
}

TEST_CASE("exact solver: parallel equals serial, whatever the thread count") {
  const Instance inst = fx::farm(62, 2, 3, 7);
  for (Objective o : {Objective::TotalIdleDistance, Objective::Makespan}) {
    const auto ser = exact_solve_serial(inst, o);
    for (int threads : {1, 3, 8}) {
      omp_set_num_threads(threads);
      const auto par = exact_solve(inst, o);
      CHECK(par.optimum == ser.optimum);
      CHECK(par.solution.routes == ser.solution.routes);
      CHECK(par.candidates == ser.candidates);
    }
  }
  omp_set_num_threads(omp_get_num_procs());
}
