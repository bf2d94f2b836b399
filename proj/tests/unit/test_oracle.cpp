#include <doctest.h>

#include <cmath>
#include <limits>

#include "edvrp/ga.hpp"
#include "edvrp/oracle.hpp"
#include "fixtures.hpp"

using namespace edvrp;
using fx::g;

namespace {

Instance single_line() {
  Instance inst = fx::planar(1, 1);
  inst.tensor.set_symmetric(0, 1, 0, 0, 30.0);
  inst.tensor.set_symmetric(0, 1, 1, 0, 30.0);
  inst.tensor.set_symmetric(0, 1, 0, 1, 20.0);
  inst.tensor.set_symmetric(0, 1, 1, 1, 20.0);
  return inst;
}

// Two fields, five lines, two machines; optima from an independent
// permutation x composition x entrance-mask enumeration.
Instance frozen_small() {
  instgen::GenParams p;
  p.n_fields = 2;
  p.n_machines = 2;
  p.target_nodes = 6;
  p.seed = 11;
  return instgen::generate(p);
}

}  // namespace

TEST_CASE("random search on one line finds the round trip") {
  const Instance inst = single_line();
  Rng rng(3);
  const Solution s = random_search(inst, Objective::TotalIdleDistance, Budget::evaluation_count(10), rng);
  CHECK(s.aggregate.s_P == doctest::Approx(50.0));
}

TEST_CASE("random search replays its samples from the seed") {
  const Instance inst = fx::farm(40);
  for (Objective o : {Objective::TotalIdleDistance, Objective::Makespan, Objective::TotalFuel}) {
    Rng a(77), b(77);
    const Solution one = random_search(inst, o, Budget::evaluation_count(1), a);
    const Chromosome c = ga::random_chromosome(inst, b);
    CHECK(objective_value(one.aggregate, o) == evaluate_chromosome(inst, c, o));

    Rng x(78), y(78);
    const Solution best = random_search(inst, o, Budget::evaluation_count(200), x);
    double manual = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 200; ++k) manual = std::min(manual, evaluate_chromosome(inst, ga::random_chromosome(inst, y), o));
    CHECK(objective_value(best.aggregate, o) == manual);
  }
}

TEST_CASE("random search rejects an empty budget") {
  Rng rng(1);
  CHECK_THROWS_AS(random_search(fx::planar(2, 1), Objective::TotalIdleDistance, Budget::evaluation_count(0), rng),
                  DataError);
}

TEST_CASE("wall-clock random search returns a valid solution") {
  Rng rng(1);
  const Solution s = random_search(fx::farm(41), Objective::Makespan, Budget::wall_clock(0.01), rng);
  CHECK(s.routes.size() == 3);
}

// Under reversal symmetry both round trips cost the same; the tie goes to entrance 0.
TEST_CASE("exact solver on one line") {
  const ExactResult r = exact_solve(single_line(), Objective::TotalIdleDistance);
  CHECK(r.solution.routes[0] == Route{g(1, 0)});
  CHECK(r.optimum == doctest::Approx(50.0));
  CHECK(r.candidates == 2);
}

TEST_CASE("exact solver matches independently enumerated optima") {
  const Instance inst = frozen_small();
  REQUIRE(inst.line_count() == 5);
  CHECK(exact_solve(inst, Objective::TotalIdleDistance).optimum == doctest::Approx(1346.721606768791).epsilon(1e-11));
  CHECK(exact_solve(inst, Objective::Makespan).optimum == doctest::Approx(439.290443854456).epsilon(1e-11));
  CHECK(exact_solve(inst, Objective::TotalFuel).optimum == doctest::Approx(4.863419843093).epsilon(1e-11));
}

TEST_CASE("exact solver enumerates every ordered partition") {
  // L lines on M machines: L! * C(L+M-1, M-1) orderings, times 2^L entrance choices.
  const ExactResult r = exact_solve(fx::planar(4, 2), Objective::TotalIdleDistance);
  CHECK(r.candidates == 24ULL * 5 * 16);
}

TEST_CASE("exact solver size bound") {
  CHECK_THROWS_WITH_AS(exact_solve(fx::planar(8, 1), Objective::TotalIdleDistance),
                       doctest::Contains("1..7 lines"), DataError);
  CHECK_THROWS_AS(exact_solve(fx::planar(3, 4), Objective::TotalIdleDistance), DataError);
}

TEST_CASE("exact optimum bounds every heuristic") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const Instance inst = fx::farm(seed, 2, 2, 6);
    for (Objective o : {Objective::TotalIdleDistance, Objective::Makespan, Objective::TotalFuel}) {
      const double opt = exact_solve(inst, o).optimum;
      Rng rng(seed);
      CHECK(opt <= objective_value(random_search(inst, o, Budget::evaluation_count(300), rng).aggregate, o));
      ga::GaConfig cfg;
      cfg.population_size = 30;
      cfg.iterations = 20;
      cfg.objective = o;
      cfg.seed = seed;
      CHECK(opt <= objective_value(ga::run_oga(inst, cfg).final_best.aggregate, o));
    }
  }
}
