#pragma once

#include <cstdint>

#include "edvrp/model.hpp"
#include "edvrp/rng.hpp"

namespace edvrp {

/// Search budget of the random baseline: wall-clock seconds or a number of
/// sampled chromosomes. Only the evaluation-count mode is reproducible.
struct Budget {
  enum class Mode { WallClock, Evaluations };

  Mode mode = Mode::Evaluations;
  double seconds = 0.0;
  std::int64_t evaluations = 20000;

  static Budget wall_clock(double seconds);
  static Budget evaluation_count(std::int64_t count);
};

/// Best of uniformly sampled chromosomes within the budget.
Solution random_search(const Instance& inst, Objective objective, const Budget& budget, Rng& rng);

struct ExactResult {
  Solution solution;
  double optimum = 0.0;
  std::uint64_t candidates = 0;  // complete solutions evaluated
};

inline constexpr int kExactMaxLines = 7;
inline constexpr int kExactMaxMachines = 3;

/// Global optimum by exhaustive enumeration of line-to-machine assignments
/// (base-M counter over lines), per-machine orderings (lexicographic
/// permutations) and entrances (binary counter). Ties go to the
/// lexicographically smallest route list. Rejects instances larger than
/// kExactMaxLines lines or kExactMaxMachines machines.
///
/// Parallel over the assignment counter; the reduction uses a total order so
/// the result does not depend on scheduling.
ExactResult exact_solve(const Instance& inst, Objective objective);

/// Single-threaded reference for exact_solve.
ExactResult exact_solve_serial(const Instance& inst, Objective objective);

}  // namespace edvrp
