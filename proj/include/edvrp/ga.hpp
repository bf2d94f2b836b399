#pragma once

// Ordered Genetic Algorithm: roulette selection, segment-preserving crossover,
// elitist replacement and six mutation operators. Three operators ignore
// entrances (local inversion, inter-group exchange, inter-group transfer);
// the other three work on one machine's sequence (entrance inversion,
// intra-group sorting, greedy path). The last two are the "ordered" operators
// and can be switched off for ablation.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "edvrp/model.hpp"
#include "edvrp/rng.hpp"

namespace edvrp::ga {

enum class Variant { OGA, OGAGreedy, OGASort, GANoOrder };

std::string variant_name(Variant v);  // "OGA", "OGA-greedy", "OGA-sort", "GA-no-order"
Variant variant_from_name(const std::string& name);

struct GaConfig {
  int population_size = 200;
  int iterations = 200;
  double p_crossover = 0.6;
  double p_local_inversion = 0.5;
  double p_intergroup_exchange = 0.5;
  double p_intergroup_transfer = 0.6;
  double p_entrance_inversion = 0.5;
  double p_intragroup_sort = 0.8;
  double p_greedy_path = 0.8;
  bool enable_sort = true;
  bool enable_greedy = true;
  Objective objective = Objective::TotalIdleDistance;
  std::uint64_t seed = 0;

  /// Sets enable_sort/enable_greedy for an ablation variant.
  GaConfig& with_variant(Variant v);
  Variant variant() const;
};

/// Throws DataError if the configuration is out of range.
void validate_config(const GaConfig& cfg);

struct RunTrace {
  std::vector<double> best_objective_per_iteration;
  Solution final_best;
  double wall_time_s = 0.0;
};

/// Uniform permutation, uniform entrances, M-1 uniform cuts sorted.
Chromosome random_chromosome(const Instance& inst, Rng& rng);

std::vector<Chromosome> init_population(const Instance& inst, int size, Rng& rng);

/// Roulette wheel: index i with probability fitnesses[i] / sum.
std::size_t select_parent(std::span<const double> fitnesses, Rng& rng);

/// Two offspring. Each copies one non-empty segment of one parent in place,
/// fills the other positions from the other parent in its order skipping
/// duplicates, and takes its cuts from the other parent.
std::pair<Chromosome, Chromosome> crossover(const Chromosome& a, const Chromosome& b, Rng& rng);

/// Offspring with a segment of `donor` already chosen: copies donor.tour[begin, end)
/// in place and fills the rest from `filler` (missing lines, if any, are appended
/// in random order with random entrances). Cuts are taken from `filler`.
Chromosome crossover_child(const Chromosome& donor, int begin, int end, const Chromosome& filler,
                           Rng& rng);

/// If the fittest parent beats every offspring strictly, it replaces the
/// weakest offspring. Returns true when a replacement happened.
bool elitist_replace(std::span<const Chromosome> parents, std::span<const double> parent_fitness,
                     std::vector<Chromosome>& offspring, std::vector<double>& offspring_fitness);

// Deterministic operator cores. The random operators below pick their
// arguments uniformly and then call these.

void reverse_range(Chromosome& c, int first, int last);  // inclusive
void swap_genes(Chromosome& c, int pos_a, int pos_b);
/// Moves the gene at from_pos into segment to_segment at offset (counted in
/// the target segment before insertion); other segments keep their contents.
void transfer_gene(Chromosome& c, int from_pos, int to_segment, int offset);
void invert_entrances(Chromosome& c, int segment);
void sort_segment_by_field(Chromosome& c, const Instance& inst, int segment);
void greedy_entrances(Chromosome& c, const Instance& inst);

void mutate_local_inversion(Chromosome& c, Rng& rng);
void mutate_intergroup_exchange(Chromosome& c, Rng& rng);
void mutate_intergroup_transfer(Chromosome& c, Rng& rng);
void mutate_entrance_inversion(Chromosome& c, Rng& rng);
void mutate_intragroup_sort(Chromosome& c, const Instance& inst, Rng& rng);
void mutate_greedy_path(Chromosome& c, const Instance& inst);

/// Applies every enabled mutation operator independently with its probability,
/// in the order: local inversion, exchange, transfer, entrance inversion,
/// intra-group sort, greedy path.
void mutate(Chromosome& c, const Instance& inst, const GaConfig& cfg, Rng& rng);

struct RunOptions {
  /// Called with each generation's population after replacement.
  std::function<void(int iteration, std::span<const Chromosome> population)> on_generation;
  bool parallel_evaluation = true;
};

RunTrace run_oga(const Instance& inst, const GaConfig& cfg, const RunOptions& opts = {});

}  // namespace edvrp::ga
