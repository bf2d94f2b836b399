#pragma once

// Benchmark suites: a grid of (case, objective, algorithm) cells run in
// parallel across cells, with every run seeded from the case seed and the
// objective alone so that any row can be recomputed in isolation.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "edvrp/ga.hpp"
#include "edvrp/io.hpp"
#include "edvrp/model.hpp"
#include "edvrp/oracle.hpp"

namespace edvrp::suite {

/// "rand" or a GA variant name.
struct Algorithm {
  bool random_search = false;
  ga::Variant variant = ga::Variant::OGA;

  static Algorithm rand() { return {true, ga::Variant::OGA}; }
  static Algorithm oga(ga::Variant v) { return {false, v}; }
  std::string name() const;
  static Algorithm from_name(const std::string& name);  // throws std::invalid_argument
  bool operator==(const Algorithm&) const = default;
};

inline constexpr int kFieldCounts[] = {1, 2, 3, 4, 6};
inline constexpr int kMachineCounts[] = {3, 5, 7};

struct SuiteCase {
  std::string case_id;
  std::uint64_t seed = 0;
  std::optional<Instance> instance;
  std::string load_error;  // set when instance is empty
};

struct BenchRow {
  std::string case_id;
  std::string algorithm;
  char objective = 's';
  double s_P = 0.0;
  double t_P = 0.0;
  double c_P = 0.0;
  double wall_time_s = 0.0;
  std::uint64_t seed = 0;
  std::string status = "ok";
};

struct SuiteOptions {
  ga::GaConfig ga;  // objective, seed and variant flags are overwritten per cell
  Budget rand_budget = Budget::evaluation_count(20000);
  bool record_wall_time = false;  // otherwise wall_time_s is written as 0
  int threads = 0;                // 0: EDVRP_THREADS, else the OpenMP default
};

/// Seed shared by every algorithm of one (case, objective) cell.
std::uint64_t run_seed(std::uint64_t case_seed, Objective objective);

/// Thread cap from EDVRP_THREADS (0 when unset or not a positive integer).
int env_thread_cap();

BenchRow run_cell(const SuiteCase& c, Objective objective, const Algorithm& algo,
                  const SuiteOptions& opts);

/// Rows ordered by case, then algorithm (in the given order), then objective.
std::vector<BenchRow> run_suite(std::span<const SuiteCase> cases, std::span<const Objective> objectives,
                                std::span<const Algorithm> algorithms, const SuiteOptions& opts);

struct SummaryRow {
  std::string label;  // e.g. "OGA(s)"
  double avg_s_P = 0.0;
  double avg_t_P = 0.0;
  double avg_c_P = 0.0;
  int n = 0;
};

/// Means over rows with status "ok", one per (algorithm, objective) present,
/// in the order those pairs first appear when sorted by algorithm then objective.
std::vector<SummaryRow> summarize(std::span<const BenchRow> rows, std::span<const Algorithm> algorithms,
                                  std::span<const Objective> objectives);

/// Mean of the optimized objective for one (algorithm, objective) label.
double summary_objective(const SummaryRow& row, Objective objective);

std::string to_csv(std::span<const BenchRow> rows, std::span<const SummaryRow> summary);

/// Re-runs a deterministic sample of about `fraction` of the rows (at least
/// one) and returns the rows whose metrics differ from the recorded ones.
std::vector<BenchRow> verify_sample(std::span<const BenchRow> rows, std::span<const SuiteCase> cases,
                                    const SuiteOptions& opts, double fraction = 0.05,
                                    std::uint64_t sample_seed = 0);

/// Manifest of n cases cycling through the field and machine counts; case i
/// is generated from split_seed(suite_seed, i).
io::Manifest make_manifest(std::uint64_t suite_seed, int n_cases, std::span<const int> field_counts,
                           std::span<const int> machine_counts, const instgen::GenParams& base = {});

/// Generates every case of a manifest in memory (parallel over cases).
std::vector<SuiteCase> generate_cases(const io::Manifest& manifest);

}  // namespace edvrp::suite
