#include "edvrp/ga.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

#include "edvrp/evaluate.hpp"

namespace edvrp::ga {

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::OGA:
      return "OGA";
    case Variant::OGAGreedy:
      return "OGA-greedy";
    case Variant::OGASort:
      return "OGA-sort";
    case Variant::GANoOrder:
      return "GA-no-order";
  }
  return "OGA";
}

Variant variant_from_name(const std::string& name) {
  for (auto v : {Variant::OGA, Variant::OGAGreedy, Variant::OGASort, Variant::GANoOrder})
    if (variant_name(v) == name) return v;
  throw DataError("unknown GA variant '" + name + "'");
}

GaConfig& GaConfig::with_variant(Variant v) {
  enable_sort = v == Variant::OGA || v == Variant::OGASort;
  enable_greedy = v == Variant::OGA || v == Variant::OGAGreedy;
  return *this;
}

Variant GaConfig::variant() const {
  if (enable_sort && enable_greedy) return Variant::OGA;
  if (enable_greedy) return Variant::OGAGreedy;
  if (enable_sort) return Variant::OGASort;
  return Variant::GANoOrder;
}

void validate_config(const GaConfig& cfg) {
  if (cfg.population_size < 2) throw DataError("population size must be at least 2");
  if (cfg.iterations < 1) throw DataError("iteration count must be at least 1");
  for (double p : {cfg.p_crossover, cfg.p_local_inversion, cfg.p_intergroup_exchange,
                   cfg.p_intergroup_transfer, cfg.p_entrance_inversion, cfg.p_intragroup_sort,
                   cfg.p_greedy_path}) {
    if (!(p >= 0.0 && p <= 1.0)) throw DataError("operator probabilities must lie in [0, 1]");
  }
}

Chromosome random_chromosome(const Instance& inst, Rng& rng) {
  const int L = inst.line_count();
  const int M = inst.machine_count();
  Chromosome c;
  c.tour.resize(static_cast<std::size_t>(L));
  for (int k = 0; k < L; ++k) c.tour[static_cast<std::size_t>(k)].line = k + 1;
  // Fisher-Yates, high to low
  for (int k = L - 1; k > 0; --k) std::swap(c.tour[static_cast<std::size_t>(k)],
                                            c.tour[static_cast<std::size_t>(rng.below(k + 1))]);
  for (auto& g : c.tour) g.entrance = Entrance(rng.below(2));
  c.cuts.resize(static_cast<std::size_t>(M - 1));
  for (auto& cut : c.cuts) cut = rng.between(0, L);
  std::sort(c.cuts.begin(), c.cuts.end());
  return c;
}

std::vector<Chromosome> init_population(const Instance& inst, int size, Rng& rng) {
  std::vector<Chromosome> pop;
  pop.reserve(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) pop.push_back(random_chromosome(inst, rng));
  return pop;
}

std::size_t select_parent(std::span<const double> fitnesses, Rng& rng) {
  const double total = std::accumulate(fitnesses.begin(), fitnesses.end(), 0.0);
  if (!(total > 0.0)) throw DataError("roulette wheel needs a positive total fitness");
  const double r = rng.uniform() * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < fitnesses.size(); ++i) {
    if (fitnesses[i] <= 0.0) continue;
    acc += fitnesses[i];
    last_positive = i;
    if (r < acc) return i;
  }
  return last_positive;  // rounding at the top of the wheel
}

namespace {

std::vector<int> non_empty_segments(const Chromosome& c) {
  std::vector<int> out;
  for (int k = 0; k < c.segment_count(); ++k)
    if (c.segment_size(k) > 0) out.push_back(k);
  return out;
}

int pick_non_empty_segment(const Chromosome& c, Rng& rng) {
  const auto segs = non_empty_segments(c);
  if (segs.empty()) return -1;
  return segs[static_cast<std::size_t>(rng.below(static_cast<int>(segs.size())))];
}

}  // namespace

Chromosome crossover_child(const Chromosome& donor, int begin, int end, const Chromosome& filler,
                           Rng& rng) {
  const int L = static_cast<int>(donor.tour.size());
  Chromosome child;
  child.tour.resize(static_cast<std::size_t>(L));
  std::vector<char> used(static_cast<std::size_t>(L) + 1, 0);
  std::vector<char> filled(static_cast<std::size_t>(L), 0);
  for (int p = begin; p < end; ++p) {
    const Gene& g = donor.tour[static_cast<std::size_t>(p)];
    child.tour[static_cast<std::size_t>(p)] = g;
    used[static_cast<std::size_t>(g.line)] = 1;
    filled[static_cast<std::size_t>(p)] = 1;
  }
  int pos = 0;
  auto next_free = [&] {
    while (pos < L && filled[static_cast<std::size_t>(pos)]) ++pos;
    return pos;
  };
  for (const Gene& g : filler.tour) {
    if (used[static_cast<std::size_t>(g.line)]) continue;
    if (next_free() >= L) break;
    child.tour[static_cast<std::size_t>(pos)] = g;
    filled[static_cast<std::size_t>(pos)] = 1;
    used[static_cast<std::size_t>(g.line)] = 1;
  }
  // Random completion; only reachable when the parents are not permutations
  // of the same line set.
  std::vector<int> missing;
  for (int line = 1; line <= L; ++line)
    if (!used[static_cast<std::size_t>(line)]) missing.push_back(line);
  for (int k = static_cast<int>(missing.size()) - 1; k > 0; --k)
    std::swap(missing[static_cast<std::size_t>(k)],
              missing[static_cast<std::size_t>(rng.below(k + 1))]);
  for (int line : missing) {
    next_free();
    child.tour[static_cast<std::size_t>(pos)] = Gene{line, Entrance(rng.below(2))};
    filled[static_cast<std::size_t>(pos)] = 1;
  }
  child.cuts = filler.cuts;
  for (auto& cut : child.cuts) cut = std::clamp(cut, 0, L);
  return child;
}

std::pair<Chromosome, Chromosome> crossover(const Chromosome& a, const Chromosome& b, Rng& rng) {
  const int ka = pick_non_empty_segment(a, rng);
  const int kb = pick_non_empty_segment(b, rng);
  Chromosome first = crossover_child(a, a.segment_begin(ka), a.segment_end(ka), b, rng);
  Chromosome second = crossover_child(b, b.segment_begin(kb), b.segment_end(kb), a, rng);
  return {std::move(first), std::move(second)};
}

bool elitist_replace(std::span<const Chromosome> parents, std::span<const double> parent_fitness,
                     std::vector<Chromosome>& offspring, std::vector<double>& offspring_fitness) {
  if (parents.empty() || offspring.empty()) return false;
  const auto best_parent =
      std::max_element(parent_fitness.begin(), parent_fitness.end()) - parent_fitness.begin();
  const double best_offspring =
      *std::max_element(offspring_fitness.begin(), offspring_fitness.end());
  if (!(parent_fitness[static_cast<std::size_t>(best_parent)] > best_offspring)) return false;
  const auto weakest =
      std::min_element(offspring_fitness.begin(), offspring_fitness.end()) -
      offspring_fitness.begin();
  offspring[static_cast<std::size_t>(weakest)] = parents[static_cast<std::size_t>(best_parent)];
  offspring_fitness[static_cast<std::size_t>(weakest)] =
      parent_fitness[static_cast<std::size_t>(best_parent)];
  return true;
}

void reverse_range(Chromosome& c, int first, int last) {
  if (first > last) std::swap(first, last);
  std::reverse(c.tour.begin() + first, c.tour.begin() + last + 1);
}

void swap_genes(Chromosome& c, int pos_a, int pos_b) {
  std::swap(c.tour[static_cast<std::size_t>(pos_a)], c.tour[static_cast<std::size_t>(pos_b)]);
}

void transfer_gene(Chromosome& c, int from_pos, int to_segment, int offset) {
  int from_segment = 0;
  while (c.segment_end(from_segment) <= from_pos) ++from_segment;
  const Gene g = c.tour[static_cast<std::size_t>(from_pos)];
  c.tour.erase(c.tour.begin() + from_pos);
  for (int k = from_segment; k < static_cast<int>(c.cuts.size()); ++k) --c.cuts[static_cast<std::size_t>(k)];
  const int at = c.segment_begin(to_segment) + offset;
  c.tour.insert(c.tour.begin() + at, g);
  for (int k = to_segment; k < static_cast<int>(c.cuts.size()); ++k) ++c.cuts[static_cast<std::size_t>(k)];
}

void invert_entrances(Chromosome& c, int segment) {
  for (auto& g : c.segment(segment)) g.entrance = g.entrance.flipped();
}

void sort_segment_by_field(Chromosome& c, const Instance& inst, int segment) {
  auto seg = c.segment(segment);
  std::vector<int> fields;
  for (const Gene& g : seg) fields.push_back(inst.line(g.line).field_id);
  std::vector<int> distinct = fields;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  std::vector<std::size_t> positions;
  std::vector<int> lines;
  for (int field : distinct) {
    positions.clear();
    lines.clear();
    for (std::size_t p = 0; p < seg.size(); ++p) {
      if (fields[p] != field) continue;
      positions.push_back(p);
      lines.push_back(seg[p].line);
    }
    if (positions.size() < 2) continue;
    const Entrance anchor = seg[positions.front()].entrance;
    std::sort(lines.begin(), lines.end(), [&](int x, int y) {
      return inst.line(x).ordinal < inst.line(y).ordinal;
    });
    for (std::size_t k = 0; k < positions.size(); ++k)
      seg[positions[k]] = Gene{lines[k], k % 2 == 0 ? anchor : anchor.flipped()};
  }
}

void greedy_entrances(Chromosome& c, const Instance& inst) {
  const auto& d = inst.tensor;
  for (int k = 0; k < c.segment_count(); ++k) {
    auto seg = c.segment(k);
    if (seg.empty()) continue;
    const int first = seg[0].line;
    seg[0].entrance = Entrance(d.at(0, first, 0, 1) < d.at(0, first, 0, 0) ? 1 : 0);
    for (std::size_t i = 1; i < seg.size(); ++i) {
      const int prev = seg[i - 1].line;
      const int exit = seg[i - 1].entrance.flipped().index();
      const int cur = seg[i].line;
      seg[i].entrance = Entrance(d.at(prev, cur, exit, 1) < d.at(prev, cur, exit, 0) ? 1 : 0);
    }
  }
}

void mutate_local_inversion(Chromosome& c, Rng& rng) {
  const int L = static_cast<int>(c.tour.size());
  if (L < 2) return;
  const int i = rng.below(L);
  const int j = rng.below(L);
  reverse_range(c, i, j);
}

void mutate_intergroup_exchange(Chromosome& c, Rng& rng) {
  auto segs = non_empty_segments(c);
  if (segs.size() < 2) return;
  const auto first = static_cast<std::size_t>(rng.below(static_cast<int>(segs.size())));
  const int seg_a = segs[first];
  segs.erase(segs.begin() + static_cast<std::ptrdiff_t>(first));
  const int seg_b = segs[static_cast<std::size_t>(rng.below(static_cast<int>(segs.size())))];
  const int pos_a = c.segment_begin(seg_a) + rng.below(c.segment_size(seg_a));
  const int pos_b = c.segment_begin(seg_b) + rng.below(c.segment_size(seg_b));
  swap_genes(c, pos_a, pos_b);
}

void mutate_intergroup_transfer(Chromosome& c, Rng& rng) {
  const int M = c.segment_count();
  const int L = static_cast<int>(c.tour.size());
  if (M < 2 || L < 1) return;
  const int from_pos = rng.below(L);
  int from_segment = 0;
  while (c.segment_end(from_segment) <= from_pos) ++from_segment;
  int to_segment = rng.below(M - 1);
  if (to_segment >= from_segment) ++to_segment;
  const int offset = rng.between(0, c.segment_size(to_segment));
  transfer_gene(c, from_pos, to_segment, offset);
}

void mutate_entrance_inversion(Chromosome& c, Rng& rng) {
  const int k = pick_non_empty_segment(c, rng);
  if (k >= 0) invert_entrances(c, k);
}

void mutate_intragroup_sort(Chromosome& c, const Instance& inst, Rng& rng) {
  const int k = pick_non_empty_segment(c, rng);
  if (k >= 0) sort_segment_by_field(c, inst, k);
}

void mutate_greedy_path(Chromosome& c, const Instance& inst) { greedy_entrances(c, inst); }

void mutate(Chromosome& c, const Instance& inst, const GaConfig& cfg, Rng& rng) {
  if (rng.bernoulli(cfg.p_local_inversion)) mutate_local_inversion(c, rng);
  if (rng.bernoulli(cfg.p_intergroup_exchange)) mutate_intergroup_exchange(c, rng);
  if (rng.bernoulli(cfg.p_intergroup_transfer)) mutate_intergroup_transfer(c, rng);
  if (rng.bernoulli(cfg.p_entrance_inversion)) mutate_entrance_inversion(c, rng);
  if (cfg.enable_sort && rng.bernoulli(cfg.p_intragroup_sort)) mutate_intragroup_sort(c, inst, rng);
  if (cfg.enable_greedy && rng.bernoulli(cfg.p_greedy_path)) mutate_greedy_path(c, inst);
}

RunTrace run_oga(const Instance& inst, const GaConfig& cfg, const RunOptions& opts) {
  validate_config(cfg);
  if (!validate_instance(inst).empty()) throw DataError("run_oga: instance is not valid");
  const auto start = std::chrono::steady_clock::now();
  const auto n = static_cast<std::size_t>(cfg.population_size);
  Rng rng(cfg.seed);

  auto evaluate_all = [&](std::span<const Chromosome> pop, std::vector<double>& fit) {
    fit.resize(pop.size());
    if (opts.parallel_evaluation)
      evaluate_population(inst, pop, cfg.objective, fit);
    else
      evaluate_population_serial(inst, pop, cfg.objective, fit);
    for (auto& v : fit) v = fitness(v);
  };

  std::vector<Chromosome> population = init_population(inst, cfg.population_size, rng);
  std::vector<double> fit;
  evaluate_all(population, fit);

  std::vector<Chromosome> offspring;
  std::vector<double> offspring_fit;
  offspring.reserve(n + 1);

  std::size_t best_idx = static_cast<std::size_t>(std::max_element(fit.begin(), fit.end()) - fit.begin());
  Chromosome best = population[best_idx];
  double best_fit = fit[best_idx];

  RunTrace trace;
  trace.best_objective_per_iteration.reserve(static_cast<std::size_t>(cfg.iterations));

  for (int it = 0; it < cfg.iterations; ++it) {
    offspring.clear();
    while (offspring.size() < n) {
      const Chromosome& pa = population[select_parent(fit, rng)];
      const Chromosome& pb = population[select_parent(fit, rng)];
      Chromosome c1, c2;
      if (rng.bernoulli(cfg.p_crossover)) {
        std::tie(c1, c2) = crossover(pa, pb, rng);
      } else {
        c1 = pa;
        c2 = pb;
      }
      mutate(c1, inst, cfg, rng);
      offspring.push_back(std::move(c1));
      if (offspring.size() < n) {
        mutate(c2, inst, cfg, rng);
        offspring.push_back(std::move(c2));
      }
    }
    evaluate_all(offspring, offspring_fit);
    elitist_replace(population, fit, offspring, offspring_fit);
    population.swap(offspring);
    fit.swap(offspring_fit);

    best_idx = static_cast<std::size_t>(std::max_element(fit.begin(), fit.end()) - fit.begin());
    if (fit[best_idx] > best_fit) {
      best_fit = fit[best_idx];
      best = population[best_idx];
    }
    trace.best_objective_per_iteration.push_back(evaluate_chromosome(inst, best, cfg.objective));
    if (opts.on_generation) opts.on_generation(it, population);
  }

  trace.final_best = evaluate_routes(inst, decode(best, inst), cfg.objective);
  trace.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return trace;
}

}  // namespace edvrp::ga
