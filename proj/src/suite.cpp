#include "edvrp/suite.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "edvrp/evaluate.hpp"
#include "edvrp/instgen.hpp"
#include "edvrp/rng.hpp"

namespace edvrp::suite {

namespace {

int objective_index(Objective o) { return static_cast<int>(o); }

std::string csv_safe(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

int effective_threads(const SuiteOptions& opts) {
  if (opts.threads > 0) return opts.threads;
  if (const int cap = env_thread_cap(); cap > 0) return cap;
  return omp_get_max_threads();
}

}  // namespace

std::string Algorithm::name() const { return random_search ? "rand" : ga::variant_name(variant); }

Algorithm Algorithm::from_name(const std::string& name) {
  if (name == "rand") return rand();
  if (name == "oga") return oga(ga::Variant::OGA);
  try {
    return oga(ga::variant_from_name(name));
  } catch (const std::exception&) {
    throw std::invalid_argument("unknown algorithm '" + name + "'");
  }
}

std::uint64_t run_seed(std::uint64_t case_seed, Objective objective) {
  return split_seed(case_seed, static_cast<std::uint64_t>(objective_index(objective)));
}

int env_thread_cap() {
  const char* v = std::getenv("EDVRP_THREADS");
  if (!v || !*v) return 0;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n <= 0) return 0;
  return static_cast<int>(std::min<long>(n, 4096));
}

BenchRow run_cell(const SuiteCase& c, Objective objective, const Algorithm& algo, const SuiteOptions& opts) {
  BenchRow row;
  row.case_id = c.case_id;
  row.algorithm = algo.name();
  row.objective = objective_code(objective);
  row.seed = run_seed(c.seed, objective);
  if (!c.instance) {
    row.status = "error: " + csv_safe(c.load_error);
    return row;
  }
  const auto start = std::chrono::steady_clock::now();
  try {
    Solution sol;
    if (algo.random_search) {
      Rng rng(row.seed);
      sol = random_search(*c.instance, objective, opts.rand_budget, rng);
    } else {
      ga::GaConfig cfg = opts.ga;
      cfg.with_variant(algo.variant);
      cfg.objective = objective;
      cfg.seed = row.seed;
      ga::RunOptions ro;
      ro.parallel_evaluation = false;  // parallelism lives at the suite level
      sol = ga::run_oga(*c.instance, cfg, ro).final_best;
    }
    row.s_P = sol.aggregate.s_P;
    row.t_P = sol.aggregate.t_P;
    row.c_P = sol.aggregate.c_P;
  } catch (const std::exception& e) {
    row.status = "error: " + csv_safe(e.what());
  }
  if (opts.record_wall_time)
    row.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

std::vector<BenchRow> run_suite(std::span<const SuiteCase> cases, std::span<const Objective> objectives,
                                std::span<const Algorithm> algorithms, const SuiteOptions& opts) {
  const std::size_t nc = cases.size(), na = algorithms.size(), no = objectives.size();
  std::vector<BenchRow> rows(nc * na * no);
  const auto cells = static_cast<std::int64_t>(rows.size());
  // Cells have uneven cost (random search vs GA, instance size), hence dynamic.
#pragma omp parallel for schedule(dynamic, 1) num_threads(effective_threads(opts))
  for (std::int64_t k = 0; k < cells; ++k) {
    const auto u = static_cast<std::size_t>(k);
    const std::size_t ci = u / (na * no), ai = (u / no) % na, oi = u % no;
    rows[u] = run_cell(cases[ci], objectives[oi], algorithms[ai], opts);
  }
  // Cell index order already matches (case, algorithm, objective) in input
  // order; the stable sort by case_id makes the bytes independent of how the
  // caller ordered the cases.
  std::stable_sort(rows.begin(), rows.end(),
                   [](const BenchRow& a, const BenchRow& b) { return a.case_id < b.case_id; });
  return rows;
}

std::vector<SummaryRow> summarize(std::span<const BenchRow> rows, std::span<const Algorithm> algorithms,
                                  std::span<const Objective> objectives) {
  std::vector<SummaryRow> out;
  for (const auto& algo : algorithms) {
    for (Objective o : objectives) {
      SummaryRow s;
      s.label = algo.name() + "(" + objective_code(o) + ")";
      for (const auto& r : rows) {
        if (r.status != "ok" || r.algorithm != algo.name() || r.objective != objective_code(o)) continue;
        s.avg_s_P += r.s_P;
        s.avg_t_P += r.t_P;
        s.avg_c_P += r.c_P;
        ++s.n;
      }
      if (s.n > 0) {
        s.avg_s_P /= s.n;
        s.avg_t_P /= s.n;
        s.avg_c_P /= s.n;
      }
      out.push_back(s);
    }
  }
  return out;
}

double summary_objective(const SummaryRow& row, Objective objective) {
  switch (objective) {
    case Objective::TotalIdleDistance: return row.avg_s_P;
    case Objective::Makespan: return row.avg_t_P;
    case Objective::TotalFuel: return row.avg_c_P;
  }
  return row.avg_s_P;
}

std::string to_csv(std::span<const BenchRow> rows, std::span<const SummaryRow> summary) {
  std::ostringstream os;
  os << "case_id,algorithm,objective,s_P_m,t_P_s,c_P_L,wall_time_s,seed,status\n";
  for (const auto& r : rows) {
    os << r.case_id << ',' << r.algorithm << ',' << r.objective << ',' << num(r.s_P) << ',' << num(r.t_P)
       << ',' << num(r.c_P) << ',' << num(r.wall_time_s) << ',' << r.seed << ',' << r.status << '\n';
  }
  if (!summary.empty()) {
    os << "\nlabel,avg_s_P_m,avg_t_P_s,avg_c_P_L,n\n";
    for (const auto& s : summary)
      os << s.label << ',' << num(s.avg_s_P) << ',' << num(s.avg_t_P) << ',' << num(s.avg_c_P) << ','
         << s.n << '\n';
  }
  return os.str();
}

std::vector<BenchRow> verify_sample(std::span<const BenchRow> rows, std::span<const SuiteCase> cases,
                                    const SuiteOptions& opts, double fraction, std::uint64_t sample_seed) {
  std::vector<BenchRow> bad;
  if (rows.empty()) return bad;
  const auto want = std::max<std::size_t>(1, static_cast<std::size_t>(fraction * static_cast<double>(rows.size()) + 0.5));
  std::vector<std::size_t> idx(rows.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  Rng rng(sample_seed);
  for (std::size_t i = 0; i < std::min(want, idx.size()); ++i)
    std::swap(idx[i], idx[i + rng.below(static_cast<std::uint64_t>(idx.size() - i))]);
  idx.resize(std::min(want, idx.size()));
  std::sort(idx.begin(), idx.end());

  for (std::size_t i : idx) {
    const BenchRow& r = rows[i];
    const auto it = std::find_if(cases.begin(), cases.end(),
                                 [&](const SuiteCase& c) { return c.case_id == r.case_id; });
    if (it == cases.end()) {
      bad.push_back(r);
      continue;
    }
    const BenchRow again = run_cell(*it, objective_from_code(r.objective), Algorithm::from_name(r.algorithm), opts);
    if (again.s_P != r.s_P || again.t_P != r.t_P || again.c_P != r.c_P || again.seed != r.seed ||
        again.status != r.status)
      bad.push_back(r);
  }
  return bad;
}

io::Manifest make_manifest(std::uint64_t suite_seed, int n_cases, std::span<const int> field_counts,
                           std::span<const int> machine_counts, const instgen::GenParams& base) {
  if (n_cases < 0) throw DataError("case count must be non-negative");
  if (field_counts.empty() || machine_counts.empty()) throw DataError("empty field or machine list");
  io::Manifest m;
  m.suite_seed = suite_seed;
  const std::size_t combos = field_counts.size() * machine_counts.size();
  for (int i = 0; i < n_cases; ++i) {
    const std::size_t combo = static_cast<std::size_t>(i) % combos;
    io::ManifestCase c;
    char id[32];
    std::snprintf(id, sizeof id, "case-%04d", i);
    c.case_id = id;
    c.seed = split_seed(suite_seed, static_cast<std::uint64_t>(i));
    c.params = base;
    c.params.n_fields = field_counts[combo / machine_counts.size()];
    c.params.n_machines = machine_counts[combo % machine_counts.size()];
    c.params.seed = c.seed;
    c.path = c.case_id + ".json";
    instgen::validate_params(c.params);
    m.cases.push_back(std::move(c));
  }
  return m;
}

std::vector<SuiteCase> generate_cases(const io::Manifest& manifest) {
  std::vector<SuiteCase> out(manifest.cases.size());
  const auto n = static_cast<std::int64_t>(out.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(effective_threads(SuiteOptions{}))
  for (std::int64_t k = 0; k < n; ++k) {
    const auto& mc = manifest.cases[static_cast<std::size_t>(k)];
    SuiteCase& sc = out[static_cast<std::size_t>(k)];
    sc.case_id = mc.case_id;
    sc.seed = mc.seed;
    try {
      sc.instance = instgen::generate(mc.params);
    } catch (const std::exception& e) {
      sc.load_error = e.what();
    }
  }
  return out;
}

}  // namespace edvrp::suite
