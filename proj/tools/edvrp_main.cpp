// edvrp: generate farms, solve them, run benchmark and ablation suites, query
// the exact oracle and render solutions.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "edvrp/evaluate.hpp"
#include "edvrp/ga.hpp"
#include "edvrp/instgen.hpp"
#include "edvrp/io.hpp"
#include "edvrp/oracle.hpp"
#include "edvrp/suite.hpp"
#include "edvrp/svg.hpp"

namespace fs = std::filesystem;
using namespace edvrp;

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Objective parse_objective(const std::string& s) {
  try {
    return objective_from_string(s);
  } catch (const std::exception&) {
    throw UsageError("unknown objective '" + s + "' (expected s, t or c)");
  }
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<Objective> parse_objectives(const std::string& s) {
  std::vector<Objective> out;
  for (const auto& item : split_list(s)) out.push_back(parse_objective(item));
  if (out.empty()) throw UsageError("no objectives given");
  return out;
}

std::vector<suite::Algorithm> parse_algorithms(const std::string& s) {
  std::vector<suite::Algorithm> out;
  for (const auto& item : split_list(s)) {
    try {
      out.push_back(suite::Algorithm::from_name(item));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (out.empty()) throw UsageError("no algorithms given");
  return out;
}

void print_routes(std::ostream& os, const Solution& sol) {
  for (std::size_t k = 0; k < sol.routes.size(); ++k) {
    os << "  M" << (k + 1) << ":";
    for (const auto& g : sol.routes[k]) os << " " << g.line << "/" << g.entrance.index();
    os << "\n";
  }
}

void print_aggregate(std::ostream& os, const Aggregate& a) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "s_P=%.6f m  t_P=%.6f s  c_P=%.6f L\n", a.s_P, a.t_P, a.c_P);
  os << buf;
}

std::string invalid_summary(const std::vector<Violation>& v) {
  std::string msg = "invalid instance:";
  for (const auto& x : v) msg += " [" + x.field + ": " + x.rule + (x.detail.empty() ? "" : ", " + x.detail) + "]";
  return msg;
}

Instance load_valid_instance(const fs::path& path) {
  Instance inst = io::load_instance(path);
  if (auto v = validate_instance(inst); !v.empty()) throw DataError(invalid_summary(v));
  return inst;
}

// GA hyperparameters shared by solve, bench and ablate.
void add_ga_options(CLI::App* cmd, ga::GaConfig& cfg) {
  cmd->add_option("--population", cfg.population_size, "Population size")->check(CLI::Range(2, 1000000));
  cmd->add_option("--iterations", cfg.iterations, "Generations")->check(CLI::Range(1, 1000000));
  cmd->add_option("--p-crossover", cfg.p_crossover)->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--p-inversion", cfg.p_local_inversion)->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--p-exchange", cfg.p_intergroup_exchange)->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--p-transfer", cfg.p_intergroup_transfer)->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--p-entrance", cfg.p_entrance_inversion)->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--p-sort", cfg.p_intragroup_sort)->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--p-greedy", cfg.p_greedy_path)->check(CLI::Range(0.0, 1.0));
}

std::vector<suite::SuiteCase> load_cases(const fs::path& manifest_path, const io::Manifest& m) {
  std::vector<suite::SuiteCase> cases;
  for (const auto& mc : m.cases) {
    suite::SuiteCase sc;
    sc.case_id = mc.case_id;
    sc.seed = mc.seed;
    try {
      sc.instance = load_valid_instance(manifest_path.parent_path() / mc.path);
    } catch (const std::exception& e) {
      sc.load_error = e.what();
    }
    cases.push_back(std::move(sc));
  }
  return cases;
}

struct SuiteFlags {
  std::string manifest;
  std::string objectives = "s,t,c";
  std::string algos = "rand,OGA";
  std::string out;
  std::int64_t budget_evals = 20000;
  double budget_seconds = 0.0;
  bool wall_time = false;
  bool verify = false;
  int threads = 0;
  ga::GaConfig ga;
};

void add_suite_options(CLI::App* cmd, SuiteFlags& f) {
  cmd->add_option("manifest", f.manifest, "Suite manifest written by generate")->required();
  cmd->add_option("--objectives", f.objectives, "Comma-separated objectives from s,t,c");
  cmd->add_option("--out", f.out, "Output CSV (stdout when omitted)");
  cmd->add_option("--budget-evals", f.budget_evals, "Random-search budget in evaluations")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--budget-seconds", f.budget_seconds,
                  "Random-search wall-clock budget (not reproducible)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_flag("--wall-time", f.wall_time, "Record wall times (otherwise written as 0)");
  cmd->add_flag("--verify", f.verify, "Re-run a 5% sample of rows and check they match");
  cmd->add_option("--threads", f.threads, "Suite threads (default: EDVRP_THREADS or all)")
      ->check(CLI::NonNegativeNumber);
  add_ga_options(cmd, f.ga);
}

int run_suite_command(const SuiteFlags& f, const std::vector<suite::Algorithm>& algos, bool ablation) {
  const auto objectives = parse_objectives(f.objectives);
  const fs::path manifest_path(f.manifest);
  const auto manifest = io::load_manifest(manifest_path);
  const auto cases = load_cases(manifest_path, manifest);

  suite::SuiteOptions opts;
  opts.ga = f.ga;
  ga::validate_config(opts.ga);
  opts.rand_budget = f.budget_seconds > 0.0 ? Budget::wall_clock(f.budget_seconds)
                                            : Budget::evaluation_count(f.budget_evals);
  opts.record_wall_time = f.wall_time;
  opts.threads = f.threads;

  const auto rows = suite::run_suite(cases, objectives, algos, opts);
  const auto summary = suite::summarize(rows, algos, objectives);
  const std::string csv = suite::to_csv(rows, summary);
  if (f.out.empty())
    std::cout << csv;
  else
    io::write_file(f.out, csv);

  int failed = 0;
  for (const auto& r : rows) failed += r.status != "ok";
  std::cerr << rows.size() << " rows, " << failed << " failed\n";

  if (ablation) {
    for (Objective o : objectives) {
      const auto find = [&](const std::string& name) {
        for (const auto& s : summary)
          if (s.label == name + "(" + objective_code(o) + ")") return suite::summary_objective(s, o);
        return 0.0;
      };
      const double oga = find("OGA"), none = find("GA-no-order");
      std::cerr << "ordering " << objective_code(o) << ": OGA " << oga << (oga <= none ? " <= " : " > ")
                << "GA-no-order " << none << "\n";
    }
  }

  if (f.verify) {
    if (f.budget_seconds > 0.0 && algos.end() != std::find(algos.begin(), algos.end(), suite::Algorithm::rand()))
      std::cerr << "warning: wall-clock random-search rows are not reproducible\n";
    const auto bad = suite::verify_sample(rows, cases, opts, 0.05, manifest.suite_seed);
    if (!bad.empty()) {
      for (const auto& r : bad)
        std::cerr << "verify mismatch: " << r.case_id << " " << r.algorithm << "(" << r.objective << ")\n";
      return kInternal;
    }
    std::cerr << "verify: sampled rows reproduced\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entrance-dependent vehicle routing for farm machinery"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Write a suite of random farm instances and a manifest");
  int fields = 0, machines = 0, cases = 150;
  std::uint64_t seed = 1;
  std::string out_dir;
  bool case_study = false;
  instgen::GenParams base;
  gen->add_option("--fields", fields, "Fields per farm (default: cycle through all)")
      ->check(CLI::IsMember({1, 2, 3, 4, 6}));
  gen->add_option("--machines", machines, "Machines per farm (default: cycle through all)")
      ->check(CLI::IsMember({3, 5, 7}));
  gen->add_option("--cases", cases, "Number of instances")->check(CLI::NonNegativeNumber);
  gen->add_option("--seed", seed, "Suite seed");
  gen->add_option("--target-nodes", base.target_nodes, "Lines + depot per farm")->check(CLI::Range(2, 100000));
  gen->add_option("--line-spacing", base.line_spacing_m, "Distance between adjacent lines (m)")
      ->check(CLI::PositiveNumber);
  gen->add_option("--out", out_dir, "Output directory")->required();
  gen->add_flag("--case-study", case_study, "Also write the four-machine case-study farm");

  // solve
  auto* solve = app.add_subcommand("solve", "Solve one instance");
  std::string inst_path, objective = "s", algo = "oga", sol_out;
  bool no_sort = false, no_greedy = false;
  std::uint64_t solve_seed = 1;
  std::int64_t budget_evals = 20000;
  double budget_seconds = 0.0;
  ga::GaConfig solve_cfg;
  solve->add_option("instance", inst_path, "Instance JSON")->required();
  solve->add_option("--objective", objective, "s (idle distance), t (makespan) or c (fuel)");
  solve->add_option("--algo", algo, "oga or rand");
  solve->add_flag("--no-sort", no_sort, "Disable intra-group sorting");
  solve->add_flag("--no-greedy", no_greedy, "Disable the greedy path operator");
  solve->add_option("--seed", solve_seed, "Random seed");
  solve->add_option("--budget-evals", budget_evals, "Random-search budget in evaluations")
      ->check(CLI::PositiveNumber);
  solve->add_option("--budget-seconds", budget_seconds, "Random-search wall-clock budget")
      ->check(CLI::NonNegativeNumber);
  solve->add_option("--out", sol_out, "Solution JSON (stdout when omitted)");
  add_ga_options(solve, solve_cfg);

  // bench / ablate
  auto* bench = app.add_subcommand("bench", "Run algorithms over a suite and write a CSV table");
  SuiteFlags bench_flags;
  add_suite_options(bench, bench_flags);
  bench->add_option("--algos", bench_flags.algos, "Comma-separated: rand, OGA, OGA-greedy, OGA-sort, GA-no-order");

  auto* ablate = app.add_subcommand("ablate", "Run the four GA variants over a suite");
  SuiteFlags ablate_flags;
  add_suite_options(ablate, ablate_flags);

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Exact optimum of a small instance");
  std::string oracle_inst, oracle_obj = "s", oracle_out;
  oracle->add_option("instance", oracle_inst, "Instance JSON")->required();
  oracle->add_option("--objective", oracle_obj, "s, t or c");
  oracle->add_option("--out", oracle_out, "Also write the optimum as solution JSON");

  // plot
  auto* plot = app.add_subcommand("plot", "Render a solution (and its convergence curve) as SVG");
  std::string plot_inst, plot_sol, plot_out, conv_out;
  plot->add_option("instance", plot_inst, "Instance JSON")->required();
  plot->add_option("solution", plot_sol, "Solution JSON")->required();
  plot->add_option("--out", plot_out, "Route map SVG")->required();
  plot->add_option("--convergence-out", conv_out, "Convergence SVG (default: <out>-convergence.svg)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*gen) {
      const std::vector<int> fs_list = fields ? std::vector<int>{fields}
                                              : std::vector<int>(std::begin(suite::kFieldCounts),
                                                                 std::end(suite::kFieldCounts));
      const std::vector<int> ms_list = machines ? std::vector<int>{machines}
                                                : std::vector<int>(std::begin(suite::kMachineCounts),
                                                                   std::end(suite::kMachineCounts));
      const auto manifest = suite::make_manifest(seed, cases, fs_list, ms_list, base);
      const auto generated = suite::generate_cases(manifest);
      const fs::path dir(out_dir);
      for (std::size_t i = 0; i < generated.size(); ++i) {
        if (!generated[i].instance)
          throw DataError(generated[i].case_id + ": " + generated[i].load_error);
        io::write_file(dir / manifest.cases[i].path, io::instance_to_json(*generated[i].instance));
      }
      io::write_file(dir / "manifest.json", io::manifest_to_json(manifest));
      if (case_study) io::write_file(dir / "case_study.json", io::instance_to_json(instgen::case_study_instance()));
      std::cerr << "wrote " << generated.size() << " instances to " << dir.string() << "\n";
      return kOk;
    }

    if (*solve) {
      const Objective obj = parse_objective(objective);
      if (algo != "oga" && algo != "rand") throw UsageError("unknown algorithm '" + algo + "' (expected oga or rand)");
      const Instance inst = load_valid_instance(inst_path);
      io::SolutionFile file;
      file.seed = solve_seed;
      if (algo == "rand") {
        Rng rng(solve_seed);
        const Budget b = budget_seconds > 0.0 ? Budget::wall_clock(budget_seconds) : Budget::evaluation_count(budget_evals);
        file.solution = random_search(inst, obj, b, rng);
        file.algorithm = "rand";
      } else {
        solve_cfg.enable_sort = !no_sort;
        solve_cfg.enable_greedy = !no_greedy;
        solve_cfg.objective = obj;
        solve_cfg.seed = solve_seed;
        auto trace = ga::run_oga(inst, solve_cfg);
        file.solution = trace.final_best;
        file.algorithm = ga::variant_name(solve_cfg.variant());
        file.trace = std::move(trace);
      }
      const std::string json = io::solution_to_json(file);
      if (sol_out.empty())
        std::cout << json;
      else
        io::write_file(sol_out, json);
      std::cerr << file.algorithm << "(" << objective_code(obj) << "): ";
      print_aggregate(std::cerr, file.solution.aggregate);
      return kOk;
    }

    if (*bench) return run_suite_command(bench_flags, parse_algorithms(bench_flags.algos), false);

    if (*ablate) {
      const std::vector<suite::Algorithm> algos = {
          suite::Algorithm::oga(ga::Variant::OGA), suite::Algorithm::oga(ga::Variant::OGAGreedy),
          suite::Algorithm::oga(ga::Variant::OGASort), suite::Algorithm::oga(ga::Variant::GANoOrder)};
      return run_suite_command(ablate_flags, algos, true);
    }

    if (*oracle) {
      const Objective obj = parse_objective(oracle_obj);
      const Instance inst = load_valid_instance(oracle_inst);
      const auto res = exact_solve(inst, obj);
      std::printf("optimum %c = %.9f (%llu candidates)\n", objective_code(obj), res.optimum,
                  static_cast<unsigned long long>(res.candidates));
      print_aggregate(std::cout, res.solution.aggregate);
      print_routes(std::cout, res.solution);
      if (!oracle_out.empty()) {
        io::SolutionFile file{res.solution, "exact", 0, std::nullopt};
        io::write_file(oracle_out, io::solution_to_json(file));
      }
      return kOk;
    }

    if (*plot) {
      const Instance inst = load_valid_instance(plot_inst);
      const auto file = io::solution_from_json(io::read_file(plot_sol));
      io::write_file(plot_out, svg::render_routes(inst, file.solution));
      if (file.trace) {
        fs::path conv = conv_out;
        if (conv.empty()) {
          conv = fs::path(plot_out);
          conv.replace_filename(conv.stem().string() + "-convergence.svg");
        }
        io::write_file(conv, svg::render_convergence(file.trace->best_objective_per_iteration,
                                                     objective_code(file.solution.objective)));
      }
      return kOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}
