#include <doctest.h>

#include <cmath>
#include <sstream>

#include "edvrp/io.hpp"
#include "edvrp/svg.hpp"
#include "fixtures.hpp"

using namespace edvrp;
using fx::g;

TEST_CASE("instance JSON round trip") {
  const Instance inst = fx::farm(50, 3, 3, 20);
  const std::string text = io::instance_to_json(inst);
  const Instance back = io::instance_from_json(text);
  CHECK(validate_instance(back).empty());
  CHECK(back.line_count() == inst.line_count());
  CHECK(back.machine_count() == inst.machine_count());
  REQUIRE(back.tensor.flat().size() == inst.tensor.flat().size());
  const int n = inst.tensor.node_count();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j)
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) CHECK(back.tensor.at(i, j, a, b) == inst.tensor.at(i, j, a, b));
  for (std::size_t k = 0; k < inst.lines.size(); ++k) {
    CHECK(std::abs(back.lines[k].e0.x - inst.lines[k].e0.x) <= 5e-4);
    CHECK(back.lines[k].length_m == inst.lines[k].length_m);
  }
  CHECK(io::instance_to_json(back) == text);
}

TEST_CASE("malformed JSON is a data error") {
  CHECK_THROWS_AS(io::instance_from_json("{"), DataError);
  CHECK_THROWS_AS(io::instance_from_json("{\"depot\": 3}"), DataError);
  CHECK_THROWS_AS(io::manifest_from_json("[]"), DataError);
}

TEST_CASE("solution JSON round trip reproduces the metrics") {
  const Instance inst = io::instance_from_json(io::instance_to_json(fx::farm(51)));
  Rng rng(51);
  for (Objective o : {Objective::TotalIdleDistance, Objective::Makespan, Objective::TotalFuel}) {
    ga::GaConfig cfg;
    cfg.population_size = 20;
    cfg.iterations = 10;
    cfg.objective = o;
    auto trace = ga::run_oga(inst, cfg);
    io::SolutionFile file{trace.final_best, "OGA", 51, trace};
    const auto back = io::solution_from_json(io::solution_to_json(file));
    REQUIRE(back.trace.has_value());
    CHECK(back.trace->best_objective_per_iteration == trace.best_objective_per_iteration);
    CHECK(back.solution.objective == o);
    const Solution re = evaluate_routes(inst, back.solution.routes, o);
    CHECK(re.aggregate.s_P == doctest::Approx(back.solution.aggregate.s_P).epsilon(1e-9));
    CHECK(re.aggregate.t_P == doctest::Approx(back.solution.aggregate.t_P).epsilon(1e-9));
    CHECK(re.aggregate.c_P == doctest::Approx(back.solution.aggregate.c_P).epsilon(1e-9));
  }
}

TEST_CASE("manifest round trip") {
  io::Manifest m;
  m.suite_seed = 42;
  instgen::GenParams p;
  p.n_fields = 6;
  p.seed = 7;
  m.cases.push_back({"case-0000", 7, p, "case-0000.json"});
  const auto back = io::manifest_from_json(io::manifest_to_json(m));
  CHECK(back.suite_seed == 42);
  REQUIRE(back.cases.size() == 1);
  CHECK(back.cases[0].params.n_fields == 6);
  CHECK(back.cases[0].path == "case-0000.json");
  CHECK(io::manifest_to_json(back) == io::manifest_to_json(m));
}

TEST_CASE("route map draws every machine, including idle ones") {
  const Instance inst = fx::farm(52, 2, 3, 8);
  std::vector<Route> routes(3);
  for (const auto& l : inst.lines) routes[l.id % 2].push_back(g(l.id, 0));
  const Solution sol = evaluate_routes(inst, routes, Objective::TotalIdleDistance);
  const std::string svg = svg::render_routes(inst, sol);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("id=\"route-3\"") != std::string::npos);
  CHECK(svg.find(">M3: 0 lines") != std::string::npos);
  // The idle machine's path is a single move-to: zero length.
  const auto at = svg.find("id=\"route-3\"");
  const auto d = svg.find(" d=\"", at);
  const auto end = svg.find('"', d + 4);
  CHECK(svg.substr(d + 4, end - d - 4).find('L') == std::string::npos);
  CHECK(svg.find("stroke-dasharray") != std::string::npos);
}

TEST_CASE("route map rejects a solution for another instance") {
  const Instance inst = fx::farm(53, 2, 3, 8);
  const Solution two_routes{{Route{}, Route{}}, {}, {}, Objective::TotalIdleDistance};
  CHECK_THROWS_AS(svg::render_routes(inst, two_routes), DataError);
  std::vector<Route> missing(3);
  missing[0].push_back(g(1, 0));
  CHECK_THROWS_AS(svg::render_routes(inst, Solution{missing, {}, {}, Objective::TotalIdleDistance}), DataError);
}

TEST_CASE("route map of an instance without geometry uses straight legs") {
  const Instance inst = fx::planar(2, 1);
  const Solution sol = evaluate_routes(inst, {Route{g(1, 0), g(2, 1)}}, Objective::TotalIdleDistance);
  const std::string svg = svg::render_routes(inst, sol);
  const auto at = svg.find("id=\"route-1\"");
  const auto d = svg.find(" d=\"", at);
  const std::string path = svg.substr(d + 4, svg.find('"', d + 4) - d - 4);
  // depot, entrance, exit, entrance, exit, depot
  CHECK(std::count(path.begin(), path.end(), 'L') == 5);
}

TEST_CASE("convergence chart carries the trace values") {
  const std::vector<double> v{10.5, 9.25, 9.25, 7.125000000000001};
  const std::string svg = svg::render_convergence(v, 't');
  const auto at = svg.find("data-values=\"");
  REQUIRE(at != std::string::npos);
  std::istringstream in(svg.substr(at + 13, svg.find('"', at + 13) - at - 13));
  std::vector<double> parsed;
  for (double x; in >> x;) parsed.push_back(x);
  CHECK(parsed == v);
}
