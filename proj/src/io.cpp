#include "edvrp/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace edvrp::io {

using nlohmann::json;

namespace {

double round_mm(double v) {
  const double r = std::round(v * 1000.0) / 1000.0;
  return r == 0.0 ? 0.0 : r;  // no negative zero
}

json point_array(Point p) { return json::array({round_mm(p.x), round_mm(p.y)}); }

Point point_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw DataError("point must be [x, y]");
  return Point{j[0].get<double>(), j[1].get<double>()};
}

json range_json(const instgen::Range& r) { return json::array({r.lo, r.hi}); }

instgen::Range range_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw DataError("range must be [lo, hi]");
  return {j[0].get<double>(), j[1].get<double>()};
}

json route_json(const Route& r) {
  json arr = json::array();
  for (const auto& g : r) arr.push_back(json::array({g.line, g.entrance.index()}));
  return arr;
}

Route route_from(const json& j) {
  Route r;
  for (const auto& g : j) {
    if (!g.is_array() || g.size() != 2) throw DataError("route element must be [line, entrance]");
    r.push_back(Gene{g[0].get<int>(), Entrance(g[1].get<int>())});
  }
  return r;
}

json params_json(const instgen::GenParams& p) {
  return json{{"n_fields", p.n_fields},
              {"n_machines", p.n_machines},
              {"target_nodes", p.target_nodes},
              {"line_spacing_m", p.line_spacing_m},
              {"line_length_m", range_json(p.line_length_m)},
              {"vw", range_json(p.vw)},
              {"vv", range_json(p.vv)},
              {"cw", range_json(p.cw)},
              {"cv", range_json(p.cv)},
              {"seed", p.seed}};
}

instgen::GenParams params_from(const json& j) {
  instgen::GenParams p;
  p.n_fields = j.at("n_fields").get<int>();
  p.n_machines = j.at("n_machines").get<int>();
  p.target_nodes = j.at("target_nodes").get<int>();
  p.line_spacing_m = j.at("line_spacing_m").get<double>();
  p.line_length_m = range_from(j.at("line_length_m"));
  p.vw = range_from(j.at("vw"));
  p.vv = range_from(j.at("vv"));
  p.cw = range_from(j.at("cw"));
  p.cv = range_from(j.at("cv"));
  p.seed = j.at("seed").get<std::uint64_t>();
  return p;
}

template <typename F>
auto parse_guarded(const std::string& text, const char* what, F&& f) {
  try {
    return f(json::parse(text));
  } catch (const json::exception& e) {
    throw DataError(std::string("invalid ") + what + " JSON: " + e.what());
  }
}

}  // namespace

std::string instance_to_json(const Instance& inst) {
  json j;
  j["depot"] = {{"x", round_mm(inst.depot.xy.x)}, {"y", round_mm(inst.depot.xy.y)}};
  json fields = json::array();
  for (const auto& f : inst.fields) {
    json poly = json::array();
    for (const auto& p : f.polygon) poly.push_back(point_array(p));
    fields.push_back({{"id", f.id}, {"polygon", poly}});
  }
  j["fields"] = fields;
  json lines = json::array();
  for (const auto& ln : inst.lines) {
    lines.push_back({{"id", ln.id},
                     {"field_id", ln.field_id},
                     {"ordinal", ln.ordinal},
                     {"length_m", ln.length_m},
                     {"e0", point_array(ln.e0)},
                     {"e1", point_array(ln.e1)}});
  }
  j["lines"] = lines;
  json machines = json::array();
  for (const auto& m : inst.machines)
    machines.push_back({{"id", m.id}, {"vw", m.vw}, {"vv", m.vv}, {"cw", m.cw}, {"cv", m.cv}});
  j["machines"] = machines;
  const int n = inst.tensor.node_count();
  json data = json::array();
  for (int i = 0; i < n; ++i)
    for (int jn = 0; jn < n; ++jn)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) data.push_back(i == jn ? 0.0 : inst.tensor.at(i, jn, a, b));
  j["tensor"] = {{"L", inst.tensor.line_count()}, {"data", data}};
  return j.dump(1) + "\n";
}

Instance instance_from_json(const std::string& text) {
  return parse_guarded(text, "instance", [](const json& j) {
    Instance inst;
    inst.depot.xy = Point{j.at("depot").at("x").get<double>(), j.at("depot").at("y").get<double>()};
    for (const auto& f : j.at("fields")) {
      Field field;
      field.id = f.at("id").get<int>();
      for (const auto& p : f.at("polygon")) field.polygon.push_back(point_from(p));
      inst.fields.push_back(std::move(field));
    }
    for (const auto& l : j.at("lines")) {
      WorkingLine ln;
      ln.id = l.at("id").get<int>();
      ln.field_id = l.at("field_id").get<int>();
      ln.ordinal = l.at("ordinal").get<int>();
      ln.length_m = l.at("length_m").get<double>();
      ln.e0 = point_from(l.at("e0"));
      ln.e1 = point_from(l.at("e1"));
      inst.lines.push_back(ln);
    }
    for (const auto& m : j.at("machines")) {
      inst.machines.push_back(Machine{m.at("id").get<int>(), m.at("vw").get<double>(),
                                      m.at("vv").get<double>(), m.at("cw").get<double>(),
                                      m.at("cv").get<double>()});
    }
    const auto& t = j.at("tensor");
    inst.tensor = DistanceTensor(t.at("L").get<int>(), t.at("data").get<std::vector<double>>());
    return inst;
  });
}

std::string solution_to_json(const SolutionFile& file) {
  const auto& sol = file.solution;
  json j;
  j["algorithm"] = file.algorithm;
  j["seed"] = file.seed;
  j["objective"] = std::string(1, objective_code(sol.objective));
  json routes = json::array();
  for (const auto& r : sol.routes) routes.push_back(route_json(r));
  j["routes"] = routes;
  json per = json::array();
  for (const auto& m : sol.per_machine)
    per.push_back({{"s_k", m.s_k}, {"s_k_w", m.s_k_w}, {"t_k", m.t_k}, {"c_k_o", m.c_k_o}});
  j["per_machine"] = per;
  j["aggregate"] = {{"s_P", sol.aggregate.s_P}, {"t_P", sol.aggregate.t_P}, {"c_P", sol.aggregate.c_P}};
  if (file.trace) {
    j["trace"] = {{"best_objective_per_iteration", file.trace->best_objective_per_iteration},
                  {"wall_time_s", file.trace->wall_time_s}};
  }
  return j.dump(1) + "\n";
}

SolutionFile solution_from_json(const std::string& text) {
  return parse_guarded(text, "solution", [](const json& j) {
    SolutionFile file;
    file.algorithm = j.value("algorithm", std::string{});
    file.seed = j.value("seed", std::uint64_t{0});
    auto& sol = file.solution;
    sol.objective = objective_from_string(j.at("objective").get<std::string>());
    for (const auto& r : j.at("routes")) sol.routes.push_back(route_from(r));
    for (const auto& m : j.at("per_machine"))
      sol.per_machine.push_back(MachineMetrics{m.at("s_k").get<double>(), m.at("s_k_w").get<double>(),
                                               m.at("t_k").get<double>(), m.at("c_k_o").get<double>()});
    const auto& a = j.at("aggregate");
    sol.aggregate = Aggregate{a.at("s_P").get<double>(), a.at("t_P").get<double>(),
                              a.at("c_P").get<double>()};
    if (j.contains("trace")) {
      ga::RunTrace tr;
      tr.best_objective_per_iteration =
          j["trace"].at("best_objective_per_iteration").get<std::vector<double>>();
      tr.wall_time_s = j["trace"].value("wall_time_s", 0.0);
      tr.final_best = sol;
      file.trace = std::move(tr);
    }
    return file;
  });
}

std::string manifest_to_json(const Manifest& m) {
  json cases = json::array();
  for (const auto& c : m.cases)
    cases.push_back({{"case_id", c.case_id}, {"seed", c.seed}, {"params", params_json(c.params)},
                     {"path", c.path}});
  json j{{"suite_seed", m.suite_seed}, {"cases", cases}};
  return j.dump(1) + "\n";
}

Manifest manifest_from_json(const std::string& text) {
  return parse_guarded(text, "manifest", [](const json& j) {
    Manifest m;
    m.suite_seed = j.at("suite_seed").get<std::uint64_t>();
    for (const auto& c : j.at("cases")) {
      m.cases.push_back(ManifestCase{c.at("case_id").get<std::string>(), c.at("seed").get<std::uint64_t>(),
                                     params_from(c.at("params")), c.at("path").get<std::string>()});
    }
    return m;
  });
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << contents;
  if (!out) throw DataError("failed writing " + path.string());
}

Instance load_instance(const std::filesystem::path& path) {
  return instance_from_json(read_file(path));
}

Manifest load_manifest(const std::filesystem::path& path) {
  return manifest_from_json(read_file(path));
}

}  // namespace edvrp::io
