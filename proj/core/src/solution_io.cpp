#include "railsched/solution_io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "precedence_graph.hpp"
#include "railsched/error.hpp"

namespace railsched {

void write_solution(std::ostream& out, const DecisionModel& model, const Solution& solution) {
  const auto& inst = model.instance;
  out << "# objective " << to_string(solution.objective) << '\n';
  out << "# objective_x_dmax " << to_exact_decimal(solution.objective * inst.d_max()) << '\n';
  if (!solution.meta.solver.empty()) {
    out << "# solver " << solution.meta.solver << " seed " << solution.meta.seed << " wall_time "
        << solution.meta.wall_time << '\n';
  }
  out << "# train station minutes\n";
  for (const auto& v : model.time_vars) {
    out << inst.train(v.train).id << ' ' << inst.station(v.station).id << ' ' << solution.times[&v - model.time_vars.data()]
        << '\n';
  }
  for (int b = 0; b < model.num_binaries() && b < static_cast<int>(solution.binaries.size()); ++b) {
    out << "# binary " << model.binary_vars[b].name << ' ' << solution.binaries[b] << '\n';
  }
}

std::vector<int> infer_binaries(const DecisionModel& model, const std::vector<int>& times) {
  const detail::PrecedenceGraph graph(model);
  std::vector<int> assignment(graph.num_groups(), 1);
  for (int g = 0; g < graph.num_groups(); ++g) {
    if (!graph.satisfied(g, 1, times) && graph.satisfied(g, 0, times)) assignment[g] = 0;
  }
  return graph.binaries_of(assignment);
}

Solution read_solution(std::istream& in, const DecisionModel& model) {
  const auto& inst = model.instance;
  std::map<std::string, int> binary_by_name;
  for (int b = 0; b < model.num_binaries(); ++b) binary_by_name[model.binary_vars[b].name] = b;

  Solution sol;
  sol.times.assign(model.num_time_vars(), 0);
  std::vector<char> seen(model.num_time_vars(), 0);
  std::vector<int> binaries(model.num_binaries(), -1);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream words(line);
    std::string first;
    if (!(words >> first)) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (first[0] == '#') {
      std::string tag, name;
      int value = 0;
      if (first == "#" && words >> tag && tag == "binary") {
        if (!(words >> name >> value) || (value != 0 && value != 1)) throw SchemaError(where + "malformed binary line");
        auto it = binary_by_name.find(name);
        if (it == binary_by_name.end()) throw ReferenceError(where + "unknown binary '" + name + "'");
        binaries[it->second] = value;
      } else if (first == "#" && tag == "solver") {
        std::string seed_tag, time_tag;
        words >> sol.meta.solver >> seed_tag >> sol.meta.seed >> time_tag >> sol.meta.wall_time;
      }
      continue;
    }
    std::string station;
    long long minutes = 0;
    std::string rest;
    if (!(words >> station >> minutes) || (words >> rest)) throw SchemaError(where + "expected 'train station minutes'");
    const int j = inst.train_index(first);
    const int s = inst.station_index(station);
    const int p = inst.train(j).position_of(s);
    if (p < 0 || !inst.train(j).has_departure(p)) {
      throw ReferenceError(where + "train '" + first + "' does not depart from '" + station + "'");
    }
    const int v = model.time_var_of[j][p];
    if (seen[v]) throw SchemaError(where + "duplicate departure for " + first + " at " + station);
    seen[v] = 1;
    sol.times[v] = static_cast<int>(minutes);
  }
  for (int v = 0; v < model.num_time_vars(); ++v) {
    if (!seen[v]) {
      throw SchemaError("missing departure of " + inst.train(model.time_vars[v].train).id + " at " +
                        inst.station(model.time_vars[v].station).id);
    }
  }
  const std::vector<int> inferred = infer_binaries(model, sol.times);
  for (int b = 0; b < model.num_binaries(); ++b) {
    if (binaries[b] < 0) binaries[b] = inferred[b];
  }
  sol.binaries = std::move(binaries);
  sol.objective = evaluate_objective(model, sol.times);
  return sol;
}

Solution read_solution_file(const std::string& path, const DecisionModel& model) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open solution file '" + path + "'");
  return read_solution(in, model);
}

std::string sample_to_json(const DecisionModel& model, const SolutionSample& sample, const AnnealParams& params) {
  using nlohmann::ordered_json;
  const auto& inst = model.instance;
  ordered_json doc;
  doc["schema_version"] = 1;
  doc["solver"] = params.on_qubo ? "anneal-qubo" : "anneal";
  doc["params"] = {{"budget_s", params.budget_s},
                   {"realizations", params.realizations},
                   {"seed", params.seed},
                   {"cooling", params.cooling},
                   {"final_ratio", params.final_ratio},
                   {"restarts_per_second", params.restarts_per_second}};
  doc["d_max"] = inst.d_max();
  if (sample.best >= 0) {
    doc["best"] = sample.best;
  } else {
    doc["best"] = nullptr;
  }
  if (auto mean = sample.mean_objective()) {
    doc["mean_objective"] = to_string(*mean);
  } else {
    doc["mean_objective"] = nullptr;
  }
  doc["mean_wall_time"] = sample.mean_wall_time();
  ordered_json list = ordered_json::array();
  for (const auto& r : sample.realizations) {
    ordered_json e;
    e["index"] = r.index;
    e["seed"] = r.seed;
    e["feasible"] = r.solution.has_value();
    e["wall_time"] = r.wall_time;
    e["restarts"] = r.restarts;
    e["discarded"] = r.discarded;
    if (r.solution) {
      e["objective"] = to_string(r.solution->objective);
      e["objective_x_dmax"] = to_exact_decimal(r.solution->objective * inst.d_max());
      ordered_json deps = ordered_json::object();
      for (const auto& v : model.time_vars) {
        deps[inst.train(v.train).id][inst.station(v.station).id] = r.solution->times[&v - model.time_vars.data()];
      }
      e["departures"] = std::move(deps);
    }
    list.push_back(std::move(e));
  }
  doc["realizations"] = std::move(list);
  return doc.dump(2) + "\n";
}

std::vector<Solution> sample_from_json(const std::string& document, const DecisionModel& model) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(document);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("sample is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("realizations") || !doc["realizations"].is_array()) {
    throw SchemaError("sample has no realizations array");
  }
  const auto& inst = model.instance;
  std::vector<Solution> out;
  for (const auto& r : doc["realizations"]) {
    if (!r.contains("departures")) continue;
    Solution sol;
    sol.times.assign(model.num_time_vars(), 0);
    try {
      for (const auto& v : model.time_vars) {
        sol.times[&v - model.time_vars.data()] =
            r.at("departures").at(inst.train(v.train).id).at(inst.station(v.station).id).get<int>();
      }
      sol.meta.solver = doc.value("solver", "anneal");
      sol.meta.seed = r.value("seed", std::uint64_t{0});
      sol.meta.wall_time = r.value("wall_time", 0.0);
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError(std::string("malformed realization: ") + e.what());
    }
    sol.binaries = infer_binaries(model, sol.times);
    sol.objective = evaluate_objective(model, sol.times);
    out.push_back(std::move(sol));
  }
  return out;
}

}  // namespace railsched
