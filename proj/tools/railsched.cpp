// railsched: command line front end for the rescheduling model and solvers.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "railsched/anneal.hpp"
#include "railsched/derivation.hpp"
#include "railsched/diagram.hpp"
#include "railsched/error.hpp"
#include "railsched/exact.hpp"
#include "railsched/generate.hpp"
#include "railsched/harness.hpp"
#include "railsched/instance_io.hpp"
#include "railsched/lp_export.hpp"
#include "railsched/model.hpp"
#include "railsched/penalty.hpp"
#include "railsched/solution_io.hpp"

namespace fs = std::filesystem;
using namespace railsched;

namespace {

constexpr int kOk = 0;
constexpr int kDataError = 1;
constexpr int kInfeasible = 2;
constexpr int kTimeout = 3;
constexpr int kUsage = 64;

struct Common {
  std::uint64_t seed = 1;
  int d_max = 40;
  bool d_max_given = false;
  std::string out_dir;
};

Common common;

std::string out_path(const std::string& path) {
  if (path.empty() || path == "-") return path;
  fs::path p(path);
  if (!common.out_dir.empty() && p.is_relative()) p = fs::path(common.out_dir) / p;
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  return p.string();
}

// Runs `emit` against stdout for "-", otherwise against the file.
template <class F>
void write_to(const std::string& path, F&& emit) {
  if (path == "-") {
    emit(std::cout);
    return;
  }
  const std::string target = out_path(path);
  std::ofstream out(target);
  if (!out) throw UsageError("cannot write '" + target + "'");
  emit(out);
  std::cerr << "wrote " << target << '\n';
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Instance load(const std::string& path) {
  Instance inst = load_instance_file(path);
  if (common.d_max_given) inst = inst.with_d_max(common.d_max);
  return inst;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string dmax_str(const DecisionModel& m, const Rational& objective) {
  return to_exact_decimal(objective * m.instance.d_max());
}

// ---------------------------------------------------------------------------

struct GenerateArgs {
  std::string kind = "double";
  int stations = 3;
  int per_cycle = 4;
  int cycle = 60;
  int horizon = 180;
  int max_trains = -1;
  int delays = 0;
  int max_delay = 15;
  bool random = false;
  std::string output = "-";
};

int run_generate(const GenerateArgs& a) {
  Instance inst = [&] {
    if (a.random) return random_network(common.seed);
    LineOptions o;
    o.kind = line_kind_from_string(a.kind);
    o.stations = a.stations;
    o.trains = even_train_pattern(a.per_cycle, a.cycle);
    o.cycle = a.cycle;
    o.horizon = a.horizon;
    o.max_trains = a.max_trains;
    o.seed = common.seed;
    o.d_max = common.d_max;
    return gen_synthetic_line(o);
  }();
  if (a.delays > 0) inst = with_random_delays(inst, common.seed + 1, a.delays, a.max_delay);
  if (common.d_max_given) inst = inst.with_d_max(common.d_max);
  write_to(a.output, [&](std::ostream& out) { out << serialize_instance(inst); });
  return kOk;
}

struct DeriveArgs {
  std::string instance;
  std::string dump_sets;
};

int run_derive(const DeriveArgs& a) {
  const Instance inst = load(a.instance);
  const DerivedTimes derived = earliest_departures(inst);
  const IndexSets sets = build_index_sets(inst, derived);
  std::cout << "train,station,scheduled,earliest,latest\n";
  for (int j = 0; j < inst.num_trains(); ++j) {
    const auto& t = inst.train(j);
    for (int p = 0; p < t.departures; ++p) {
      std::cout << t.id << ',' << inst.station(t.route[p]).id << ',' << t.sigma[p] << ',' << derived.lo(j, p) << ','
                << derived.hi(j, p) << '\n';
    }
  }
  std::size_t track = 0, sw = 0;
  for (const auto& [s, p] : sets.track_pairs) track += p.size();
  for (const auto& [s, p] : sets.switch_out_pairs) sw += p.size();
  for (const auto& [s, p] : sets.switch_out_in_pairs) sw += p.size();
  for (const auto& [s, p] : sets.switch_in_noMP_pairs) sw += p.size();
  for (const auto& [s, p] : sets.switch_in_MP_pairs) sw += p.size();
  std::cerr << "close pairs " << sets.close_pairs.size() << ", headway pairs " << sets.headway_pairs.size()
            << ", single-track pairs " << sets.single_pairs.size() << ", track tuples " << track
            << ", interlocking tuples " << sw << '\n';
  if (!a.dump_sets.empty()) write_to(a.dump_sets, [&](std::ostream& out) { write_index_sets(out, inst, sets); });
  return kOk;
}

struct EstimateArgs {
  int trains = 0;
  int stations = 0;
  std::string alpha = "2/3";
  std::string meet = "1";
  std::string mode = "double";
};

int run_estimate(const EstimateArgs& a) {
  TrackMode mode;
  if (a.mode == "double") {
    mode = TrackMode::double_track;
  } else if (a.mode == "single") {
    mode = TrackMode::single_track;
  } else {
    throw UsageError("--mode must be double or single");
  }
  const SizeEstimate e = estimate_size(a.trains, a.stations, parse_rational(a.alpha), parse_rational(a.meet), mode);
  std::cout << "quantity,exact,value\n";
  std::cout << "t_count," << to_string(e.t_count) << ',' << to_decimal(e.t_count, 2) << '\n';
  std::cout << "precedence_count," << to_string(e.precedence_count) << ',' << to_decimal(e.precedence_count, 2) << '\n';
  std::cout << "constraint_count," << to_string(e.constraint_count) << ',' << to_decimal(e.constraint_count, 2) << '\n';
  return kOk;
}

struct BuildArgs {
  std::string instance;
  std::string lp;
  std::string penalty;
  std::string weight;
};

int run_build(const BuildArgs& a) {
  const DecisionModel m = build_model(load(a.instance));
  // keep stdout clean when a model file is streamed there
  std::ostream& table = a.lp == "-" || a.penalty == "-" ? std::cerr : std::cout;
  table << "family,records\n";
  for (const auto& [f, n] : m.family_counts()) table << to_string(f) << ',' << n << '\n';
  std::cerr << m.num_time_vars() << " time variables, " << m.num_binaries() << " binaries, " << m.constraints.size()
            << " constraints\n";
  if (!a.lp.empty()) write_to(a.lp, [&](std::ostream& out) { write_lp(out, m); });
  if (!a.penalty.empty()) {
    const Rational bound = penalty_lower_bound(m);
    const Rational w = a.weight.empty() ? bound + 1 : parse_rational(a.weight);
    const PenaltyForm form = to_penalty_form(m, w);
    std::cerr << "penalty weight " << to_string(w) << " (bound " << to_string(bound) << "), " << form.bits.size()
              << " bits\n";
    write_to(a.penalty, [&](std::ostream& out) { write_qubo(out, form); });
  }
  return kOk;
}

struct ExactArgs {
  std::string instance;
  double budget = 60.0;
  std::string solution;
};

int run_solve_exact(const ExactArgs& a) {
  const DecisionModel m = build_model(load(a.instance));
  const ExactResult r = solve_exact(m, a.budget);
  std::cerr << "status " << to_string(r.status) << ", " << r.nodes << " nodes, " << r.wall_time << " s\n";
  if (!r.solution) {
    std::cout << to_string(r.status) << '\n';
    return r.status == SolveStatus::infeasible ? kInfeasible : kTimeout;
  }
  std::cout << to_string(r.status) << " objective " << to_string(r.solution->objective) << " objective_x_dmax "
            << dmax_str(m, r.solution->objective) << '\n';
  if (!a.solution.empty()) write_to(a.solution, [&](std::ostream& out) { write_solution(out, m, *r.solution); });
  return kOk;
}

struct AnnealArgs {
  std::string instance;
  double budget = 5.0;
  int realizations = 5;
  bool on_qubo = false;
  bool no_hold = false;
  double restarts = 1.0;
  std::string sample;
  std::string solution;
};

AnnealParams params_of(const AnnealArgs& a) {
  AnnealParams p;
  p.budget_s = a.budget;
  p.realizations = a.realizations;
  p.seed = common.seed;
  p.on_qubo = a.on_qubo;
  p.hold = !a.no_hold;
  p.restarts_per_second = a.restarts;
  return p;
}

int run_solve_anneal(const AnnealArgs& a) {
  const DecisionModel m = build_model(load(a.instance));
  const AnnealParams p = params_of(a);
  const SolutionSample s = solve_anneal(m, p);
  std::cout << "realization,seed,feasible,objective_x_dmax,wall_time_s,restarts\n";
  for (const auto& r : s.realizations) {
    std::cout << r.index << ',' << r.seed << ',' << (r.solution ? 1 : 0) << ','
              << (r.solution ? dmax_str(m, r.solution->objective) : "") << ',' << r.wall_time << ',' << r.restarts
              << '\n';
  }
  if (!a.sample.empty()) write_to(a.sample, [&](std::ostream& out) { out << sample_to_json(m, s, p); });
  if (s.infeasible_evidence()) {
    std::cerr << "no realization reached a feasible schedule\n";
    return kInfeasible;
  }
  if (!a.solution.empty()) {
    write_to(a.solution, [&](std::ostream& out) { write_solution(out, m, *s.realizations[s.best].solution); });
  }
  return kOk;
}

struct SweepArgs {
  AnnealArgs anneal;
  std::string budgets = "5,10,20,40";
  int reps = 5;
  std::string csv = "-";
};

int run_sweep(const SweepArgs& a) {
  const DecisionModel m = build_model(load(a.anneal.instance));
  std::vector<double> budgets;
  for (const auto& b : split_list(a.budgets)) budgets.push_back(std::stod(b));
  std::sort(budgets.begin(), budgets.end());
  const auto rows = sweep_budget(m, budgets, a.reps, params_of(a.anneal));
  write_to(a.csv, [&](std::ostream& out) {
    out << "# objective values multiplied by d_max; mean over feasible repeats\n";
    out << "budget_s,best,mean,feasible,reps,mean_wall_time_s\n";
    for (const auto& r : rows) {
      out << r.budget << ',' << (r.best ? dmax_str(m, *r.best) : "") << ',' << (r.mean ? dmax_str(m, *r.mean) : "")
          << ',' << r.feasible << ',' << a.reps << ',' << r.mean_wall_time << '\n';
    }
  });
  return kOk;
}

struct CheckArgs {
  std::string instance;
  std::string solution;
};

int run_check(const CheckArgs& a) {
  const Instance inst = load(a.instance);
  const DerivedTimes derived = earliest_departures(inst);
  const IndexSets sets = build_index_sets(inst, derived);
  const DecisionModel m = build_model(inst, derived, sets);
  const Solution sol = read_solution_file(a.solution, m);
  const Verdict v = check_feasibility(inst, derived, sets, schedule_of(m, sol));
  if (v.ok) {
    std::cout << "ok objective " << to_string(sol.objective) << " objective_x_dmax " << dmax_str(m, sol.objective)
              << '\n';
    return kOk;
  }
  std::cout << "family,tuple,lhs,rhs,slack\n";
  for (const auto& x : v.violations) {
    std::cout << x.family << ',' << x.tuple << ',' << x.lhs << ',' << x.rhs << ',' << x.slack << '\n';
  }
  std::cerr << v.violations.size() << " violation(s)\n";
  return kInfeasible;
}

struct StatsArgs {
  std::string instance;
  std::string sample;
  std::vector<std::string> solutions;
  std::string stations;
  std::string csv = "-";
};

int run_stats(const StatsArgs& a) {
  const DecisionModel m = build_model(load(a.instance));
  std::vector<Solution> sols;
  if (!a.sample.empty()) sols = sample_from_json(slurp(a.sample), m);
  for (const auto& f : a.solutions) sols.push_back(read_solution_file(f, m));
  std::vector<int> stations;
  for (const auto& s : split_list(a.stations)) stations.push_back(m.instance.station_index(s));
  const DelayReport r = delay_stats(m, sols, stations);
  write_to(a.csv, [&](std::ostream& out) { write_delay_csv(out, m.instance, r); });
  return kOk;
}

struct DiagramArgs {
  std::string instance;
  std::string solution;
  std::string corridor;
  std::string svg = "diagram.svg";
  std::string csv;
  std::string title;
};

int run_diagram(const DiagramArgs& a) {
  const DecisionModel m = build_model(load(a.instance));
  const Solution sol = read_solution_file(a.solution, m);
  const TimeDistance d = time_distance(m.instance, schedule_of(m, sol), split_list(a.corridor));
  if (!a.csv.empty()) write_to(a.csv, [&](std::ostream& out) { write_time_distance_csv(out, d); });
  if (!a.svg.empty()) write_to(a.svg, [&](std::ostream& out) { write_time_distance_svg(out, d, a.title); });
  return kOk;
}

struct CompareArgs {
  AnnealArgs anneal;
  double exact_budget = 60.0;
  std::string csv = "-";
};

int run_compare(const CompareArgs& a) {
  const DecisionModel m = build_model(load(a.anneal.instance));
  const Comparison c = compare_solvers(m, a.exact_budget, params_of(a.anneal));
  write_to(a.csv, [&](std::ostream& out) { write_comparison_csv(out, fs::path(a.anneal.instance).stem().string(), c); });
  return kOk;
}

struct BatchArgs {
  CompareArgs compare;
  std::vector<std::string> inputs;
  int jobs = 1;
};

int run_batch(const BatchArgs& a) {
  std::vector<std::string> files;
  for (const auto& in : a.inputs) {
    if (fs::is_directory(in)) {
      for (const auto& e : fs::directory_iterator(in)) {
        if (e.path().extension() == ".json") files.push_back(e.path().string());
      }
    } else {
      files.push_back(in);
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw UsageError("no instance files given");
  const int jobs = std::max(1, a.jobs);

  // Each instance is loaded, solved and reported in isolation; a failing
  // instance produces an error row instead of aborting the batch.
  std::vector<std::string> rows(files.size());
  auto work = [&](std::size_t i) {
    std::ostringstream row;
    const std::string name = fs::path(files[i]).stem().string();
    try {
      const DecisionModel m = build_model(load(files[i]));
      const Comparison c = compare_solvers(m, a.compare.exact_budget, params_of(a.compare.anneal));
      write_comparison_csv(row, name, c, false);
    } catch (const std::exception& e) {
      std::string msg = e.what();
      std::replace(msg.begin(), msg.end(), ',', ';');
      row << name << ",error,,,,,,,\n";
      std::cerr << name << ": " << msg << '\n';
    }
    rows[i] = row.str();
  };
  for (std::size_t start = 0; start < files.size(); start += jobs) {
    std::vector<std::future<void>> running;
    for (std::size_t i = start; i < std::min(files.size(), start + jobs); ++i) {
      running.push_back(std::async(std::launch::async, work, i));
    }
    for (auto& f : running) f.get();
  }
  write_to(a.compare.csv, [&](std::ostream& out) {
    write_comparison_csv(out, "", Comparison{}, true);
    for (const auto& r : rows) out << r;
  });
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"railsched: train rescheduling as integer programming, solved exactly or by annealing"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", common.seed, "random seed")->capture_default_str();
  auto* dmax = app.add_option("--dmax", common.d_max, "maximal secondary delay in minutes (default: instance value, 40)");
  dmax->check(CLI::PositiveNumber);
  app.add_option("--out-dir", common.out_dir, "directory for relative output paths");

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "write a synthetic line or random network instance");
  g->add_option("--kind", gen.kind, "double | double_with_closure | single")->capture_default_str();
  g->add_option("--stations", gen.stations)->capture_default_str();
  g->add_option("--trains-per-cycle", gen.per_cycle)->capture_default_str();
  g->add_option("--cycle", gen.cycle)->capture_default_str();
  g->add_option("--horizon", gen.horizon)->capture_default_str();
  g->add_option("--max-trains", gen.max_trains);
  g->add_option("--delays", gen.delays, "number of random initial delays")->capture_default_str();
  g->add_option("--max-delay", gen.max_delay)->capture_default_str();
  g->add_flag("--random", gen.random, "small random network instead of a line");
  g->add_option("-o,--output", gen.output, "instance file, - for stdout")->capture_default_str();

  DeriveArgs der;
  auto* d = app.add_subcommand("derive", "print earliest departures and windows");
  d->add_option("instance", der.instance)->required();
  d->add_option("--dump-sets", der.dump_sets, "write the index sets as tab-separated text");

  EstimateArgs est;
  auto* e = app.add_subcommand("estimate", "closed-form model size");
  e->add_option("--trains", est.trains)->required();
  e->add_option("--stations", est.stations)->required();
  e->add_option("--alpha", est.alpha, "share of stations visited per train")->capture_default_str();
  e->add_option("--meet", est.meet, "trains met per station")->capture_default_str();
  e->add_option("--mode", est.mode, "double | single")->capture_default_str();

  BuildArgs bld;
  auto* b = app.add_subcommand("build", "build the model; export LP and penalty form");
  b->add_option("instance", bld.instance)->required();
  b->add_option("--lp", bld.lp, "LP file");
  b->add_option("--penalty", bld.penalty, "QUBO file");
  b->add_option("--weight", bld.weight, "penalty weight (default: lower bound + 1)");

  ExactArgs ex;
  auto* x = app.add_subcommand("solve-exact", "branch and bound");
  x->add_option("instance", ex.instance)->required();
  x->add_option("--budget", ex.budget, "seconds")->capture_default_str();
  x->add_option("--solution", ex.solution, "solution file");

  auto add_anneal = [](CLI::App* cmd, AnnealArgs& an) {
    cmd->add_option("instance", an.instance)->required();
    cmd->add_option("--budget", an.budget, "seconds per realization")->capture_default_str();
    cmd->add_option("--realizations", an.realizations)->capture_default_str();
    cmd->add_flag("--on-qubo", an.on_qubo, "anneal the penalty form bit by bit");
    cmd->add_flag("--no-hold", an.no_hold, "return as soon as the work quota is done");
    cmd->add_option("--restarts-per-second", an.restarts, "annealing runs per budget second")->capture_default_str();
  };

  AnnealArgs an;
  auto* a = app.add_subcommand("solve-anneal", "simulated annealing");
  add_anneal(a, an);
  a->add_option("--sample", an.sample, "sample JSON");
  a->add_option("--solution", an.solution, "best realization as a solution file");

  SweepArgs sw;
  auto* s = app.add_subcommand("sweep", "annealer objective against time budget");
  add_anneal(s, sw.anneal);
  s->add_option("--budgets", sw.budgets, "comma separated seconds")->capture_default_str();
  s->add_option("--reps", sw.reps)->capture_default_str();
  s->add_option("--csv", sw.csv)->capture_default_str();

  CheckArgs chk;
  auto* c = app.add_subcommand("check", "verify a solution file against the instance");
  c->add_option("instance", chk.instance)->required();
  c->add_option("solution", chk.solution)->required();

  StatsArgs st;
  auto* t = app.add_subcommand("stats", "secondary delay statistics");
  t->add_option("instance", st.instance)->required();
  t->add_option("solutions", st.solutions, "solution files");
  t->add_option("--sample", st.sample, "sample JSON from solve-anneal");
  t->add_option("--stations", st.stations, "comma separated station ids (default all)");
  t->add_option("--csv", st.csv)->capture_default_str();

  DiagramArgs dg;
  auto* dd = app.add_subcommand("diagram", "time-distance diagram");
  dd->add_option("instance", dg.instance)->required();
  dd->add_option("solution", dg.solution)->required();
  dd->add_option("--corridor", dg.corridor, "comma separated station ids")->required();
  dd->add_option("--svg", dg.svg)->capture_default_str();
  dd->add_option("--csv", dg.csv, "tabular polylines");
  dd->add_option("--title", dg.title);

  CompareArgs cmp;
  auto* cm = app.add_subcommand("compare", "exact against annealing");
  add_anneal(cm, cmp.anneal);
  cm->add_option("--exact-budget", cmp.exact_budget)->capture_default_str();
  cm->add_option("--csv", cmp.csv)->capture_default_str();

  BatchArgs bat;
  auto* bt = app.add_subcommand("batch", "compare over many instances");
  bt->add_option("inputs", bat.inputs, "instance files or directories")->required();
  bt->add_option("--budget", bat.compare.anneal.budget)->capture_default_str();
  bt->add_option("--realizations", bat.compare.anneal.realizations)->capture_default_str();
  bt->add_flag("--on-qubo", bat.compare.anneal.on_qubo);
  bt->add_flag("--no-hold", bat.compare.anneal.no_hold);
  bt->add_option("--restarts-per-second", bat.compare.anneal.restarts)->capture_default_str();
  bt->add_option("--exact-budget", bat.compare.exact_budget)->capture_default_str();
  bt->add_option("--jobs", bat.jobs, "instances solved concurrently")->capture_default_str();
  bt->add_option("--csv", bat.compare.csv)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int rc = app.exit(err);
    return rc == 0 ? kOk : kUsage;
  }
  common.d_max_given = dmax->count() > 0;

  try {
    if (*g) return run_generate(gen);
    if (*d) return run_derive(der);
    if (*e) return run_estimate(est);
    if (*b) return run_build(bld);
    if (*x) return run_solve_exact(ex);
    if (*a) return run_solve_anneal(an);
    if (*s) return run_sweep(sw);
    if (*c) return run_check(chk);
    if (*t) return run_stats(st);
    if (*dd) return run_diagram(dg);
    if (*cm) return run_compare(cmp);
    if (*bt) return run_batch(bat);
  } catch (const UsageError& err) {
    std::cerr << "usage error: " << err.what() << '\n';
    return kUsage;
  } catch (const InfeasibleGeneration& err) {
    std::cerr << "generation failed: " << err.what() << '\n';
    return kInfeasible;
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kDataError;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kDataError;
  }
  return kUsage;
}
