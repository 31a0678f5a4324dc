#include "railsched/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

#include "railsched/error.hpp"

namespace railsched {

Schedule schedule_of(const DecisionModel& model, const Solution& solution) {
  if (solution.times.size() != model.time_vars.size()) {
    throw UsageError("solution does not match the model: " + std::to_string(solution.times.size()) +
                     " times for " + std::to_string(model.time_vars.size()) + " variables");
  }
  Schedule schedule(model.time_var_of.size());
  for (std::size_t j = 0; j < model.time_var_of.size(); ++j) {
    for (int v : model.time_var_of[j]) schedule[j].push_back(solution.times[v]);
  }
  return schedule;
}

namespace {

// Ordering decision between two trains. kind 0: leaving a station, 1: entering
// a station, 2: using a single-track resource from two ends. The decision is
// "a before b" with a < b.
using Key = std::tuple<int, int, int, int, int>;

struct Requirement {
  std::string family;
  std::string tuple;
  std::int64_t lhs = 0;
  std::int64_t rhs = 0;
  std::int64_t slack() const { return lhs - rhs; }
};

struct Decision {
  std::vector<Requirement> when[2];  // index 1: a first
};

class Oracle {
 public:
  Oracle(const Instance& instance, const DerivedTimes& derived, const IndexSets& sets, const Schedule& schedule)
      : inst_(instance), derived_(derived), sets_(sets), t_(schedule) {
    if (static_cast<int>(t_.size()) != inst_.num_trains()) throw UsageError("schedule does not cover every train");
    for (int j = 0; j < inst_.num_trains(); ++j) {
      if (static_cast<int>(t_[j].size()) != inst_.train(j).departures) {
        throw UsageError("schedule of train '" + inst_.train(j).id + "' has the wrong number of departures");
      }
    }
  }

  Verdict run() {
    per_train();
    pairwise();
    resolve();
    verdict_.ok = verdict_.violations.empty();
    return std::move(verdict_);
  }

 private:
  const std::string& tn(int j) const { return inst_.train(j).id; }
  const std::string& sn(int s) const { return inst_.station(s).id; }

  std::int64_t dep(int j, int s) const {
    const int p = inst_.train(j).position_of(s);
    return t_[j].at(p);
  }
  std::int64_t arr(int j, int s) const {
    const int p = inst_.train(j).position_of(s);
    return t_[j].at(p - 1) + inst_.train(j).pass[p - 1];
  }

  void require(const std::string& family, const std::string& tuple, std::int64_t lhs, std::int64_t rhs) {
    if (lhs < rhs) verdict_.violations.push_back({family, tuple, lhs, rhs, lhs - rhs});
  }

  void per_train() {
    for (int j = 0; j < inst_.num_trains(); ++j) {
      const auto& train = inst_.train(j);
      const auto& t = t_[j];
      for (int p = 0; p < train.departures; ++p) {
        const std::string at = tn(j) + " " + sn(train.route[p]);
        require("window", at, t[p], derived_.lo(j, p));
        require("window", at, derived_.hi(j, p), t[p]);
        require("timetable", at, t[p], train.sigma[p]);
        if (p > 0) {
          require("running", tn(j) + " " + sn(train.route[p - 1]) + "->" + sn(train.route[p]), t[p],
                  t[p - 1] + train.pass[p - 1]);
          require("dwell", at, t[p], t[p - 1] + train.pass[p - 1] + train.dwell[p]);
        }
      }
    }
    for (const auto& turn : inst_.turns()) {
      require("turn", tn(turn.terminating) + " " + tn(turn.continuing) + " " + sn(turn.station),
              dep(turn.continuing, turn.station), arr(turn.terminating, turn.station) + turn.minutes);
    }
  }

  // later >= earlier + tau when `first` goes first, the mirror otherwise.
  void either(const Key& key, bool a_is_first, const std::string& family, const std::string& tuple,
              std::int64_t later, std::int64_t earlier, std::int64_t tau) {
    decisions_[key].when[a_is_first ? 1 : 0].push_back({family, tuple, later, earlier + tau});
  }

  static Key leave(int a, int b, int s) { return {0, a, b, s, -1}; }
  static Key enter(int a, int b, int s) { return {1, a, b, s, -1}; }
  // a departs sa, b departs sb, towards the same resource.
  static Key share(int a, int sa, int b, int sb) { return a < b ? Key{2, a, b, sa, sb} : Key{2, b, a, sb, sa}; }

  void pairwise() {
    for (const auto& pair : sets_.headway_pairs) {
      const int a = pair.first, b = pair.second;
      for (const auto& leg : sets_.common_station_pairs.at(pair)) {
        const std::string tuple = tn(a) + " " + tn(b) + " " + sn(leg.from) + "->" + sn(leg.to);
        const Key k = leave(a, b, leg.from);
        either(k, true, "headway", tuple, dep(b, leg.from), dep(a, leg.from), inst_.headway(a, b, leg.from, leg.to));
        either(k, false, "headway", tuple, dep(a, leg.from), dep(b, leg.from), inst_.headway(b, a, leg.from, leg.to));
        auto it = sets_.track_pairs.find(leg.to);
        if (it != sets_.track_pairs.end() && it->second.contains(pair)) link(k, leave(a, b, leg.to));
      }
    }
    for (const auto& pair : sets_.single_pairs) {
      const int a = pair.first, b = pair.second;
      for (const auto& leg : sets_.common_single_pairs.at(pair)) {
        // a runs from -> to, b runs to -> from
        const std::string tuple = tn(a) + " " + tn(b) + " " + sn(leg.from) + "-" + sn(leg.to);
        const Key k = share(a, leg.from, b, leg.to);
        const bool a_low = std::get<1>(k) == a;
        either(k, a_low, "single", tuple, dep(b, leg.to), arr(a, leg.to), 0);
        either(k, !a_low, "single", tuple, dep(a, leg.from), arr(b, leg.from), 0);
      }
    }
    for (const auto& [s, pairs] : sets_.track_pairs) {
      for (const auto& [a, b] : pairs) {
        const std::string tuple = tn(a) + " " + tn(b) + " " + sn(s);
        either(leave(a, b, s), true, "track", tuple, arr(b, s), dep(a, s), 0);
        either(leave(a, b, s), false, "track", tuple, arr(a, s), dep(b, s), 0);
      }
    }
    for (const auto& [s, pairs] : sets_.switch_out_pairs) {
      for (const auto& [a, b] : pairs) {
        const std::string tuple = tn(a) + " " + tn(b) + " " + sn(s);
        either(leave(a, b, s), true, "switch_out", tuple, dep(b, s), dep(a, s), inst_.switch_time(a, b, s));
        either(leave(a, b, s), false, "switch_out", tuple, dep(a, s), dep(b, s), inst_.switch_time(b, a, s));
      }
    }
    for (const auto& [key, pairs] : sets_.switch_out_in_pairs) {
      const auto [s, from] = key;
      for (const auto& [leaving, entering] : pairs) {
        const std::string tuple = tn(leaving) + " " + tn(entering) + " " + sn(s) + "<-" + sn(from);
        const Key k = share(leaving, s, entering, from);
        const bool leaving_low = std::get<1>(k) == leaving;
        either(k, leaving_low, "switch_out_in", tuple, arr(entering, s), dep(leaving, s),
               inst_.switch_time(leaving, entering, s));
        either(k, !leaving_low, "switch_out_in", tuple, dep(leaving, s), arr(entering, s),
               inst_.switch_time(entering, leaving, s));
      }
    }
    for (const auto& [key, pairs] : sets_.switch_in_noMP_pairs) {
      const auto [s, from] = key;
      for (const auto& [a, b] : pairs) {
        // Order fixed at the common origin: nobody can pass on the way.
        const std::string tuple = tn(a) + " " + tn(b) + " " + sn(s) + "<-" + sn(from);
        either(leave(a, b, from), true, "switch_in_noMP", tuple, arr(b, s), arr(a, s), inst_.switch_time(a, b, s));
        either(leave(a, b, from), false, "switch_in_noMP", tuple, arr(a, s), arr(b, s), inst_.switch_time(b, a, s));
      }
    }
    for (const auto& [key, pairs] : sets_.switch_in_MP_pairs) {
      const auto [s, from] = key;
      auto track = sets_.track_pairs.find(s);
      for (const auto& pair : pairs) {
        const int a = pair.first, b = pair.second;
        const std::string tuple = tn(a) + " " + tn(b) + " " + sn(s) + "<-" + sn(from);
        either(enter(a, b, s), true, "switch_in_MP", tuple, arr(b, s), arr(a, s), inst_.switch_time(a, b, s));
        either(enter(a, b, s), false, "switch_in_MP", tuple, arr(a, s), arr(b, s), inst_.switch_time(b, a, s));
        if (track != sets_.track_pairs.end() && track->second.contains(pair)) link(enter(a, b, s), leave(a, b, s));
      }
    }
  }

  void link(const Key& x, const Key& y) { links_.emplace_back(x, y); }

  // Every linked decision takes one value; pick the value the realized times
  // support, otherwise report what the nearest orientation breaks.
  void resolve() {
    std::map<Key, int> id;
    std::vector<Key> keys;
    for (const auto& [k, d] : decisions_) {
      id[k] = static_cast<int>(keys.size());
      keys.push_back(k);
    }
    std::vector<int> parent(keys.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const auto& [x, y] : links_) {
      auto ix = id.find(x), iy = id.find(y);
      if (ix == id.end() || iy == id.end()) continue;
      parent[find(ix->second)] = find(iy->second);
    }
    std::map<int, std::vector<int>> groups;
    for (std::size_t i = 0; i < keys.size(); ++i) groups[find(static_cast<int>(i))].push_back(static_cast<int>(i));

    for (const auto& [root, members] : groups) {
      std::int64_t deficit[2] = {0, 0};
      int broken[2] = {0, 0};
      bool each_fine = true;
      for (int m : members) {
        const auto& d = decisions_.at(keys[m]);
        bool fine[2] = {true, true};
        for (int v = 0; v < 2; ++v) {
          for (const auto& r : d.when[v]) {
            if (r.slack() < 0) {
              deficit[v] += r.slack();
              ++broken[v];
              fine[v] = false;
            }
          }
        }
        each_fine = each_fine && (fine[0] || fine[1]);
      }
      if (broken[0] == 0 || broken[1] == 0) continue;
      const int v = std::make_pair(-deficit[1], broken[1]) <= std::make_pair(-deficit[0], broken[0]) ? 1 : 0;
      for (int m : members) {
        for (const auto& r : decisions_.at(keys[m]).when[v]) {
          if (r.slack() < 0) verdict_.violations.push_back({r.family, r.tuple, r.lhs, r.rhs, r.slack()});
        }
      }
      if (each_fine && members.size() > 1) {
        const auto& [kind, a, b, s, s2] = keys[members.front()];
        verdict_.violations.push_back({"order_link", tn(a) + " " + tn(b) + " " + sn(s), 0, 1, -1});
      }
    }
  }

  const Instance& inst_;
  const DerivedTimes& derived_;
  const IndexSets& sets_;
  const Schedule& t_;
  std::map<Key, Decision> decisions_;
  std::vector<std::pair<Key, Key>> links_;
  Verdict verdict_;
};

}  // namespace

Verdict check_feasibility(const Instance& instance, const DerivedTimes& derived, const IndexSets& sets,
                          const Schedule& schedule) {
  return Oracle(instance, derived, sets, schedule).run();
}

DelayReport delay_stats(const DecisionModel& model, const std::vector<Solution>& sample,
                        const std::vector<int>& stations) {
  if (sample.empty()) throw UsageError("no solutions to summarize");
  const auto& inst = model.instance;
  DelayReport report;
  report.solutions = static_cast<int>(sample.size());
  report.stations = stations;
  if (report.stations.empty()) {
    report.stations.resize(inst.num_stations());
    std::iota(report.stations.begin(), report.stations.end(), 0);
  }
  for (int s : report.stations) {
    if (s < 0 || s >= inst.num_stations()) throw UsageError("station index out of range");
  }
  std::vector<double> sum(inst.num_stations(), 0.0);
  std::vector<int> count(inst.num_stations(), 0);
  report.train_final.assign(inst.num_trains(), 0.0);
  for (const auto& sol : sample) {
    const Schedule t = schedule_of(model, sol);
    for (int j = 0; j < inst.num_trains(); ++j) {
      const auto& train = inst.train(j);
      for (int p = 0; p < train.departures; ++p) {
        sum[train.route[p]] += t[j][p] - model.derived.lo(j, p);
        ++count[train.route[p]];
      }
      if (train.departures > 0) {
        const int last = train.departures - 1;
        report.train_final[j] += t[j][last] - model.derived.lo(j, last);
      }
    }
    report.objective_x_dmax += to_double(sol.objective * inst.d_max());
  }
  for (int s : report.stations) {
    report.station_mean.push_back(count[s] ? sum[s] / count[s] : std::numeric_limits<double>::quiet_NaN());
  }
  for (auto& v : report.train_final) v /= report.solutions;
  report.objective_x_dmax /= report.solutions;
  return report;
}

void write_delay_csv(std::ostream& out, const Instance& instance, const DelayReport& report) {
  out << "# secondary delay in minutes over " << report.solutions << " solution(s)\n";
  out << "kind,id,value\n";
  for (std::size_t i = 0; i < report.stations.size(); ++i) {
    out << "station," << instance.station(report.stations[i]).id << ',';
    if (std::isnan(report.station_mean[i])) {
      out << "nan\n";
    } else {
      out << report.station_mean[i] << '\n';
    }
  }
  for (int j = 0; j < instance.num_trains(); ++j) out << "train," << instance.train(j).id << ',' << report.train_final[j] << '\n';
  out << "objective_x_dmax,," << report.objective_x_dmax << '\n';
}

std::optional<double> percent_advantage(double exact, double other) {
  if (exact == 0.0) {
    if (other == 0.0) return 0.0;
    return std::nullopt;
  }
  return (exact - other) / exact * 100.0;
}

Comparison compare_solvers(const DecisionModel& model, double exact_budget, const AnnealParams& anneal) {
  Comparison c;
  const ExactResult exact = solve_exact(model, exact_budget);
  c.exact_status = exact.status;
  c.exact_time = exact.wall_time;
  const Rational d(model.instance.d_max());
  if (exact.solution) c.exact_objective = exact.solution->objective * d;

  const SolutionSample sample = solve_anneal(model, anneal);
  c.anneal_realizations = static_cast<int>(sample.realizations.size());
  for (const auto& r : sample.realizations) c.anneal_feasible += r.solution ? 1 : 0;
  if (auto mean = sample.mean_objective()) c.anneal_objective = *mean * d;
  c.anneal_time = sample.mean_wall_time();

  if (c.exact_objective && c.anneal_objective) {
    c.objective_diff_pct = percent_advantage(to_double(*c.exact_objective), to_double(*c.anneal_objective));
  }
  c.time_diff_pct = percent_advantage(c.exact_time, c.anneal_time);
  return c;
}

void write_comparison_csv(std::ostream& out, const std::string& name, const Comparison& c, bool header) {
  if (header) {
    out << "# objective values are multiplied by d_max; anneal objective is the mean over feasible realizations\n"
        << "# diff_pct = (exact - anneal) / exact x 100: positive favours the annealer, negative favours exact\n"
        << "instance,exact_status,exact_objective,exact_time_s,anneal_objective,anneal_time_s,anneal_feasible,"
           "objective_diff_pct,time_diff_pct\n";
  }
  auto opt_rational = [&](const std::optional<Rational>& v) { return v ? to_exact_decimal(*v) : std::string(); };
  auto opt_double = [&](const std::optional<double>& v) { return v ? std::to_string(*v) : std::string(); };
  out << name << ',' << to_string(c.exact_status) << ',' << opt_rational(c.exact_objective) << ',' << c.exact_time
      << ',' << opt_rational(c.anneal_objective) << ',' << c.anneal_time << ',' << c.anneal_feasible << '/'
      << c.anneal_realizations << ',' << opt_double(c.objective_diff_pct) << ',' << opt_double(c.time_diff_pct)
      << '\n';
}

}  // namespace railsched
