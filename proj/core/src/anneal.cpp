#include "railsched/anneal.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <mutex>
#include <thread>

#include "precedence_graph.hpp"
#include "railsched/error.hpp"
#include "railsched/penalty.hpp"

namespace railsched {

std::optional<Rational> SolutionSample::mean_objective() const {
  Rational sum;
  int n = 0;
  for (const auto& r : realizations) {
    if (!r.solution) continue;
    sum += r.solution->objective;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / Rational(n);
}

double SolutionSample::mean_wall_time() const {
  if (realizations.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& r : realizations) sum += r.wall_time;
  return sum / static_cast<double>(realizations.size());
}

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

int restart_quota(const AnnealParams& p) {
  return std::max(1, static_cast<int>(std::floor(p.budget_s * p.restarts_per_second + 1e-9)));
}

/// Generic geometric schedule; `State` supplies size(), energy(), propose(rng) -> optional delta,
/// accept(), reject().
template <class State>
void anneal(State& state, const AnnealParams& p, std::mt19937_64& rng) {
  if (state.size() == 0) return;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double t0 = p.initial_temperature;
  if (t0 <= 0.0) {
    double uphill = 0.0;
    int count = 0;
    for (int i = 0; i < 100; ++i) {
      if (auto d = state.propose(rng); d && *d > 0) {
        uphill += static_cast<double>(*d);
        ++count;
      }
      state.reject();
    }
    t0 = count > 0 ? -(uphill / count) / std::log(0.8) : 1.0;
  }
  const int steps = p.steps_per_temperature > 0 ? p.steps_per_temperature : std::max(20, 2 * state.size());
  for (double t = t0; t > t0 * p.final_ratio; t *= p.cooling) {
    for (int s = 0; s < steps; ++s) {
      const auto d = state.propose(rng);
      if (d && (*d <= 0 || unit(rng) < std::exp(-static_cast<double>(*d) / t))) {
        state.accept();
      } else {
        state.reject();
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Precedence-space search: state = group values, energy = objective of the
// earliest-time schedule.
// ---------------------------------------------------------------------------

class GroupState {
 public:
  GroupState(const detail::PrecedenceGraph& graph, const ScaledObjective& objective)
      : graph_(graph), objective_(objective) {}

  int size() const { return graph_.num_groups(); }

  /// Randomised greedy dive to a feasible assignment.
  bool start(std::mt19937_64& rng) {
    for (int attempt = 0; attempt < 20; ++attempt) {
      if (dive(rng)) {
        energy_ = objective_.value(times_);
        best_energy_ = energy_;
        best_times_ = times_;
        best_assignment_ = assignment_;
        return true;
      }
    }
    return false;
  }

  std::optional<std::int64_t> propose(std::mt19937_64& rng) {
    flipped_ = std::uniform_int_distribution<int>(0, size() - 1)(rng);
    assignment_[flipped_] ^= 1;
    if (!graph_.decode(assignment_, candidate_)) return std::nullopt;
    return objective_.value(candidate_) - energy_;
  }

  void accept() {
    std::swap(times_, candidate_);
    energy_ = objective_.value(times_);
    if (energy_ < best_energy_) {
      best_energy_ = energy_;
      best_times_ = times_;
      best_assignment_ = assignment_;
    }
  }

  void reject() { assignment_[flipped_] ^= 1; }

  std::int64_t best_energy() const { return best_energy_; }
  const std::vector<int>& best_times() const { return best_times_; }
  const std::vector<int>& best_assignment() const { return best_assignment_; }

 private:
  bool dive(std::mt19937_64& rng) {
    if (!graph_.initial(times_)) return false;
    assignment_.assign(size(), detail::PrecedenceGraph::kUndecided);
    std::vector<int> violated;
    std::vector<int> trial;
    for (;;) {
      violated.clear();
      for (int g = 0; g < size(); ++g) {
        if (assignment_[g] == detail::PrecedenceGraph::kUndecided && !graph_.satisfied(g, 0, times_) &&
            !graph_.satisfied(g, 1, times_)) {
          violated.push_back(g);
        }
      }
      if (violated.empty()) break;
      const int g = violated[std::uniform_int_distribution<std::size_t>(0, violated.size() - 1)(rng)];
      const int first = static_cast<int>(rng() & 1);
      bool placed = false;
      for (int v : {first, 1 - first}) {
        trial = times_;
        if (graph_.assign(trial, assignment_, g, v)) {
          times_.swap(trial);
          placed = true;
          break;
        }
      }
      if (!placed) return false;
    }
    for (int g = 0; g < size(); ++g) {
      if (assignment_[g] != detail::PrecedenceGraph::kUndecided) continue;
      const bool ok0 = graph_.satisfied(g, 0, times_);
      const bool ok1 = graph_.satisfied(g, 1, times_);
      assignment_[g] = ok0 && ok1 ? static_cast<int>(rng() & 1) : (ok1 ? 1 : 0);
    }
    return true;
  }

  const detail::PrecedenceGraph& graph_;
  const ScaledObjective& objective_;
  std::vector<int> times_, candidate_, assignment_;
  std::int64_t energy_ = 0;
  int flipped_ = 0;
  std::int64_t best_energy_ = 0;
  std::vector<int> best_times_, best_assignment_;
};

// ---------------------------------------------------------------------------
// Raw-bit search on the penalty form.
// ---------------------------------------------------------------------------

struct IntegerQubo {
  std::vector<std::int64_t> linear;
  std::vector<std::vector<std::pair<int, std::int64_t>>> couplings;
  std::int64_t constant = 0;
  std::int64_t feasible_below = 0;  ///< energies under this carry no penalty
};

IntegerQubo integer_qubo(const DecisionModel& model, const PenaltyForm& form) {
  std::int64_t scale = form.constant.denominator();
  for (const auto& [ij, c] : form.q) scale = std::lcm(scale, c.denominator());
  Rational base = model.objective_constant;
  for (const auto& [var, coeff] : model.objective) base += coeff * model.time_vars[var].lo;
  scale = std::lcm(scale, (base + form.weight).denominator());

  IntegerQubo q;
  q.linear.assign(form.num_bits(), 0);
  q.couplings.resize(form.num_bits());
  for (const auto& [ij, c] : form.q) {
    const std::int64_t v = (c * scale).numerator();
    if (ij.first == ij.second) {
      q.linear[ij.first] += v;
    } else {
      q.couplings[ij.first].emplace_back(ij.second, v);
      q.couplings[ij.second].emplace_back(ij.first, v);
    }
  }
  q.constant = (form.constant * scale).numerator();
  q.feasible_below = ((base + form.weight) * scale).numerator();
  return q;
}

class BitState {
 public:
  explicit BitState(const IntegerQubo& q) : q_(q) {}

  int size() const { return static_cast<int>(q_.linear.size()); }

  void start(std::mt19937_64& rng) {
    x_.resize(size());
    for (auto& b : x_) b = static_cast<std::uint8_t>(rng() & 1);
    energy_ = q_.constant;
    for (int i = 0; i < size(); ++i) {
      if (!x_[i]) continue;
      energy_ += q_.linear[i];
      for (const auto& [j, c] : q_.couplings[i]) {
        if (j > i && x_[j]) energy_ += c;
      }
    }
    note_best();
  }

  std::optional<std::int64_t> propose(std::mt19937_64& rng) {
    flipped_ = std::uniform_int_distribution<int>(0, size() - 1)(rng);
    std::int64_t field = q_.linear[flipped_];
    for (const auto& [j, c] : q_.couplings[flipped_]) field += c * x_[j];
    delta_ = x_[flipped_] ? -field : field;
    return delta_;
  }

  void accept() {
    x_[flipped_] ^= 1;
    energy_ += delta_;
    note_best();
  }

  void reject() {}

  bool has_best() const { return !best_.empty(); }
  std::int64_t best_energy() const { return best_energy_; }
  const std::vector<std::uint8_t>& best() const { return best_; }

 private:
  void note_best() {
    if (energy_ < q_.feasible_below && (best_.empty() || energy_ < best_energy_)) {
      best_energy_ = energy_;
      best_ = x_;
    }
  }

  const IntegerQubo& q_;
  std::vector<std::uint8_t> x_, best_;
  std::int64_t energy_ = 0, delta_ = 0, best_energy_ = 0;
  int flipped_ = 0;
};

Realization run_realization(const DecisionModel& model, const AnnealParams& p, int index,
                            const detail::PrecedenceGraph& graph, const ScaledObjective& objective,
                            const PenaltyForm* form, const IntegerQubo* qubo) {
  const auto start = Clock::now();
  Realization r;
  r.index = index;
  r.seed = p.seed + static_cast<std::uint64_t>(index);
  const int quota = restart_quota(p);

  std::optional<std::pair<std::vector<int>, std::vector<int>>> best;  // times, binaries
  std::optional<Rational> best_value;
  auto offer = [&](std::vector<int> times, std::vector<int> binaries) {
    if (!violated_records(model, times, binaries).empty()) {
      ++r.discarded;
      return;
    }
    const Rational value = evaluate_objective(model, times);
    if (!best_value || value < *best_value) {
      best_value = value;
      best.emplace(std::move(times), std::move(binaries));
    }
  };

  for (int k = 0; k < quota; ++k) {
    std::mt19937_64 rng(splitmix64(splitmix64(r.seed) ^ (0x632be59bd9b4e019ULL * static_cast<std::uint64_t>(k + 1))));
    ++r.restarts;
    if (form) {
      BitState state(*qubo);
      state.start(rng);
      anneal(state, p, rng);
      if (state.has_best()) {
        auto [times, binaries] = form->decode(model, state.best());
        offer(std::move(times), std::move(binaries));
      }
    } else {
      GroupState state(graph, objective);
      if (!state.start(rng)) continue;
      anneal(state, p, rng);
      offer(state.best_times(), graph.binaries_of(state.best_assignment()));
    }
  }

  if (best) {
    Solution s;
    s.times = std::move(best->first);
    s.binaries = std::move(best->second);
    s.objective = *best_value;
    s.meta.solver = p.on_qubo ? "anneal-qubo" : "anneal";
    s.meta.seed = r.seed;
    r.solution = std::move(s);
  }
  if (p.hold) {
    const auto until = start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(p.budget_s));
    std::this_thread::sleep_until(until);
  }
  r.wall_time = std::chrono::duration<double>(Clock::now() - start).count();
  if (r.solution) r.solution->meta.wall_time = r.wall_time;
  return r;
}

}  // namespace

SolutionSample solve_anneal(const DecisionModel& model, const AnnealParams& p) {
  if (!(p.budget_s > 0)) throw UsageError("budget must be positive");
  if (p.realizations < 1) throw UsageError("at least one realization is required");
  if (!(p.cooling > 0 && p.cooling < 1)) throw UsageError("cooling factor must lie in (0, 1)");
  if (!(p.final_ratio > 0 && p.final_ratio < 1)) throw UsageError("final temperature ratio must lie in (0, 1)");
  if (!(p.restarts_per_second > 0)) throw UsageError("restart rate must be positive");

  const detail::PrecedenceGraph graph(model);
  const ScaledObjective objective = scale_objective(model);
  std::optional<PenaltyForm> form;
  std::optional<IntegerQubo> qubo;
  if (p.on_qubo) {
    const Rational weight = p.penalty_weight > 0 ? p.penalty_weight : penalty_lower_bound(model) + 1;
    form = to_penalty_form(model, weight);
    qubo = integer_qubo(model, *form);
  }

  SolutionSample sample;
  sample.realizations.resize(p.realizations);
  std::vector<std::thread> workers;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (int i = 0; i < p.realizations; ++i) {
    workers.emplace_back([&, i] {
      try {
        sample.realizations[i] = run_realization(model, p, i, graph, objective, form ? &*form : nullptr,
                                                 qubo ? &*qubo : nullptr);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  if (failure) std::rethrow_exception(failure);

  for (int i = 0; i < p.realizations; ++i) {
    const auto& r = sample.realizations[i];
    if (!r.solution) continue;
    if (sample.best < 0 || r.solution->objective < sample.realizations[sample.best].solution->objective) {
      sample.best = i;
    }
  }
  return sample;
}

std::vector<SweepRow> sweep_budget(const DecisionModel& model, const std::vector<double>& budgets, int reps,
                                   const AnnealParams& params) {
  if (budgets.empty()) throw UsageError("empty budget list");
  if (!std::is_sorted(budgets.begin(), budgets.end())) throw UsageError("budgets must be sorted ascending");
  std::vector<SweepRow> rows;
  for (double budget : budgets) {
    AnnealParams p = params;
    p.budget_s = budget;
    p.realizations = reps;
    SolutionSample sample = solve_anneal(model, p);
    SweepRow row;
    row.budget = budget;
    row.mean = sample.mean_objective();
    row.mean_wall_time = sample.mean_wall_time();
    if (sample.best >= 0) row.best = sample.realizations[sample.best].solution->objective;
    for (const auto& r : sample.realizations) row.feasible += r.solution ? 1 : 0;
    row.raw = std::move(sample.realizations);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace railsched
