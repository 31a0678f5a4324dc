#include "railsched/exact.hpp"

#include <chrono>
#include <limits>

#include "precedence_graph.hpp"
#include "railsched/error.hpp"

namespace railsched {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::timeout: return "timeout";
  }
  return "?";
}

namespace {

using Clock = std::chrono::steady_clock;
constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

class BranchAndBound {
 public:
  BranchAndBound(const DecisionModel& model, double budget_s)
      : model_(model), graph_(model), objective_(scale_objective(model)), budget_(budget_s) {}

  ExactResult run() {
    ExactResult result;
    std::vector<int> times;
    std::vector<int> assignment(graph_.num_groups(), detail::PrecedenceGraph::kUndecided);
    if (graph_.initial(times)) search(times, assignment);
    result.nodes = nodes_;
    result.wall_time = seconds_since(start_);
    if (best_value_ != kInf) {
      Solution s;
      s.times = best_times_;
      s.binaries = graph_.binaries_of(best_assignment_);
      s.objective = evaluate_objective(model_, s.times);
      s.meta.solver = "exact";
      s.meta.wall_time = result.wall_time;
      result.solution = std::move(s);
    }
    if (timed_out_) {
      result.status = SolveStatus::timeout;
    } else {
      result.status = result.solution ? SolveStatus::optimal : SolveStatus::infeasible;
    }
    return result;
  }

 private:
  struct Child {
    bool feasible = false;
    std::int64_t bound = kInf;
    std::vector<int> times;
  };

  void search(std::vector<int>& times, std::vector<int>& assignment) {
    if (timed_out_) return;
    if ((++nodes_ & 63) == 0 && seconds_since(start_) > budget_) {
      timed_out_ = true;
      return;
    }
    const std::int64_t bound = objective_.value(times);
    if (bound >= best_value_) return;

    std::vector<int> violated;
    for (int g = 0; g < graph_.num_groups(); ++g) {
      if (assignment[g] != detail::PrecedenceGraph::kUndecided) continue;
      if (!graph_.satisfied(g, 1, times) && !graph_.satisfied(g, 0, times)) violated.push_back(g);
    }
    if (violated.empty()) {
      // The earliest times already respect one side of every open disjunction.
      best_value_ = bound;
      best_times_ = times;
      best_assignment_ = assignment;
      for (int g = 0; g < graph_.num_groups(); ++g) {
        if (best_assignment_[g] == detail::PrecedenceGraph::kUndecided) {
          best_assignment_[g] = graph_.satisfied(g, 1, times) ? 1 : 0;
        }
      }
      return;
    }

    // Strong branching over the violated groups: largest bound gap wins.
    int chosen = -1;
    std::int64_t chosen_score = -1;
    Child chosen_children[2];
    for (int g : violated) {
      Child c[2];
      for (int v = 0; v < 2; ++v) {
        c[v].times = times;
        c[v].feasible = graph_.assign(c[v].times, assignment, g, v);
        if (c[v].feasible) c[v].bound = objective_.value(c[v].times);
      }
      assignment[g] = detail::PrecedenceGraph::kUndecided;
      if (!c[0].feasible && !c[1].feasible) return;  // this node is dead
      const std::int64_t score =
          (c[0].feasible && c[1].feasible) ? std::abs(c[0].bound - c[1].bound) : kInf;
      if (score > chosen_score) {
        chosen = g;
        chosen_score = score;
        chosen_children[0] = std::move(c[0]);
        chosen_children[1] = std::move(c[1]);
        if (score == kInf) break;
      }
    }

    const int first = chosen_children[0].bound < chosen_children[1].bound ? 0 : 1;
    for (int v : {first, 1 - first}) {
      Child& c = chosen_children[v];
      if (!c.feasible || c.bound >= best_value_) continue;
      assignment[chosen] = v;
      search(c.times, assignment);
      assignment[chosen] = detail::PrecedenceGraph::kUndecided;
      if (timed_out_) return;
    }
  }

  const DecisionModel& model_;
  detail::PrecedenceGraph graph_;
  ScaledObjective objective_;
  double budget_;
  Clock::time_point start_ = Clock::now();
  std::int64_t nodes_ = 0;
  bool timed_out_ = false;
  std::int64_t best_value_ = kInf;
  std::vector<int> best_times_;
  std::vector<int> best_assignment_;
};

}  // namespace

ExactResult solve_exact(const DecisionModel& model, double budget_s) {
  if (!(budget_s > 0)) throw UsageError("budget must be positive");
  return BranchAndBound(model, budget_s).run();
}

ExactResult brute_force(const DecisionModel& model, int max_binaries) {
  const int nb = model.num_binaries();
  if (nb > max_binaries) {
    throw UsageError("brute force limited to " + std::to_string(max_binaries) + " binaries, model has " +
                     std::to_string(nb));
  }
  const auto start = Clock::now();
  ExactResult result;
  const int n = model.num_time_vars();
  std::vector<int> binaries(nb);
  std::vector<int> times(n);
  std::optional<Rational> best;

  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << nb); ++mask) {
    ++result.nodes;
    for (int b = 0; b < nb; ++b) binaries[b] = static_cast<int>((mask >> b) & 1);

    // Plain Bellman-Ford over the rows switched on by this assignment.
    for (int v = 0; v < n; ++v) times[v] = model.time_vars[v].lo;
    bool overflow = false;
    for (int round = 0; round <= n && !overflow; ++round) {
      bool changed = false;
      for (const auto& c : model.constraints) {
        if (!c.binary_terms.empty()) continue;
        if (c.deactivator && c.deactivator->value(binaries[c.deactivator->var]) != 0) continue;
        if (c.terms.size() == 1) {
          if (times[c.terms[0].var] < c.rhs) {
            times[c.terms[0].var] = static_cast<int>(c.rhs);
            changed = true;
          }
        } else {
          const int later = c.terms[0].var, earlier = c.terms[1].var;
          const std::int64_t need = times[earlier] + c.rhs;
          if (times[later] < need) {
            times[later] = static_cast<int>(need);
            changed = true;
          }
        }
      }
      for (int v = 0; v < n; ++v) overflow = overflow || times[v] > model.time_vars[v].hi;
      if (!changed) break;
    }
    if (overflow || !violated_records(model, times, binaries).empty()) continue;
    const Rational value = evaluate_objective(model, times);
    if (!best || value < *best) {
      best = value;
      Solution s;
      s.times = times;
      s.binaries = binaries;
      s.objective = value;
      s.meta.solver = "brute-force";
      result.solution = std::move(s);
    }
  }
  result.wall_time = seconds_since(start);
  if (result.solution) result.solution->meta.wall_time = result.wall_time;
  result.status = result.solution ? SolveStatus::optimal : SolveStatus::infeasible;
  return result;
}

}  // namespace railsched
