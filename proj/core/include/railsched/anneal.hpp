#ifndef RAILSCHED_ANNEAL_HPP
#define RAILSCHED_ANNEAL_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "railsched/model.hpp"
#include "railsched/rational.hpp"

namespace railsched {

struct AnnealParams {
  double budget_s = 5.0;  ///< minimum wall time of every realization
  int realizations = 5;
  std::uint64_t seed = 0;
  double initial_temperature = 0.0;  ///< 0: calibrated so ~80% of uphill probe moves pass
  double cooling = 0.97;             ///< per plateau
  int steps_per_temperature = 0;     ///< 0: max(20, 2 x state size)
  double final_ratio = 1e-3;         ///< stop once T < final_ratio x T0
  /// Annealing runs per realization per budget second. The work done is a fixed
  /// quota, so results do not depend on machine speed; a larger budget only adds runs.
  double restarts_per_second = 1.0;
  bool hold = true;  ///< idle until budget_s has elapsed
  bool on_qubo = false;
  Rational penalty_weight{0};  ///< QUBO mode; 0 picks the bound plus one
};

struct Realization {
  int index = 0;
  std::uint64_t seed = 0;
  std::optional<Solution> solution;  ///< empty when no feasible state was reached
  double wall_time = 0.0;
  int restarts = 0;
  int discarded = 0;  ///< decoded states rejected by the feasibility check
};

struct SolutionSample {
  std::vector<Realization> realizations;  ///< sorted by index
  int best = -1;                          ///< index into realizations, -1 if none feasible

  bool infeasible_evidence() const { return best < 0; }
  /// Mean objective over feasible realizations.
  std::optional<Rational> mean_objective() const;
  double mean_wall_time() const;
};

/// Throws UsageError on invalid parameters.
SolutionSample solve_anneal(const DecisionModel& model, const AnnealParams& params);

struct SweepRow {
  double budget = 0.0;
  std::optional<Rational> best;
  std::optional<Rational> mean;
  double mean_wall_time = 0.0;
  int feasible = 0;
  std::vector<Realization> raw;
};

/// One row per budget; realization r uses the same seed at every budget.
std::vector<SweepRow> sweep_budget(const DecisionModel& model, const std::vector<double>& budgets, int reps,
                                   const AnnealParams& params);

}  // namespace railsched

#endif  // RAILSCHED_ANNEAL_HPP
