#ifndef RAILSCHED_HARNESS_HPP
#define RAILSCHED_HARNESS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "railsched/anneal.hpp"
#include "railsched/derivation.hpp"
#include "railsched/exact.hpp"
#include "railsched/instance.hpp"
#include "railsched/model.hpp"

namespace railsched {

/// Departure minutes per train and departure position.
using Schedule = std::vector<std::vector<int>>;

Schedule schedule_of(const DecisionModel& model, const Solution& solution);

struct Violation {
  std::string family;  ///< constraint family, or "window" for the delay bound
  std::string tuple;   ///< trains and stations involved
  std::int64_t lhs = 0;
  std::int64_t rhs = 0;
  std::int64_t slack = 0;  ///< lhs - rhs, negative
};

struct Verdict {
  bool ok = true;
  std::vector<Violation> violations;
};

/// Re-evaluates every requirement from the instance data. Precedences are not
/// taken from any solver: for each ordering decision both orders are tried
/// against the realized times, and linked decisions must agree.
Verdict check_feasibility(const Instance& instance, const DerivedTimes& derived, const IndexSets& sets,
                          const Schedule& schedule);

struct DelayReport {
  std::vector<int> stations;
  std::vector<double> station_mean;  ///< per requested station; NaN when no train departs there
  std::vector<double> train_final;   ///< per train, mean over solutions
  double objective_x_dmax = 0.0;     ///< mean over solutions
  int solutions = 0;
};

/// Secondary delay (departure minus earliest departure) statistics. Empty
/// `stations` means all stations. Throws UsageError on an empty sample.
DelayReport delay_stats(const DecisionModel& model, const std::vector<Solution>& sample,
                        const std::vector<int>& stations = {});
void write_delay_csv(std::ostream& out, const Instance& instance, const DelayReport& report);

struct Comparison {
  SolveStatus exact_status = SolveStatus::infeasible;
  std::optional<Rational> exact_objective;  ///< objective x d_max
  double exact_time = 0.0;
  std::optional<Rational> anneal_objective;  ///< mean objective x d_max
  double anneal_time = 0.0;
  int anneal_feasible = 0;
  int anneal_realizations = 0;
  std::optional<double> objective_diff_pct;
  std::optional<double> time_diff_pct;
};

/// (exact - x) / exact x 100 so that positive values favour the annealer;
/// 0 when both are zero, empty when only exact is zero.
std::optional<double> percent_advantage(double exact, double other);

Comparison compare_solvers(const DecisionModel& model, double exact_budget, const AnnealParams& anneal);
void write_comparison_csv(std::ostream& out, const std::string& name, const Comparison& c, bool header = true);

}  // namespace railsched

#endif  // RAILSCHED_HARNESS_HPP
