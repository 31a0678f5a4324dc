#ifndef RAILSCHED_EXACT_HPP
#define RAILSCHED_EXACT_HPP

#include <cstdint>
#include <optional>

#include "railsched/model.hpp"

namespace railsched {

enum class SolveStatus { optimal, infeasible, timeout };

const char* to_string(SolveStatus status);

struct ExactResult {
  SolveStatus status = SolveStatus::infeasible;
  std::optional<Solution> solution;  ///< optimum, or best incumbent on timeout
  std::int64_t nodes = 0;
  double wall_time = 0.0;
};

/// Depth-first branch and bound over precedence groups with longest-path
/// propagation. Deterministic for a given model. Throws UsageError if budget_s <= 0.
ExactResult solve_exact(const DecisionModel& model, double budget_s = 60.0);

/// Enumerates every binary assignment; test oracle for models with at most
/// `max_binaries` binaries (UsageError beyond).
ExactResult brute_force(const DecisionModel& model, int max_binaries = 20);

}  // namespace railsched

#endif  // RAILSCHED_EXACT_HPP
