#ifndef RAILSCHED_MODEL_HPP
#define RAILSCHED_MODEL_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "railsched/derivation.hpp"
#include "railsched/instance.hpp"
#include "railsched/rational.hpp"

namespace railsched {

enum class Family {
  running,
  headway,
  single,
  dwell,
  timetable,
  track,
  switch_out,
  switch_out_in,
  switch_in_noMP,
  switch_in_MP,
  turn,
  order_link,
};

std::string_view to_string(Family family);
inline constexpr int kFamilyCount = 12;

/// Departure time of a train at one of its departure positions.
struct TimeVar {
  int train = 0;
  int pos = 0;
  int station = 0;
  int lo = 0;
  int hi = 0;
  std::string name;
};

enum class BinaryKind { y_out, y_in, z };

/// One independent precedence variable; value 1 means `first` goes before `second`.
/// The reverse orientation is the complement. For z, `first` departs `station`
/// and `second` departs `other_station` towards the shared resource.
struct BinaryVar {
  BinaryKind kind = BinaryKind::y_out;
  int first = 0;
  int second = 0;
  int station = 0;
  int other_station = -1;
  std::string name;
};

/// x or 1 - x.
struct Literal {
  int var = -1;
  bool negated = false;
  int value(int x) const { return negated ? 1 - x : x; }
};

struct LinearTerm {
  int var = 0;
  std::int64_t coeff = 0;
};

enum class Relation { ge, eq };

/// sum(terms) + sum(binary_terms) (>= | =) rhs - big_m * deactivator.
/// A disjunctive record is active exactly when its deactivator literal is 0.
struct ConstraintRecord {
  Family family = Family::running;
  std::vector<LinearTerm> terms;         ///< over time variables
  std::vector<LinearTerm> binary_terms;  ///< over binary variables (order links)
  Relation relation = Relation::ge;
  std::int64_t rhs = 0;
  std::optional<std::int64_t> big_m;
  std::optional<Literal> deactivator;
  std::string note;  ///< human-readable tuple, e.g. "IC1 R2 A->B"
};

struct DecisionModel {
  Instance instance;
  DerivedTimes derived;
  std::vector<TimeVar> time_vars;
  std::vector<std::vector<int>> time_var_of;  ///< [train][pos] -> time var
  std::vector<BinaryVar> binary_vars;
  std::vector<ConstraintRecord> constraints;
  std::vector<std::pair<int, Rational>> objective;  ///< time var, coefficient
  Rational objective_constant;

  int num_time_vars() const { return static_cast<int>(time_vars.size()); }
  int num_binaries() const { return static_cast<int>(binary_vars.size()); }
  /// Index of an existing binary, or -1.
  int find_binary(BinaryKind kind, int first, int second, int station, int other_station = -1) const;
  std::map<Family, int> family_counts() const;

  std::map<std::tuple<BinaryKind, int, int, int, int>, int> binary_index;
};

DecisionModel build_model(const Instance& instance, const DerivedTimes& derived, const IndexSets& sets);
/// Convenience: derivation and index sets from the instance itself.
DecisionModel build_model(const Instance& instance);

/// Exact objective; `times` is indexed by time variable.
Rational evaluate_objective(const DecisionModel& model, const std::vector<int>& times);

/// Objective with integer coefficients: value = (sum coeff * t + offset) / scale.
struct ScaledObjective {
  std::vector<std::pair<int, std::int64_t>> terms;
  std::int64_t offset = 0;
  std::int64_t scale = 1;

  std::int64_t value(const std::vector<int>& times) const;
  Rational to_rational(std::int64_t scaled) const { return Rational(scaled, scale); }
};

ScaledObjective scale_objective(const DecisionModel& model);

/// Left-hand side minus right-hand side of a record under the given assignment
/// (for equalities the absolute difference is negated). Negative means violated.
std::int64_t slack(const ConstraintRecord& record, const std::vector<int>& times,
                   const std::vector<int>& binaries);

/// Indices of records violated by the assignment, plus out-of-window variables as -1 - var.
std::vector<int> violated_records(const DecisionModel& model, const std::vector<int>& times,
                                  const std::vector<int>& binaries);

/// Assigned departures and precedences.
struct Solution {
  std::vector<int> times;     ///< per time variable
  std::vector<int> binaries;  ///< per binary variable
  Rational objective;
  struct Meta {
    std::string solver;
    std::uint64_t seed = 0;
    double wall_time = 0.0;
  } meta;
};

/// Departure of a train at a route position from a solution, via the model's variable map.
int departure_of(const DecisionModel& model, const Solution& solution, int train, int pos);

}  // namespace railsched

#endif  // RAILSCHED_MODEL_HPP
