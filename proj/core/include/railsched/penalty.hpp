#ifndef RAILSCHED_PENALTY_HPP
#define RAILSCHED_PENALTY_HPP

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "railsched/model.hpp"
#include "railsched/rational.hpp"

namespace railsched {

enum class BitRole { time, binary, slack };

struct BitInfo {
  BitRole role = BitRole::time;
  int owner = 0;          ///< time var, binary var, or penalised row
  int power = 0;          ///< bit significance within its owner
  std::string name;
};

/// Residual of one penalised row over bits: sum(coeff * bit) + constant. Inequalities
/// carry their slack bits with negative coefficients, so every row must reach exactly 0.
struct PenaltyRow {
  std::vector<std::pair<int, std::int64_t>> terms;
  std::int64_t constant = 0;
  int slack_first = -1;
  int slack_bits = 0;
  int record = -1;  ///< model constraint, or -1 for a window upper bound
  std::string label;
};

/// Quadratic pseudo-boolean objective: E(x) = constant + sum_{i<=j} Q_ij x_i x_j.
/// Diagonal entries are the linear part.
struct PenaltyForm {
  std::vector<BitInfo> bits;
  std::vector<std::pair<int, int>> time_bits;  ///< per time var: first bit, bit count
  std::vector<int> binary_bit;                 ///< per binary var
  std::vector<PenaltyRow> rows;                ///< penalised rows, slack already attached
  std::map<std::pair<int, int>, Rational> q;
  Rational constant;
  Rational weight;
  Rational p_min;

  int num_bits() const { return static_cast<int>(bits.size()); }
  Rational energy(const std::vector<std::uint8_t>& x) const;
  /// Sum of squared row residuals (0 iff every row holds exactly).
  std::int64_t violation(const std::vector<std::uint8_t>& x) const;
  /// Times and binaries encoded by the assignment (times may leave their window).
  std::pair<std::vector<int>, std::vector<int>> decode(const DecisionModel& model,
                                                       const std::vector<std::uint8_t>& x) const;
  /// Bits encoding a model assignment, with slacks set to make every satisfied row exact.
  std::vector<std::uint8_t> encode(const DecisionModel& model, const std::vector<int>& times,
                                   const std::vector<int>& binaries) const;
};

/// Largest objective gap between a feasible point and any point of the encoded box.
Rational penalty_lower_bound(const DecisionModel& model);

/// Throws UsageError when `weight` <= penalty_lower_bound(model).
PenaltyForm to_penalty_form(const DecisionModel& model, const Rational& weight);

/// `i j coeff` triples after a `#` legend header.
void write_qubo(std::ostream& out, const PenaltyForm& form);

}  // namespace railsched

#endif  // RAILSCHED_PENALTY_HPP
