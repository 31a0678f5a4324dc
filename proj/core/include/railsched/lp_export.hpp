#ifndef RAILSCHED_LP_EXPORT_HPP
#define RAILSCHED_LP_EXPORT_HPP

#include <ostream>
#include <string>

#include "railsched/model.hpp"

namespace railsched {

/// Writes the model in LP format. The objective constant is not part of the
/// objective row; it is recorded in a `\ constant:` comment line.
void write_lp(std::ostream& out, const DecisionModel& model);
std::string export_lp(const DecisionModel& model);

}  // namespace railsched

#endif  // RAILSCHED_LP_EXPORT_HPP
