#ifndef RAILSCHED_SOLUTION_IO_HPP
#define RAILSCHED_SOLUTION_IO_HPP

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "railsched/anneal.hpp"
#include "railsched/model.hpp"

namespace railsched {

/// `# objective <rational>` header, then one `train station minutes` line per
/// departure. Precedences follow as `# binary <name> <0|1>` comments.
void write_solution(std::ostream& out, const DecisionModel& model, const Solution& solution);

/// The objective is recomputed from the times; a missing precedence is taken
/// from the realized order. Throws SchemaError / ReferenceError.
Solution read_solution(std::istream& in, const DecisionModel& model);
Solution read_solution_file(const std::string& path, const DecisionModel& model);

/// Picks, for every precedence variable, the value consistent with the times.
std::vector<int> infer_binaries(const DecisionModel& model, const std::vector<int>& times);

/// Realizations with departures keyed by train and station.
std::string sample_to_json(const DecisionModel& model, const SolutionSample& sample, const AnnealParams& params);
/// Feasible realizations of a sample document, in order.
std::vector<Solution> sample_from_json(const std::string& document, const DecisionModel& model);

}  // namespace railsched

#endif  // RAILSCHED_SOLUTION_IO_HPP
