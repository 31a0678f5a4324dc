#ifndef RAILSCHED_PRECEDENCE_GRAPH_HPP
#define RAILSCHED_PRECEDENCE_GRAPH_HPP

#include <array>
#include <cstdint>
#include <deque>
#include <vector>

#include "railsched/model.hpp"

namespace railsched::detail {

/// Difference-constraint view of a DecisionModel. Binaries joined by order links
/// form groups that always share a value; each group switches a set of edges.
class PrecedenceGraph {
 public:
  static constexpr int kUndecided = -1;

  explicit PrecedenceGraph(const DecisionModel& model);

  int num_vars() const { return static_cast<int>(lo_.size()); }
  int num_groups() const { return static_cast<int>(group_edges_.size()); }
  int group_of(int binary) const { return group_of_[binary]; }
  const std::vector<int>& lower() const { return lo_; }
  const std::vector<int>& upper() const { return hi_; }

  /// Earliest times with only the unconditional edges and no group decided.
  /// Returns false if even those cannot be met inside the windows.
  bool initial(std::vector<int>& times) const;

  /// Decides a group and propagates; false when a window overflows.
  bool assign(std::vector<int>& times, std::vector<int>& assignment, int group, int value) const;

  /// Earliest times for a full assignment; false when infeasible.
  bool decode(const std::vector<int>& assignment, std::vector<int>& times) const;

  /// Every edge switched on by (group, value) already holds.
  bool satisfied(int group, int value, const std::vector<int>& times) const;

  std::vector<int> binaries_of(const std::vector<int>& assignment) const;

 private:
  struct Edge {
    int from;
    int to;
    int weight;
    int group;  ///< -1: always active
    int value;
  };

  bool active(const Edge& e, const std::vector<int>& assignment) const {
    return e.group < 0 || assignment[e.group] == e.value;
  }
  bool run(std::vector<int>& times, const std::vector<int>& assignment, std::deque<int>& work,
           std::vector<char>& queued) const;

  std::vector<int> lo_;
  std::vector<int> hi_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> out_;  ///< edges leaving each variable
  std::vector<std::array<std::vector<int>, 2>> group_edges_;
  std::vector<int> group_of_;
};

}  // namespace railsched::detail

#endif  // RAILSCHED_PRECEDENCE_GRAPH_HPP
