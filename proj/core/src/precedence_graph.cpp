#include "precedence_graph.hpp"

#include <numeric>

#include "railsched/error.hpp"

namespace railsched::detail {

namespace {

int find(std::vector<int>& parent, int x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

}  // namespace

PrecedenceGraph::PrecedenceGraph(const DecisionModel& model) {
  const int n = model.num_time_vars();
  lo_.resize(n);
  hi_.resize(n);
  for (int v = 0; v < n; ++v) {
    lo_[v] = model.time_vars[v].lo;
    hi_[v] = model.time_vars[v].hi;
  }

  std::vector<int> parent(model.num_binaries());
  std::iota(parent.begin(), parent.end(), 0);
  for (const auto& c : model.constraints) {
    if (c.binary_terms.empty()) continue;
    if (c.relation != Relation::eq || c.rhs != 0 || c.binary_terms.size() != 2 ||
        c.binary_terms[0].coeff != -c.binary_terms[1].coeff || !c.terms.empty()) {
      throw InternalError("unsupported binary row in family " + std::string(to_string(c.family)));
    }
    const int a = find(parent, c.binary_terms[0].var);
    const int b = find(parent, c.binary_terms[1].var);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  group_of_.assign(model.num_binaries(), -1);
  std::vector<int> root_group(model.num_binaries(), -1);
  for (int b = 0; b < model.num_binaries(); ++b) {
    const int r = find(parent, b);
    if (root_group[r] < 0) {
      root_group[r] = static_cast<int>(group_edges_.size());
      group_edges_.emplace_back();
    }
    group_of_[b] = root_group[r];
  }

  out_.resize(n);
  for (const auto& c : model.constraints) {
    if (!c.binary_terms.empty()) continue;
    if (c.relation != Relation::ge) throw InternalError("equality over time variables is not supported");
    if (c.terms.size() == 1 && c.terms[0].coeff == 1 && !c.deactivator) {
      lo_[c.terms[0].var] = std::max<std::int64_t>(lo_[c.terms[0].var], c.rhs);
      continue;
    }
    if (c.terms.size() != 2 || c.terms[0].coeff != 1 || c.terms[1].coeff != -1) {
      throw InternalError("row is not a difference constraint in family " + std::string(to_string(c.family)));
    }
    Edge e{c.terms[1].var, c.terms[0].var, static_cast<int>(c.rhs), -1, 0};
    const int id = static_cast<int>(edges_.size());
    if (c.deactivator) {
      // Active while the deactivating literal is 0.
      e.group = group_of_[c.deactivator->var];
      e.value = c.deactivator->negated ? 1 : 0;
      group_edges_[e.group][e.value].push_back(id);
    }
    edges_.push_back(e);
    out_[e.from].push_back(id);
  }
}

bool PrecedenceGraph::run(std::vector<int>& times, const std::vector<int>& assignment, std::deque<int>& work,
                          std::vector<char>& queued) const {
  while (!work.empty()) {
    const int u = work.front();
    work.pop_front();
    queued[u] = 0;
    for (int id : out_[u]) {
      const Edge& e = edges_[id];
      if (!active(e, assignment)) continue;
      const int t = times[u] + e.weight;
      if (t <= times[e.to]) continue;
      if (t > hi_[e.to]) return false;
      times[e.to] = t;
      if (!queued[e.to]) {
        queued[e.to] = 1;
        work.push_back(e.to);
      }
    }
  }
  return true;
}

bool PrecedenceGraph::initial(std::vector<int>& times) const {
  std::vector<int> none(num_groups(), kUndecided);
  return decode(none, times);
}

bool PrecedenceGraph::decode(const std::vector<int>& assignment, std::vector<int>& times) const {
  times = lo_;
  for (int v = 0; v < num_vars(); ++v) {
    if (times[v] > hi_[v]) return false;
  }
  std::deque<int> work;
  std::vector<char> queued(num_vars(), 1);
  for (int v = 0; v < num_vars(); ++v) work.push_back(v);
  return run(times, assignment, work, queued);
}

bool PrecedenceGraph::assign(std::vector<int>& times, std::vector<int>& assignment, int group, int value) const {
  assignment[group] = value;
  std::deque<int> work;
  std::vector<char> queued(num_vars(), 0);
  for (int id : group_edges_[group][value]) {
    const int from = edges_[id].from;
    if (!queued[from]) {
      queued[from] = 1;
      work.push_back(from);
    }
  }
  return run(times, assignment, work, queued);
}

bool PrecedenceGraph::satisfied(int group, int value, const std::vector<int>& times) const {
  for (int id : group_edges_[group][value]) {
    const Edge& e = edges_[id];
    if (times[e.to] < times[e.from] + e.weight) return false;
  }
  return true;
}

std::vector<int> PrecedenceGraph::binaries_of(const std::vector<int>& assignment) const {
  std::vector<int> b(group_of_.size());
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = assignment[group_of_[i]];
  return b;
}

}  // namespace railsched::detail
