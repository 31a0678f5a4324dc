#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.hpp"
#include "railsched/error.hpp"
#include "railsched/exact.hpp"
#include "railsched/generate.hpp"
#include "railsched/penalty.hpp"
#include "support.hpp"

using namespace railsched;

namespace {

RandomNetworkOptions tiny() {
  RandomNetworkOptions o;
  o.max_trains = 2;
  o.max_stations = 3;
  o.min_d_max = 1;
  o.max_d_max = 3;
  return o;
}

}  // namespace

TEST(Penalty, WeightMustExceedTheBound) {
  const DecisionModel m = build_model(fixtures::two_trains());
  const Rational bound = penalty_lower_bound(m);
  EXPECT_GT(bound, Rational(0));
  EXPECT_THROW(to_penalty_form(m, bound), UsageError);
  EXPECT_NO_THROW(to_penalty_form(m, bound + Rational(1, 100)));
}

TEST(Penalty, FeasibleAssignmentsHaveZeroPenalty) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const DecisionModel m = build_model(random_network(seed));
    const ExactResult r = solve_exact(m, 10.0);
    if (!r.solution) continue;
    const PenaltyForm f = to_penalty_form(m, penalty_lower_bound(m) + 1);
    const auto x = f.encode(m, r.solution->times, r.solution->binaries);
    EXPECT_EQ(f.violation(x), 0) << "seed " << seed;
    EXPECT_EQ(f.energy(x), r.solution->objective) << "seed " << seed;
    const auto [t, b] = f.decode(m, x);
    EXPECT_EQ(t, r.solution->times);
    EXPECT_EQ(b, r.solution->binaries);
  }
}

TEST(Penalty, MinimizersAreTheOptimum) {
  int checked = 0, infeasible = 0;
  for (std::uint64_t seed = 0; seed < 400 && checked < 40; ++seed) {
    const DecisionModel m = build_model(random_network(seed, tiny()));
    const PenaltyForm f = to_penalty_form(m, penalty_lower_bound(m) + 1);
    if (f.num_bits() > 14) continue;
    ++checked;
    const ExactResult brute = brute_force(m);
    const support::PenaltyScan scan = support::scan_penalty(f);
    if (!brute.solution) {
      ++infeasible;
      for (const auto& x : scan.minimizers) EXPECT_GT(f.violation(x), 0) << "seed " << seed;
      continue;
    }
    EXPECT_EQ(Rational(scan.min_energy, scan.scale), brute.solution->objective) << "seed " << seed;
    for (const auto& x : scan.minimizers) {
      EXPECT_EQ(f.violation(x), 0);
      const auto [t, b] = f.decode(m, x);
      EXPECT_TRUE(violated_records(m, t, b).empty()) << "seed " << seed;
      EXPECT_EQ(evaluate_objective(m, t), brute.solution->objective);
    }
  }
  EXPECT_GE(checked, 40);
}

TEST(Penalty, QuboFileHasLegendAndTriples) {
  const DecisionModel m = build_model(fixtures::two_trains().with_d_max(3));
  const PenaltyForm f = to_penalty_form(m, penalty_lower_bound(m) + 1);
  std::ostringstream out;
  write_qubo(out, f);
  std::istringstream in(out.str());
  std::string line;
  int bits = 0, triples = 0;
  bool body = false;
  while (std::getline(in, line)) {
    if (line.rfind("# bit ", 0) == 0) {
      EXPECT_FALSE(body) << "legend after the body";
      ++bits;
    } else if (!line.empty() && line[0] != '#') {
      body = true;
      std::istringstream w(line);
      int i = -1, j = -1;
      std::string c;
      ASSERT_TRUE(w >> i >> j >> c) << line;
      EXPECT_LE(i, j);
      EXPECT_LT(j, f.num_bits());
      EXPECT_NE(parse_rational(c).numerator(), 0);
      ++triples;
    }
  }
  EXPECT_EQ(bits, f.num_bits());
  EXPECT_EQ(triples, static_cast<int>(f.q.size()));
}
