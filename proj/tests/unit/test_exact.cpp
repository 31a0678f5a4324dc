#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "railsched/error.hpp"
#include "railsched/exact.hpp"
#include "railsched/generate.hpp"

using namespace railsched;

TEST(Exact, HandSolvedFixture) {
  const DecisionModel m = build_model(fixtures::two_trains());
  const ExactResult r = solve_exact(m);
  ASSERT_EQ(r.status, SolveStatus::optimal);
  ASSERT_TRUE(r.solution);
  EXPECT_EQ(r.solution->objective, Rational(3, 40));
  EXPECT_EQ(departure_of(m, *r.solution, 0, 0), 14);  // IC1 waits for R1 + headway
  EXPECT_EQ(departure_of(m, *r.solution, 1, 0), 11);
  EXPECT_TRUE(violated_records(m, r.solution->times, r.solution->binaries).empty());
}

TEST(Exact, TightDelayBoundIsInfeasible) {
  // Either order needs at least 2 minutes of extra delay.
  const DecisionModel m = build_model(fixtures::two_trains().with_d_max(1));
  EXPECT_EQ(solve_exact(m).status, SolveStatus::infeasible);
  EXPECT_EQ(brute_force(m).status, SolveStatus::infeasible);
  // two minutes are enough for the cheaper order
  EXPECT_EQ(solve_exact(build_model(fixtures::two_trains().with_d_max(2))).solution->objective, Rational(3, 2));
}

TEST(Exact, AgreesWithEnumeration) {
  int feasible = 0, infeasible = 0;
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const DecisionModel m = build_model(random_network(seed));
    if (m.num_binaries() > 16) continue;
    const ExactResult bb = solve_exact(m, 30.0);
    const ExactResult bf = brute_force(m);
    ASSERT_NE(bb.status, SolveStatus::timeout);
    ASSERT_EQ(bb.solution.has_value(), bf.solution.has_value()) << "seed " << seed;
    if (!bb.solution) {
      ++infeasible;
      continue;
    }
    ++feasible;
    EXPECT_EQ(bb.solution->objective, bf.solution->objective) << "seed " << seed;
    EXPECT_TRUE(violated_records(m, bb.solution->times, bb.solution->binaries).empty()) << "seed " << seed;
  }
  EXPECT_GT(feasible, 100);
  EXPECT_GT(infeasible, 0);
}

TEST(Exact, UndisturbedLinesCostNothing) {
  for (LineKind kind : {LineKind::double_track, LineKind::single_track}) {
    LineOptions o;
    o.kind = kind;
    o.stations = 4;
    o.trains = even_train_pattern(4, 60);
    o.horizon = 120;
    const ExactResult r = solve_exact(build_model(gen_synthetic_line(o)));
    ASSERT_EQ(r.status, SolveStatus::optimal);
    EXPECT_EQ(r.solution->objective.numerator(), 0) << to_string(kind);
  }
}

TEST(Exact, DeterministicForAModel) {
  const DecisionModel m = build_model(load_instance_file(fixtures::data_path("calibration/cal_04.json")));
  const ExactResult a = solve_exact(m), b = solve_exact(m);
  ASSERT_TRUE(a.solution && b.solution);
  EXPECT_EQ(a.solution->times, b.solution->times);
  EXPECT_EQ(a.nodes, b.nodes);
}

TEST(Exact, TimeoutKeepsTheIncumbent) {
  const DecisionModel m = build_model(fixtures::load("sweep_closure.json"));
  const ExactResult r = solve_exact(m, 1e-4);
  EXPECT_EQ(r.status, SolveStatus::timeout);
  if (r.solution) EXPECT_TRUE(violated_records(m, r.solution->times, r.solution->binaries).empty());
}

TEST(Exact, RejectsBadArguments) {
  const DecisionModel m = build_model(fixtures::two_trains());
  EXPECT_THROW(solve_exact(m, 0.0), UsageError);
  EXPECT_THROW(brute_force(build_model(fixtures::load("sweep_closure.json"))), UsageError);
}
