#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.hpp"
#include "railsched/error.hpp"
#include "railsched/exact.hpp"
#include "railsched/solution_io.hpp"

using namespace railsched;

TEST(SolutionFile, GoldenAndRoundTrip) {
  const DecisionModel m = build_model(fixtures::two_trains());
  Solution sol = *solve_exact(m).solution;
  sol.meta = {};
  std::ostringstream out;
  write_solution(out, m, sol);
  EXPECT_EQ(out.str(), fixtures::read_text("golden/two_trains.sol"));
  std::istringstream in(out.str());
  const Solution back = read_solution(in, m);
  EXPECT_EQ(back.times, sol.times);
  EXPECT_EQ(back.binaries, sol.binaries);
  EXPECT_EQ(back.objective, Rational(3, 40));
}

TEST(SolutionFile, InfersPrecedencesWhenAbsent) {
  const DecisionModel m = build_model(fixtures::two_trains());
  std::istringstream in("# objective 0\nIC1 A 14\nIC1 B 20\nR1 A 11\nR1 B 17\n");
  const Solution sol = read_solution(in, m);
  EXPECT_EQ(sol.objective, Rational(3, 40));  // recomputed, header ignored
  EXPECT_TRUE(violated_records(m, sol.times, sol.binaries).empty());
}

TEST(SolutionFile, Errors) {
  const DecisionModel m = build_model(fixtures::two_trains());
  std::istringstream missing("IC1 A 14\nIC1 B 20\nR1 A 11\n");
  EXPECT_THROW(read_solution(missing, m), SchemaError);
  std::istringstream unknown("IC9 A 14\n");
  EXPECT_THROW(read_solution(unknown, m), ReferenceError);
  std::istringstream terminal("IC1 C 14\n");
  EXPECT_THROW(read_solution(terminal, m), ReferenceError);
  std::istringstream dup("IC1 A 14\nIC1 A 15\n");
  EXPECT_THROW(read_solution(dup, m), SchemaError);
  std::istringstream junk("IC1 A soon\n");
  EXPECT_THROW(read_solution(junk, m), SchemaError);
}

TEST(SampleJson, RoundTripsFeasibleRealizations) {
  const DecisionModel m = build_model(fixtures::two_trains());
  AnnealParams p;
  p.budget_s = 0.2;
  p.realizations = 2;
  p.hold = false;
  const SolutionSample s = solve_anneal(m, p);
  const std::string doc = sample_to_json(m, s, p);
  EXPECT_NE(doc.find("\"schema_version\": 1"), std::string::npos);
  const auto sols = sample_from_json(doc, m);
  ASSERT_EQ(sols.size(), 2u);
  for (std::size_t i = 0; i < sols.size(); ++i) {
    EXPECT_EQ(sols[i].times, s.realizations[i].solution->times);
    EXPECT_EQ(sols[i].objective, s.realizations[i].solution->objective);
  }
  EXPECT_THROW(sample_from_json("{}", m), SchemaError);
  EXPECT_THROW(sample_from_json("nope", m), SchemaError);
}
