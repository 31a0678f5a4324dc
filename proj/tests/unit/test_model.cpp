#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "railsched/error.hpp"
#include "railsched/generate.hpp"
#include "railsched/model.hpp"

using namespace railsched;

namespace {

// Smallest value of sum(terms) over the variable windows.
std::int64_t box_min(const DecisionModel& m, const ConstraintRecord& r) {
  std::int64_t v = 0;
  for (const auto& t : r.terms) v += t.coeff * (t.coeff > 0 ? m.time_vars[t.var].lo : m.time_vars[t.var].hi);
  return v;
}

}  // namespace

TEST(Model, FixtureShape) {
  const DecisionModel m = build_model(fixtures::two_trains());
  EXPECT_EQ(m.num_time_vars(), 4);
  EXPECT_EQ(m.num_binaries(), 2);
  const auto counts = m.family_counts();
  EXPECT_EQ(counts.at(Family::running), 2);
  EXPECT_EQ(counts.at(Family::dwell), 2);
  EXPECT_EQ(counts.at(Family::timetable), 4);
  EXPECT_EQ(counts.at(Family::headway), 4);
  EXPECT_FALSE(counts.contains(Family::order_link));
  EXPECT_GE(m.find_binary(BinaryKind::y_out, 0, 1, m.instance.station_index("A")), 0);
  EXPECT_EQ(m.find_binary(BinaryKind::y_in, 0, 1, m.instance.station_index("A")), -1);
}

TEST(Model, ObjectiveIsWeightedFinalDelayOverDmax) {
  const DecisionModel m = build_model(fixtures::two_trains());
  EXPECT_EQ(m.objective_constant, Rational(-11, 10));  // -(3/2 * 18 + 17) / 40
  std::vector<int> t(m.num_time_vars());
  for (const auto& v : m.time_vars) t[&v - m.time_vars.data()] = v.lo;
  EXPECT_EQ(evaluate_objective(m, t).numerator(), 0);
  // IC1 reaches B 2 minutes late: 3/2 * 2 / 40
  t[m.time_var_of[0][1]] += 2;
  EXPECT_EQ(evaluate_objective(m, t), Rational(3, 40));
  EXPECT_THROW(evaluate_objective(m, {1, 2}), UsageError);
}

TEST(Model, ShuntingTrainsCarryNoWeight) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const DecisionModel m = build_model(random_network(seed));
    for (const auto& [var, coeff] : m.objective) {
      EXPECT_GT(m.instance.train(m.time_vars[var].train).weight, Rational(0));
      EXPECT_GT(coeff, Rational(0));
    }
  }
}

TEST(Model, ScaledObjectiveAgreesWithRationalOne) {
  std::mt19937_64 rng(5);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const DecisionModel m = build_model(random_network(seed));
    const ScaledObjective s = scale_objective(m);
    std::vector<int> t(m.num_time_vars());
    for (int k = 0; k < 5; ++k) {
      for (int v = 0; v < m.num_time_vars(); ++v) {
        t[v] = std::uniform_int_distribution<int>(m.time_vars[v].lo, m.time_vars[v].hi)(rng);
      }
      EXPECT_EQ(s.to_rational(s.value(t)), evaluate_objective(m, t));
    }
  }
}

TEST(Model, BigMDeactivatesExactlyOverTheWindows) {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const DecisionModel m = build_model(random_network(seed));
    for (const auto& r : m.constraints) {
      if (!r.deactivator) continue;
      ASSERT_TRUE(r.big_m.has_value());
      EXPECT_EQ(*r.big_m, r.rhs - box_min(m, r)) << r.note;
      // a constant <= 0 marks a record the windows already satisfy in full
      if (*r.big_m <= 0) EXPECT_GE(box_min(m, r), r.rhs) << r.note;
      ++checked;
    }
  }
  EXPECT_GT(checked, 200);
}

TEST(Model, EveryPrecedenceSwitchesBothOrientations) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const DecisionModel m = build_model(random_network(seed));
    std::vector<std::set<bool>> seen(m.num_binaries());
    for (const auto& r : m.constraints) {
      if (r.deactivator) seen[r.deactivator->var].insert(r.deactivator->negated);
    }
    for (int b = 0; b < m.num_binaries(); ++b) {
      // order links may be the only record of a binary only if it is linked to a switching one
      if (seen[b].empty()) continue;
      EXPECT_EQ(seen[b].size(), 2u) << m.binary_vars[b].name;
    }
  }
}

TEST(Model, NamesAreUnique) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const DecisionModel m = build_model(random_network(seed));
    std::set<std::string> names;
    for (const auto& v : m.time_vars) EXPECT_TRUE(names.insert(v.name).second) << v.name;
    for (const auto& v : m.binary_vars) EXPECT_TRUE(names.insert(v.name).second) << v.name;
  }
}

TEST(Model, TurnsAreUnconditional) {
  int turns = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const DecisionModel m = build_model(random_network(seed));
    const auto counts = m.family_counts();
    const int expected = static_cast<int>(m.instance.turns().size());
    EXPECT_EQ(counts.contains(Family::turn) ? counts.at(Family::turn) : 0, expected);
    for (const auto& r : m.constraints) {
      if (r.family == Family::turn) EXPECT_FALSE(r.deactivator.has_value());
    }
    turns += expected;
  }
  EXPECT_GT(turns, 0);
}

TEST(Model, ViolationsReportRecordsAndWindows) {
  const DecisionModel m = build_model(fixtures::two_trains());
  std::vector<int> t = {14, 20, 11, 17};  // R1 first at A and B
  std::vector<int> b = {0, 0};
  EXPECT_TRUE(violated_records(m, t, b).empty());
  b = {1, 0};  // claims IC1 first at A
  EXPECT_FALSE(violated_records(m, t, b).empty());
  t[m.time_var_of[1][0]] = 5;  // below its window
  const auto v = violated_records(m, t, {0, 0});
  EXPECT_NE(std::find(v.begin(), v.end(), -1 - m.time_var_of[1][0]), v.end());
  EXPECT_THROW(violated_records(m, {1}, {0, 0}), UsageError);
}

TEST(Model, EmptyInstanceIsRejected) {
  auto data = parse_instance_data(fixtures::read_text("two_trains.json"));
  data.trains.clear();
  data.timetable = {};
  data.stations[1].planned_track.clear();
  data.disturbance = {};
  EXPECT_THROW(build_model(Instance::create(data)), ValidationError);
}
