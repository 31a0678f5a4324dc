#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "railsched/error.hpp"
#include "railsched/exact.hpp"
#include "railsched/generate.hpp"
#include "railsched/harness.hpp"
#include "support.hpp"

using namespace railsched;

namespace {

struct Prepared {
  Instance inst;
  DerivedTimes derived;
  IndexSets sets;
  DecisionModel model;

  explicit Prepared(Instance i)
      : inst(std::move(i)),
        derived(earliest_departures(inst)),
        sets(build_index_sets(inst, derived)),
        model(build_model(inst, derived, sets)) {}

  Verdict check(const Schedule& s) const { return check_feasibility(inst, derived, sets, s); }
};

bool names(const Verdict& v, const std::string& family) {
  for (const auto& x : v.violations) {
    if (x.family == family) return true;
  }
  return false;
}

Solution from_schedule(const DecisionModel& m, const Schedule& s) {
  Solution sol;
  sol.times.assign(m.num_time_vars(), 0);
  for (std::size_t j = 0; j < s.size(); ++j) {
    for (std::size_t p = 0; p < s[j].size(); ++p) sol.times[m.time_var_of[j][p]] = s[j][p];
  }
  sol.objective = evaluate_objective(m, sol.times);
  return sol;
}

}  // namespace

TEST(Oracle, AcceptsExactSolutions) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Prepared p(random_network(seed));
    const ExactResult r = solve_exact(p.model);
    if (!r.solution) continue;
    const Verdict v = p.check(schedule_of(p.model, *r.solution));
    EXPECT_TRUE(v.ok) << "seed " << seed << ": " << (v.violations.empty() ? "" : v.violations[0].family);
  }
}

TEST(Oracle, AgreesWithTheModelOnPerturbedSchedules) {
  std::mt19937_64 rng(17);
  int ok = 0, bad = 0;
  for (std::uint64_t seed = 0; seed < 120; ++seed) {
    const Prepared p(random_network(seed));
    const ExactResult r = solve_exact(p.model);
    if (!r.solution) continue;
    for (int k = 0; k < 25; ++k) {
      std::vector<int> t = r.solution->times;
      for (int& x : t) {
        if (rng() % 3 == 0) x += static_cast<int>(rng() % 5) - 2;
      }
      const bool oracle = p.check(schedule_of(p.model, Solution{t, {}, {}, {}})).ok;
      EXPECT_EQ(oracle, support::model_feasible(p.model, t)) << "seed " << seed << " draw " << k;
      (oracle ? ok : bad) += 1;
    }
  }
  EXPECT_GT(ok, 100);
  EXPECT_GT(bad, 100);
}

TEST(Oracle, BindingHeadwayMovedEarlier) {
  const Prepared p(fixtures::two_trains());
  Schedule s = {{14, 20}, {11, 17}};  // optimal: R1 first, IC1 exactly one headway behind
  ASSERT_TRUE(p.check(s).ok);
  s[0][0] = 13;
  const Verdict v = p.check(s);
  ASSERT_FALSE(v.ok);
  ASSERT_EQ(v.violations.size(), 1u);
  EXPECT_EQ(v.violations[0].family, "headway");
  EXPECT_EQ(v.violations[0].slack, -1);
  EXPECT_EQ(v.violations[0].tuple, "IC1 R1 A->B");
}

TEST(Oracle, DepartureBeforeTimetable) {
  const Prepared p(fixtures::two_trains());
  const Verdict v = p.check({{14, 20}, {10, 17}});
  EXPECT_TRUE(names(v, "timetable"));
  EXPECT_TRUE(names(v, "window"));
}

TEST(Oracle, RunningAndDwell) {
  const Prepared p(fixtures::two_trains());
  const Verdict v = p.check({{14, 19}, {11, 17}});  // IC1 dwells 0 at B
  EXPECT_TRUE(names(v, "dwell"));
  EXPECT_FALSE(names(v, "running"));
  EXPECT_TRUE(names(p.check({{14, 18}, {11, 17}}), "running"));
}

TEST(Oracle, MissingDepartures) {
  const Prepared p(fixtures::two_trains());
  EXPECT_THROW(p.check({{14, 20}}), UsageError);
  EXPECT_THROW(p.check({{14}, {11, 17}}), UsageError);
}

TEST(DelayStats, EarliestSchedulesHaveNoDelay) {
  const DecisionModel m = build_model(fixtures::two_trains());
  const Solution ups = from_schedule(m, m.derived.upsilon);
  const DelayReport r = delay_stats(m, {ups, ups});
  for (double v : r.station_mean) {
    if (!std::isnan(v)) EXPECT_EQ(v, 0.0);
  }
  EXPECT_TRUE(std::isnan(r.station_mean[m.instance.station_index("C")]));  // nobody departs C
  EXPECT_EQ(r.objective_x_dmax, 0.0);
}

TEST(DelayStats, MeanOverTrainsAtAStation) {
  LineOptions o;
  o.stations = 3;
  o.trains = even_train_pattern(5, 60);
  o.horizon = 60;
  const DecisionModel m = build_model(gen_synthetic_line(o));
  const int mid = m.instance.station_index("S1");
  Schedule s = m.derived.upsilon;
  int at_mid = 0;
  for (int j = 0; j < m.instance.num_trains(); ++j) at_mid += m.instance.train(j).position_of(mid) >= 0;
  ASSERT_EQ(at_mid, 5);
  s[2][m.instance.train(2).position_of(mid)] += 8;
  const DelayReport r = delay_stats(m, {from_schedule(m, s)}, {mid});
  EXPECT_DOUBLE_EQ(r.station_mean[0], 1.6);
}

TEST(DelayStats, AveragesRealizationsInAnyOrder) {
  const DecisionModel m = build_model(fixtures::two_trains());
  const Solution a = from_schedule(m, {{14, 20}, {11, 17}});
  const Solution b = from_schedule(m, {{12, 18}, {15, 21}});
  const DelayReport ab = delay_stats(m, {a, b});
  const DelayReport ba = delay_stats(m, {b, a});
  const int sa = m.instance.station_index("A");
  EXPECT_DOUBLE_EQ(ab.station_mean[sa], (2 + 0 + 0 + 4) / 4.0);
  ASSERT_EQ(ab.station_mean.size(), ba.station_mean.size());
  for (std::size_t k = 0; k < ab.station_mean.size(); ++k) {
    if (std::isnan(ab.station_mean[k])) EXPECT_TRUE(std::isnan(ba.station_mean[k]));
    else EXPECT_DOUBLE_EQ(ab.station_mean[k], ba.station_mean[k]);
  }
  EXPECT_EQ(ab.train_final, ba.train_final);
  EXPECT_DOUBLE_EQ(ab.train_final[0], 1.0);
  EXPECT_DOUBLE_EQ(ab.objective_x_dmax, (3.0 + 4.0) / 2);
  EXPECT_DOUBLE_EQ(ab.objective_x_dmax, to_double((a.objective + b.objective) / 2 * 40));
}

TEST(DelayStats, ShuntingCountsAtStationsButNotInTheObjective) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const DecisionModel m = build_model(random_network(seed));
    for (int j = 0; j < m.instance.num_trains(); ++j) {
      const auto& t = m.instance.train(j);
      if (t.cls != TrainClass::shunting || t.departures == 0) continue;
      Schedule s = m.derived.upsilon;
      for (int& x : s[j]) x += 1;
      const DelayReport r = delay_stats(m, {from_schedule(m, s)});
      EXPECT_GT(r.station_mean[t.route[0]], 0.0);
      EXPECT_EQ(r.objective_x_dmax, 0.0);
      return;
    }
  }
  FAIL() << "no shunting train in the random suite";
}

TEST(DelayStats, RejectsBadInput) {
  const DecisionModel m = build_model(fixtures::two_trains());
  EXPECT_THROW(delay_stats(m, {}), UsageError);
  EXPECT_THROW(delay_stats(m, {from_schedule(m, m.derived.upsilon)}, {7}), UsageError);
}

TEST(Compare, SignConvention) {
  EXPECT_DOUBLE_EQ(*percent_advantage(10.0, 15.0), -50.0);
  EXPECT_DOUBLE_EQ(*percent_advantage(10.0, 5.0), 50.0);
  EXPECT_DOUBLE_EQ(*percent_advantage(0.0, 0.0), 0.0);
  EXPECT_FALSE(percent_advantage(0.0, 1.0).has_value());
}

TEST(Compare, UndisturbedInstanceCostsNothingEitherWay) {
  LineOptions o;
  o.trains = even_train_pattern(4, 60);
  o.horizon = 60;
  AnnealParams p;
  p.budget_s = 0.5;
  p.realizations = 2;
  p.hold = false;
  const Comparison c = compare_solvers(build_model(gen_synthetic_line(o)), 10.0, p);
  EXPECT_EQ(c.exact_status, SolveStatus::optimal);
  EXPECT_EQ(c.exact_objective->numerator(), 0);
  EXPECT_EQ(c.anneal_objective->numerator(), 0);
  EXPECT_EQ(*c.objective_diff_pct, 0.0);
}

TEST(Compare, SmallConflictBothOptimal) {
  AnnealParams p;
  p.budget_s = 0.5;
  p.realizations = 2;
  p.hold = false;
  const Comparison c = compare_solvers(build_model(fixtures::two_trains()), 10.0, p);
  EXPECT_EQ(*c.exact_objective, Rational(3));
  EXPECT_EQ(*c.anneal_objective, Rational(3));
  EXPECT_EQ(*c.objective_diff_pct, 0.0);
  EXPECT_TRUE(c.time_diff_pct.has_value());
  EXPECT_EQ(c.anneal_feasible, 2);
  std::ostringstream out;
  write_comparison_csv(out, "two_trains", c);
  EXPECT_NE(out.str().find("positive favours the annealer"), std::string::npos);
  EXPECT_NE(out.str().find("two_trains,optimal,3,"), std::string::npos);
}

TEST(Compare, ShortAnnealingOnAHardClosureIsWorse) {
  AnnealParams p;
  p.budget_s = 1.0;
  p.realizations = 2;
  p.hold = false;
  const Comparison c = compare_solvers(build_model(fixtures::load("sweep_closure.json")), 60.0, p);
  ASSERT_EQ(c.exact_status, SolveStatus::optimal);
  ASSERT_TRUE(c.anneal_objective);
  EXPECT_GE(*c.anneal_objective, *c.exact_objective);
  EXPECT_LT(*c.objective_diff_pct, 0.0);
}
