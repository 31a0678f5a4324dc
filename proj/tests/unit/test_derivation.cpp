#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "railsched/derivation.hpp"
#include "railsched/error.hpp"
#include "railsched/generate.hpp"

using namespace railsched;

TEST(Derivation, EarliestDeparturesByHand) {
  const Instance inst = fixtures::two_trains();
  const DerivedTimes d = earliest_departures(inst);
  // IC1: 10 + 2 delay = 12; then 12 + 5 + 1 = 18.  R1 follows its timetable.
  EXPECT_EQ(d.upsilon[0], (std::vector<int>{12, 18}));
  EXPECT_EQ(d.upsilon[1], (std::vector<int>{11, 17}));
  EXPECT_EQ(d.hi(0, 1), 58);
  EXPECT_EQ(d.at(inst, 1, inst.station_index("B")), 17);
  EXPECT_THROW(d.at(inst, 1, inst.station_index("C")), ReferenceError);
}

TEST(Derivation, EnRouteDelayPropagatesOnlyWhenItBites) {
  Disturbance dist;
  dist.delays[{"R1", "B"}] = 3;
  const Instance inst = apply_disturbance(fixtures::two_trains(), dist);
  const DerivedTimes d = earliest_departures(inst);
  EXPECT_EQ(d.upsilon[1], (std::vector<int>{11, 20}));  // 11 + 5 + 1 + 3
}

TEST(Derivation, ArrivalWindowsShiftByRunningTime) {
  const Instance inst = fixtures::two_trains();
  const DerivedTimes d = earliest_departures(inst);
  const Window w = window_of(inst, d, {0, 1, true});
  EXPECT_EQ(w.lo, 17);
  EXPECT_EQ(w.hi, 57);
}

TEST(Derivation, BigMIsTheSmallestSafeConstant) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> start(0, 300), width(0, 60), tau(0, 10);
  for (int k = 0; k < 2000; ++k) {
    const std::int64_t la = start(rng), ha = la + width(rng), lb = start(rng), hb = lb + width(rng), t = tau(rng);
    const std::int64_t c = big_M(la, ha, lb, hb, t);
    auto holds_everywhere = [&](std::int64_t m) {
      for (std::int64_t a : {la, ha}) {
        for (std::int64_t b : {lb, hb}) {
          if (a < b + t - m) return false;
        }
      }
      return true;
    };
    EXPECT_TRUE(holds_everywhere(c));
    EXPECT_FALSE(holds_everywhere(c - 1));
  }
}

TEST(Derivation, SizeEstimatesMatchHandCounts) {
  const auto dbl = estimate_size(59, 3, Rational(2, 3), Rational(12), TrackMode::double_track);
  EXPECT_EQ(dbl.t_count, Rational(118));
  EXPECT_EQ(dbl.precedence_count, Rational(1416));
  EXPECT_EQ(dbl.constraint_count, Rational(8732));  // 2/3 * 74 * 177
  const auto sgl = estimate_size(21, 5, Rational(2, 3), Rational(6), TrackMode::single_track);
  EXPECT_EQ(sgl.t_count, Rational(70));
  EXPECT_EQ(sgl.precedence_count, Rational(840));
  EXPECT_EQ(sgl.constraint_count, Rational(3500));
  EXPECT_THROW(estimate_size(5, 5, Rational(1), Rational(1), TrackMode::double_track), UsageError);
  EXPECT_THROW(estimate_size(0, 5, Rational(1, 2), Rational(1), TrackMode::double_track), UsageError);
}

TEST(Derivation, ClosePairsOfTheFixture) {
  const Instance inst = fixtures::two_trains();
  const DerivedTimes d = earliest_departures(inst);
  const IndexSets sets = build_index_sets(inst, d);
  ASSERT_EQ(sets.close_pairs.size(), 1u);
  ASSERT_TRUE(sets.headway_pairs.contains({0, 1}));
  EXPECT_EQ(sets.common_station_pairs.at({0, 1}).size(), 2u);  // A->B and B->C
  EXPECT_TRUE(sets.single_pairs.empty());
  EXPECT_TRUE(sets.track_pairs.empty());  // different planned tracks at B
}

TEST(Derivation, ClosenessFollowsTheWindows) {
  const Instance inst = fixtures::two_trains().with_d_max(1);
  const DerivedTimes d = earliest_departures(inst);
  // IC1 in [12,13] at A, R1 in [11,12]: headway 3 still makes both orders violable
  EXPECT_EQ(build_index_sets(inst, d).close_pairs.size(), 1u);

  // IC1 now starts after R1 could possibly have left: only one order remains.
  Disturbance dist;
  dist.delays[{"IC1", "A"}] = 30;
  const Instance later = apply_disturbance(fixtures::two_trains(), dist).with_d_max(5);
  EXPECT_TRUE(build_index_sets(later, earliest_departures(later)).close_pairs.empty());
}

TEST(Derivation, SingleTrackPairsRunOpposite) {
  LineOptions o;
  o.kind = LineKind::single_track;
  o.stations = 4;
  o.trains = even_train_pattern(4, 60);
  o.horizon = 60;
  const Instance inst = with_random_delays(gen_synthetic_line(o), 3, 3, 10);
  const IndexSets sets = build_index_sets(inst, earliest_departures(inst));
  ASSERT_FALSE(sets.single_pairs.empty());
  for (const auto& [pair, legs] : sets.common_single_pairs) {
    for (const auto& leg : legs) {
      const auto& a = inst.train(pair.first);
      const auto& b = inst.train(pair.second);
      const int pa = a.position_of(leg.from), pb = b.position_of(leg.to);
      ASSERT_GE(pa, 0);
      ASSERT_GE(pb, 0);
      EXPECT_EQ(a.route[pa + 1], leg.to);
      EXPECT_EQ(b.route[pb + 1], leg.from);
      EXPECT_TRUE(inst.segment(inst.segment_between(leg.from, leg.to)).single_track());
    }
  }
}

TEST(Derivation, PassingNeedsTwoTracksInTheTravelDirection) {
  const Instance inst = fixtures::two_trains();
  const int a = inst.station_index("A"), b = inst.station_index("B"), c = inst.station_index("C");
  EXPECT_FALSE(passing_possible(inst, a, b));  // one bidirectional track
  EXPECT_FALSE(passing_possible(inst, b, c));  // one track per direction
  EXPECT_THROW(passing_possible(inst, a, c), ReferenceError);
}

TEST(Derivation, IndexSetDumpListsEveryTuple) {
  const Instance inst = fixtures::two_trains();
  const IndexSets sets = build_index_sets(inst, earliest_departures(inst));
  std::ostringstream out;
  write_index_sets(out, inst, sets);
  const std::string text = out.str();
  EXPECT_NE(text.find("close\tIC1\tR1"), std::string::npos);
  EXPECT_NE(text.find("headway\tIC1\tR1\tA\tB"), std::string::npos);
  EXPECT_NE(text.find("headway\tIC1\tR1\tB\tC"), std::string::npos);
}
