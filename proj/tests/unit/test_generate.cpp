#include <gtest/gtest.h>

#include "railsched/error.hpp"
#include "railsched/generate.hpp"
#include "railsched/harness.hpp"
#include "railsched/instance_io.hpp"

using namespace railsched;

namespace {

LineOptions line(LineKind kind, int stations, int per_cycle, int horizon = 120) {
  LineOptions o;
  o.kind = kind;
  o.stations = stations;
  o.trains = even_train_pattern(per_cycle, 60);
  o.horizon = horizon;
  return o;
}

}  // namespace

TEST(Generate, TimetablesAreConflictFree) {
  for (LineKind kind : {LineKind::double_track, LineKind::single_track}) {
    for (int n = 3; n <= 6; ++n) {
      const Instance inst = gen_synthetic_line(line(kind, n, 4));
      const DerivedTimes d = earliest_departures(inst);
      // no disturbance: the timetable itself is the earliest schedule and must be feasible
      for (int j = 0; j < inst.num_trains(); ++j) {
        for (int p = 0; p < inst.train(j).departures; ++p) ASSERT_EQ(d.lo(j, p), inst.train(j).sigma[p]);
      }
      const Verdict v = check_feasibility(inst, d, build_index_sets(inst, d), d.upsilon);
      EXPECT_TRUE(v.ok) << to_string(kind) << " " << n << ": " << (v.ok ? "" : v.violations[0].family);
    }
  }
}

TEST(Generate, PositiveIntegerTimes) {
  const Instance inst = gen_synthetic_line(line(LineKind::double_track, 5, 6));
  for (int j = 0; j < inst.num_trains(); ++j) {
    for (int p : inst.train(j).pass) EXPECT_GT(p, 0);
  }
  for (int k = 0; k < inst.num_segments(); ++k) EXPECT_GT(inst.segment(k).headway, 0);
}

TEST(Generate, ClosureLeavesOneTrackMidLine) {
  const Instance inst = gen_synthetic_line(line(LineKind::double_with_closure, 5, 4));
  int closed = 0;
  for (int k = 0; k < inst.num_segments(); ++k) closed += inst.segment(k).tracks.size() == 1;
  EXPECT_EQ(closed, 1);
  EXPECT_EQ(inst.data().disturbance.closures.size(), 1u);
}

TEST(Generate, SeedDeterminism) {
  const auto a = serialize_instance(with_random_delays(gen_synthetic_line(line(LineKind::single_track, 4, 6)), 3, 4, 10));
  const auto b = serialize_instance(with_random_delays(gen_synthetic_line(line(LineKind::single_track, 4, 6)), 3, 4, 10));
  EXPECT_EQ(a, b);
  EXPECT_EQ(serialize_instance(random_network(8)), serialize_instance(random_network(8)));
  EXPECT_NE(serialize_instance(random_network(8)), serialize_instance(random_network(9)));
}

TEST(Generate, RandomDelaysHitDistinctTrains) {
  const Instance base = gen_synthetic_line(line(LineKind::double_track, 4, 6, 60));
  const Instance d = with_random_delays(base, 1, 4, 15);
  EXPECT_EQ(d.data().disturbance.delays.size(), 4u);
  std::set<std::string> trains;
  for (const auto& [key, minutes] : d.data().disturbance.delays) {
    trains.insert(key.first);
    EXPECT_GE(minutes, 1);
    EXPECT_LE(minutes, 15);
  }
  EXPECT_EQ(trains.size(), 4u);
}

TEST(Generate, RandomNetworksStayWithinLimits) {
  RandomNetworkOptions o;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Instance inst = random_network(seed, o);
    EXPECT_LE(inst.num_trains(), o.max_trains);
    EXPECT_LE(inst.num_stations(), o.max_stations);
    EXPECT_GE(inst.d_max(), o.min_d_max);
    EXPECT_LE(inst.d_max(), o.max_d_max);
  }
}

TEST(Generate, OverfullLineIsRefused) {
  LineOptions o = line(LineKind::single_track, 6, 30, 60);
  o.max_wait = 0;
  EXPECT_THROW(gen_synthetic_line(o), InfeasibleGeneration);
}
