#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.hpp"
#include "railsched/diagram.hpp"
#include "railsched/error.hpp"
#include "railsched/exact.hpp"
#include "railsched/generate.hpp"

using namespace railsched;

namespace {

std::vector<DiagramVertex> path_of(const TimeDistance& d, const std::string& train, const std::string& path) {
  std::vector<DiagramVertex> out;
  for (const auto& v : d.vertices) {
    if (v.train == train && v.path == path) out.push_back(v);
  }
  return out;
}

Instance one_train() {
  auto data = parse_instance_data(fixtures::read_text("two_trains.json"));
  data.trains.pop_back();
  std::erase_if(data.timetable.departure, [](const auto& kv) { return kv.first.first == "R1"; });
  std::erase_if(data.timetable.dwell, [](const auto& kv) { return kv.first.first == "R1"; });
  std::erase_if(data.timetable.pass, [](const auto& kv) { return std::get<0>(kv.first) == "R1"; });
  data.stations[1].planned_track.erase("R1");
  data.disturbance = {};
  return Instance::create(data);
}

}  // namespace

TEST(Diagram, UndelayedTrainPathsCoincide) {
  const Instance inst = one_train();
  const TimeDistance d = time_distance(inst, {{10, 16}}, {"A", "B", "C"});
  const auto sched = path_of(d, "IC1", "scheduled");
  const auto real = path_of(d, "IC1", "realized");
  ASSERT_EQ(sched.size(), 4u);  // dep A, arr B, dep B, arr C
  for (std::size_t i = 0; i < sched.size(); ++i) {
    EXPECT_EQ(sched[i].time, real[i].time);
    EXPECT_EQ(sched[i].distance, real[i].distance);
    if (i > 0) {
      EXPECT_GE(sched[i].time, sched[i - 1].time);
      EXPECT_GE(sched[i].distance, sched[i - 1].distance);
    }
  }
  EXPECT_EQ(d.offsets, (std::vector<double>{0.0, 5.0, 9.0}));
}

TEST(Diagram, DelayShiftsTheRealizedPathRight) {
  const Instance inst = fixtures::two_trains();
  const TimeDistance d = time_distance(inst, {{14, 20}, {11, 17}}, {"A", "B", "C"});
  const auto sched = path_of(d, "IC1", "scheduled");
  const auto real = path_of(d, "IC1", "realized");
  ASSERT_EQ(sched.size(), real.size());
  for (std::size_t i = 0; i < sched.size(); ++i) EXPECT_EQ(real[i].time - sched[i].time, 4);
}

TEST(Diagram, OppositeTrainsDoNotShareASingleTrackLeg) {
  LineOptions o;
  o.kind = LineKind::single_track;
  o.stations = 4;
  o.trains = even_train_pattern(4, 60);
  o.horizon = 60;
  const Instance inst = with_random_delays(gen_synthetic_line(o), 5, 3, 12);
  const DecisionModel m = build_model(inst);
  const ExactResult r = solve_exact(m);
  ASSERT_TRUE(r.solution);
  const TimeDistance d = time_distance(inst, schedule_of(m, *r.solution), {"S0", "S1", "S2", "S3"});
  // occupation interval of every leg per train: departure vertex to next arrival vertex
  struct Span {
    std::string train;
    std::string from, to;
    int t0, t1;
  };
  std::vector<Span> spans;
  for (std::size_t i = 0; i + 1 < d.vertices.size(); ++i) {
    const auto& a = d.vertices[i];
    const auto& b = d.vertices[i + 1];
    if (a.path != "realized" || b.path != "realized" || a.train != b.train || a.event != "dep") continue;
    spans.push_back({a.train, a.station, b.station, a.time, b.time});
  }
  for (const auto& x : spans) {
    for (const auto& y : spans) {
      if (x.from == y.to && x.to == y.from) {
        EXPECT_TRUE(x.t1 <= y.t0 || y.t1 <= x.t0) << x.train << " vs " << y.train << " on " << x.from << "-" << x.to;
      }
    }
  }
}

TEST(Diagram, CoLocatedStationsGetAnArtificialGap) {
  auto data = parse_instance_data(fixtures::read_text("two_trains.json"));
  data.segments[1].length = 0.0;
  const Instance inst = Instance::create(data);
  const TimeDistance d = time_distance(inst, {{14, 20}, {11, 17}}, {"A", "B", "C"});
  EXPECT_EQ(d.offsets, (std::vector<double>{0.0, 5.0, 5.25}));
}

TEST(Diagram, CsvRoundTripAndGolden) {
  const Instance inst = fixtures::two_trains();
  const TimeDistance d = time_distance(inst, {{14, 20}, {11, 17}}, {"A", "B", "C"});
  std::ostringstream out;
  write_time_distance_csv(out, d);
  EXPECT_EQ(out.str(), fixtures::read_text("golden/two_trains_diagram.csv"));
  std::istringstream in(out.str());
  EXPECT_EQ(read_time_distance_csv(in), d);
}

TEST(Diagram, SvgStyles) {
  const TimeDistance d = time_distance(fixtures::two_trains(), {{14, 20}, {11, 17}}, {"A", "B", "C"});
  std::ostringstream out;
  write_time_distance_svg(out, d, "two <trains>");
  const std::string svg = out.str();
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("stroke-dasharray"), std::string::npos);
  EXPECT_NE(svg.find("#2ca02c"), std::string::npos);
  EXPECT_NE(svg.find("two &lt;trains&gt;"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST(Diagram, BadCorridors) {
  const Instance inst = fixtures::two_trains();
  EXPECT_THROW(time_distance(inst, {{14, 20}, {11, 17}}, {}), UsageError);
  EXPECT_THROW(time_distance(inst, {{14, 20}, {11, 17}}, {"A", "C"}), UsageError);
  EXPECT_THROW(time_distance(inst, {{14, 20}, {11, 17}}, {"A", "Q"}), ReferenceError);
  std::istringstream bad("train,path\n");
  EXPECT_THROW(read_time_distance_csv(bad), SchemaError);
}
