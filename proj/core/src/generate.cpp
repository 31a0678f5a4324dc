#include "railsched/generate.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <optional>
#include <random>

#include "railsched/error.hpp"

namespace railsched {

std::string to_string(LineKind kind) {
  switch (kind) {
    case LineKind::double_track: return "double";
    case LineKind::double_with_closure: return "double_with_closure";
    case LineKind::single_track: return "single";
  }
  return "?";
}

LineKind line_kind_from_string(const std::string& text) {
  if (text == "double") return LineKind::double_track;
  if (text == "double_with_closure") return LineKind::double_with_closure;
  if (text == "single") return LineKind::single_track;
  throw UsageError("unknown line kind '" + text + "' (double, double_with_closure, single)");
}

std::vector<TrainRequest> even_train_pattern(int count, int cycle) {
  static constexpr TrainClass kClasses[] = {TrainClass::stopping, TrainClass::intercity, TrainClass::express};
  std::vector<TrainRequest> out;
  for (int i = 0; i < count; ++i) out.push_back({i % 2 == 0, kClasses[i % 3], i * cycle / count});
  return out;
}

namespace {

constexpr int kDwell = 1;
constexpr int kSwitch = 1;
constexpr int kNever = std::numeric_limits<int>::max();

struct Placed {
  bool forward = true;
  std::vector<int> dep;  ///< indexed by line station, kNever where absent
  std::vector<int> arr;
};

class LinePlanner {
 public:
  LinePlanner(int stations, std::vector<int> pass, bool single, int headway)
      : n_(stations), pass_(std::move(pass)), single_(single), headway_(headway) {}

  int station_at(bool forward, int pos) const { return forward ? pos : n_ - 1 - pos; }
  int leg_pass(bool forward, int pos) const { return pass_[forward ? pos : n_ - 2 - pos]; }
  bool intermediate(int station) const { return station > 0 && station < n_ - 1; }

  /// Schedule starting at `start`, waiting where needed; empty when it runs into a dead end.
  std::optional<Placed> plan(bool forward, int start) const {
    Placed x;
    x.forward = forward;
    x.dep.assign(n_, kNever);
    x.arr.assign(n_, kNever);
    int deadline = kNever;
    for (int p = 0; p + 1 < n_; ++p) {
      const int s = station_at(forward, p);
      const int s2 = station_at(forward, p + 1);
      const int pass = leg_pass(forward, p);
      int d = p == 0 ? start : x.arr[s] + kDwell;
      for (bool changed = true; changed;) {
        changed = false;
        for (const auto& o : placed_) {
          if (o.forward == forward) {
            const int od = o.dep[s];
            if (d > od - headway_ && d < od + headway_) {
              d = od + headway_;
              changed = true;
            }
            if (intermediate(s2)) {
              const int a = d + pass;
              if (o.arr[s2] <= a && a < o.dep[s2]) {
                d += o.dep[s2] - a;
                changed = true;
              }
            }
          } else if (single_) {
            const int od = o.dep[s2];
            const int oa = o.arr[s];
            if (!(d >= oa || d + pass <= od)) {
              d = oa;
              changed = true;
            }
          }
        }
      }
      if (d > deadline) return std::nullopt;
      x.dep[s] = d;
      x.arr[s2] = d + pass;
      deadline = kNever;
      if (intermediate(s2)) {
        for (const auto& o : placed_) {
          if (o.forward == forward && o.arr[s2] > x.arr[s2]) deadline = std::min(deadline, o.arr[s2]);
        }
      }
    }
    return x;
  }

  void add(Placed p) { placed_.push_back(std::move(p)); }

 private:
  int n_;
  std::vector<int> pass_;
  bool single_;
  int headway_;
  std::vector<Placed> placed_;
};

}  // namespace

Instance gen_synthetic_line(const LineOptions& o) {
  if (o.stations < 2) throw UsageError("a line needs at least two stations");
  if (o.cycle <= 0 || o.horizon <= 0 || o.horizon % o.cycle != 0) {
    throw UsageError("horizon must be a positive multiple of the cycle");
  }
  if (o.trains.empty()) throw UsageError("no trains requested");

  std::mt19937_64 rng(o.seed);
  std::uniform_int_distribution<int> pass_dist(3, 8);
  std::vector<int> pass(o.stations - 1);
  for (auto& p : pass) p = pass_dist(rng);

  struct Nominal {
    int start;
    int order;
    TrainRequest request;
  };
  std::vector<Nominal> nominal;
  for (int c = 0; c < o.horizon / o.cycle; ++c) {
    for (std::size_t i = 0; i < o.trains.size(); ++i) {
      nominal.push_back({c * o.cycle + o.trains[i].offset, static_cast<int>(nominal.size()), o.trains[i]});
    }
  }
  std::stable_sort(nominal.begin(), nominal.end(),
                   [](const Nominal& a, const Nominal& b) { return a.start < b.start; });
  if (o.max_trains >= 0 && static_cast<int>(nominal.size()) > o.max_trains) nominal.resize(o.max_trains);

  const bool single = o.kind == LineKind::single_track;
  LinePlanner planner(o.stations, pass, single, o.headway);
  const int max_wait = o.max_wait >= 0 ? o.max_wait : o.cycle;

  InstanceData data;
  data.d_max = o.d_max;
  auto sid = [](int k) { return "S" + std::to_string(k); };
  for (int k = 0; k < o.stations; ++k) {
    StationLayout st;
    st.id = sid(k);
    st.tracks = {"1", "2"};
    st.switch_time = kSwitch;
    data.stations.push_back(std::move(st));
  }
  for (int k = 0; k + 1 < o.stations; ++k) {
    Segment seg;
    seg.id = "L" + std::to_string(k);
    seg.from = sid(k);
    seg.to = sid(k + 1);
    seg.headway = o.headway;
    seg.length = pass[k];
    if (single) {
      seg.tracks = {{"main", TrackDirection::bidirectional}};
    } else {
      seg.tracks = {{"up", TrackDirection::forward}, {"down", TrackDirection::backward}};
    }
    data.segments.push_back(std::move(seg));
  }

  int number = 0;
  for (const auto& nom : nominal) {
    std::optional<Placed> placed;
    for (int wait = 0; wait <= max_wait && !placed; ++wait) {
      placed = planner.plan(nom.request.forward, nom.start + wait);
      const int origin = planner.station_at(nom.request.forward, 0);
      if (placed && placed->dep[origin] > nom.start + max_wait) placed.reset();
    }
    const std::string id = "T" + std::string(number < 9 ? "00" : number < 99 ? "0" : "") + std::to_string(number + 1);
    if (!placed) {
      throw InfeasibleGeneration("train " + id + " (nominal start " + std::to_string(nom.start) +
                                 ") cannot be inserted within " + std::to_string(max_wait) + " minutes");
    }
    ++number;
    TrainSpec spec;
    spec.id = id;
    spec.cls = nom.request.cls;
    for (int p = 0; p < o.stations; ++p) spec.route.push_back(sid(planner.station_at(nom.request.forward, p)));
    const std::string track = nom.request.forward ? "1" : "2";
    for (int p = 0; p < o.stations; ++p) {
      const int s = planner.station_at(nom.request.forward, p);
      if (p + 1 < o.stations) {
        data.timetable.departure[{id, sid(s)}] = placed->dep[s];
        const int s2 = planner.station_at(nom.request.forward, p + 1);
        data.timetable.pass[{id, sid(s), sid(s2)}] = placed->arr[s2] - placed->dep[s];
      }
      if (p > 0) data.timetable.dwell[{id, sid(s)}] = kDwell;
      data.stations[s].planned_track[id] = track;
    }
    data.trains.push_back(std::move(spec));
    planner.add(std::move(*placed));
  }

  if (o.kind == LineKind::double_with_closure) {
    data.disturbance.closures.push_back({"L" + std::to_string((o.stations - 2) / 2), {"up"}});
  }
  return Instance::create(std::move(data));
}

Instance with_random_delays(const Instance& base, std::uint64_t seed, int count, int max_minutes) {
  if (count < 0 || max_minutes < 1) throw UsageError("delay count must be >= 0 and minutes >= 1");
  std::mt19937_64 rng(seed);
  std::vector<int> trains(base.num_trains());
  std::iota(trains.begin(), trains.end(), 0);
  std::shuffle(trains.begin(), trains.end(), rng);
  Disturbance d;
  for (int k = 0; k < std::min(count, base.num_trains()); ++k) {
    const auto& train = base.train(trains[k]);
    const int pos = std::uniform_int_distribution<int>(0, train.departures > 1 ? 1 : 0)(rng);
    d.delays[{train.id, base.station(train.route[pos]).id}] = std::uniform_int_distribution<int>(1, max_minutes)(rng);
  }
  return apply_disturbance(base, d);
}

Instance random_network(std::uint64_t seed, const RandomNetworkOptions& options) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto coin = [&](double p) { return std::bernoulli_distribution(p)(rng); };

  InstanceData data;
  const int ns = uniform(2, std::max(2, options.max_stations));
  std::vector<std::string> names;
  for (int k = 0; k < ns; ++k) names.push_back(std::string(1, static_cast<char>('A' + k)));

  std::vector<std::pair<int, int>> edges;
  for (int k = 0; k + 1 < ns; ++k) edges.emplace_back(k, k + 1);
  if (ns == 4 && coin(0.5)) edges.back() = {1, 3};
  std::vector<std::vector<int>> adj(ns);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto [a, b] = edges[e];
    adj[a].push_back(b);
    adj[b].push_back(a);
    Segment seg;
    seg.id = "L" + names[a] + names[b];
    seg.from = names[a];
    seg.to = names[b];
    seg.headway = uniform(1, 3);
    seg.length = uniform(0, 2);
    switch (uniform(0, 2)) {
      case 0: seg.tracks = {{"m", TrackDirection::bidirectional}}; break;
      case 1: seg.tracks = {{"u", TrackDirection::forward}, {"d", TrackDirection::backward}}; break;
      default: seg.tracks = {{"a", TrackDirection::bidirectional}, {"b", TrackDirection::bidirectional}}; break;
    }
    data.segments.push_back(std::move(seg));
  }

  for (int k = 0; k < ns; ++k) {
    StationLayout st;
    st.id = names[k];
    st.depot = coin(0.15);
    if (coin(0.8)) st.tracks = {"1", "2"};
    st.switch_time = uniform(0, 2);
    data.stations.push_back(std::move(st));
  }

  static constexpr TrainClass kClasses[] = {TrainClass::stopping, TrainClass::intercity, TrainClass::express,
                                            TrainClass::shunting};
  const int nt = uniform(1, std::max(1, options.max_trains));
  std::vector<std::vector<int>> routes;
  std::vector<int> first_departure(nt), last_arrival(nt);
  for (int j = 0; j < nt; ++j) {
    std::vector<int> route{uniform(0, ns - 1)};
    const int length = uniform(2, ns);
    while (static_cast<int>(route.size()) < length) {
      std::vector<int> next;
      for (int b : adj[route.back()]) {
        if (std::find(route.begin(), route.end(), b) == route.end()) next.push_back(b);
      }
      if (next.empty()) break;
      route.push_back(next[uniform(0, static_cast<int>(next.size()) - 1)]);
    }
    TrainSpec spec;
    spec.id = "J" + std::to_string(j + 1);
    spec.cls = kClasses[uniform(0, 3)];
    spec.exits = route.size() == 1 || coin(0.3);
    for (int s : route) spec.route.push_back(names[s]);

    const int n = static_cast<int>(route.size());
    const int departures = spec.exits ? n : n - 1;
    int t = uniform(0, 4);
    first_departure[j] = t;
    for (int p = 0; p < n; ++p) {
      if (p > 0) {
        const int pass = uniform(1, 4);
        data.timetable.pass[{spec.id, names[route[p - 1]], names[route[p]]}] = pass;
        last_arrival[j] = t + pass;
        const int dwell = uniform(0, 2);
        if (dwell > 0) data.timetable.dwell[{spec.id, names[route[p]]}] = dwell;
        t += pass + dwell + uniform(0, 1);
      }
      if (p < departures) data.timetable.departure[{spec.id, names[route[p]]}] = t;
      auto& st = data.stations[route[p]];
      if (!st.tracks.empty() && p > 0 && p < departures) st.planned_track[spec.id] = coin(0.5) ? "1" : "2";
    }
    if (options.disturb && coin(0.5)) {
      data.disturbance.delays[{spec.id, names[route[uniform(0, departures - 1)]]}] = uniform(1, 5);
    }
    routes.push_back(std::move(route));
    data.trains.push_back(std::move(spec));
  }

  for (int k = 0; k < ns; ++k) {
    if (!coin(0.4)) continue;
    SwitchGroup group;
    group.name = "x" + names[k];
    for (int j = 0; j < nt; ++j) {
      const auto& route = routes[j];
      const auto it = std::find(route.begin(), route.end(), k);
      if (it == route.end()) continue;
      const int p = static_cast<int>(it - route.begin());
      const int departures = data.trains[j].exits ? static_cast<int>(route.size()) : static_cast<int>(route.size()) - 1;
      if (p > 0 && coin(0.5)) group.members.push_back({data.trains[j].id, Movement::in});
      if (p < departures && coin(0.5)) group.members.push_back({data.trains[j].id, Movement::out});
    }
    if (group.members.size() >= 2) data.stations[k].switch_groups.push_back(std::move(group));
  }

  for (int j = 0; j < nt; ++j) {
    if (data.trains[j].exits) continue;
    for (int k = 0; k < nt; ++k) {
      if (k == j || routes[k].front() != routes[j].back()) continue;
      // Mostly turns the timetable can honour; a few that force delays or infeasibility.
      const int minutes = uniform(0, 3);
      if (coin(first_departure[k] >= last_arrival[j] + minutes ? 0.7 : 0.15)) {
        data.timetable.turns.push_back({names[routes[j].back()], data.trains[j].id, data.trains[k].id, minutes});
      }
    }
  }

  if (options.disturb && coin(0.2)) {
    for (const auto& seg : data.segments) {
      if (seg.tracks.size() == 2) {
        data.disturbance.closures.push_back({seg.id, {seg.tracks[uniform(0, 1)].id}});
        break;
      }
    }
  }
  data.d_max = uniform(options.min_d_max, std::max(options.min_d_max, options.max_d_max));
  return Instance::create(std::move(data));
}

}  // namespace railsched
