#include "railsched/derivation.hpp"

#include <algorithm>

#include "railsched/error.hpp"

namespace railsched {

int DerivedTimes::at(const Instance& instance, int train, int station) const {
  const int pos = instance.train(train).position_of(station);
  if (pos < 0 || !instance.train(train).has_departure(pos)) {
    throw ReferenceError("train '" + instance.train(train).id + "' has no departure at '" +
                         instance.station(station).id + "'");
  }
  return upsilon[train][pos];
}

DerivedTimes earliest_departures(const Instance& instance) {
  DerivedTimes derived;
  derived.d_max = instance.d_max();
  derived.upsilon.resize(instance.num_trains());
  for (int j = 0; j < instance.num_trains(); ++j) {
    const auto& train = instance.train(j);
    auto& ups = derived.upsilon[j];
    ups.resize(train.departures);
    for (int p = 0; p < train.departures; ++p) {
      // Free run: the train follows its route at minimum running time, alone.
      const int technical = p == 0 ? train.sigma[0] : ups[p - 1] + train.pass[p - 1] + train.dwell[p];
      ups[p] = std::max(train.sigma[p], technical + train.delay[p]);
    }
  }
  return derived;
}

Window window_of(const Instance& instance, const DerivedTimes& derived, const TimeRef& ref) {
  if (!ref.arrival) {
    return {derived.lo(ref.train, ref.pos), derived.hi(ref.train, ref.pos)};
  }
  const int offset = instance.train(ref.train).pass[ref.pos - 1];
  return {derived.lo(ref.train, ref.pos - 1) + offset, derived.hi(ref.train, ref.pos - 1) + offset};
}

std::int64_t big_M(std::int64_t lo_a, std::int64_t /*hi_a*/, std::int64_t /*lo_b*/,
                   std::int64_t hi_b, std::int64_t tau) {
  return -lo_a + hi_b + tau;
}

bool passing_possible(const Instance& instance, int from, int to) {
  const int k = instance.segment_between(from, to);
  if (k < 0) throw ReferenceError("no segment between stations");
  return instance.segment(k).usable_tracks(from) >= 2;
}

namespace {

struct Pairwise {
  const Instance& instance;
  const DerivedTimes& derived;

  // A >= B + tau can be violated for some values in the windows.
  bool violable(const TimeRef& a, const TimeRef& b, int tau) const {
    const Window wa = window_of(instance, derived, a);
    const Window wb = window_of(instance, derived, b);
    return big_M(wa.lo, wa.hi, wb.lo, wb.hi, tau) > 0;
  }

  // Neither order is guaranteed by the windows alone.
  bool live(const TimeRef& a_later, const TimeRef& a_earlier, int tau_first,
            const TimeRef& b_later, const TimeRef& b_earlier, int tau_second) const {
    return violable(a_later, a_earlier, tau_first) && violable(b_later, b_earlier, tau_second);
  }
};

TimeRef dep(int train, int pos) { return {train, pos, false}; }
TimeRef arr(int train, int pos) { return {train, pos, true}; }

}  // namespace

IndexSets build_index_sets(const Instance& instance, const DerivedTimes& derived) {
  IndexSets sets;
  const Pairwise pw{instance, derived};
  const int n = instance.num_trains();

  sets.route_pairs.resize(n);
  for (int j = 0; j < n; ++j) {
    const auto& route = instance.train(j).route;
    for (std::size_t p = 0; p + 1 < route.size(); ++p) {
      sets.route_pairs[j].push_back({route[p], route[p + 1]});
    }
  }
  for (const auto& turn : instance.turns()) sets.turn_pairs[turn.station].push_back(turn);

  for (int a = 0; a < n; ++a) {
    const auto& ta = instance.train(a);
    for (int b = a + 1; b < n; ++b) {
      const auto& tb = instance.train(b);
      const TrainPair pair{a, b};
      bool close = false;

      std::vector<Leg> same_direction;
      std::vector<Leg> opposite_single;
      for (std::size_t p = 0; p + 1 < ta.route.size(); ++p) {
        const int s = ta.route[p];
        const int s2 = ta.route[p + 1];
        const int q = tb.position_of(s);
        if (q >= 0 && q + 1 < static_cast<int>(tb.route.size()) && tb.route[q + 1] == s2) {
          same_direction.push_back({s, s2});
          close = close || pw.live(dep(b, q), dep(a, p), instance.headway(a, b, s, s2),
                                   dep(a, p), dep(b, q), instance.headway(b, a, s, s2));
        }
        const int q2 = tb.position_of(s2);
        if (q2 >= 0 && q2 + 1 < static_cast<int>(tb.route.size()) && tb.route[q2 + 1] == s &&
            instance.segment(ta.leg_segment[p]).single_track()) {
          opposite_single.push_back({s, s2});
          close = close || pw.live(dep(b, q2), arr(a, p + 1), 0, dep(a, p), arr(b, q2 + 1), 0);
        }
      }

      std::vector<int> track_stations;
      struct SwitchCandidate {
        int station;
        Movement ma;
        Movement mb;
      };
      std::vector<SwitchCandidate> switches;
      for (std::size_t p = 0; p < ta.route.size(); ++p) {
        const int s = ta.route[p];
        const int q = tb.position_of(s);
        if (q < 0) continue;
        const auto& st = instance.station(s);
        const int pa = static_cast<int>(p);
        if (!st.depot && !st.tracks.empty() && ta.has_arrival(pa) && ta.has_departure(pa) &&
            tb.has_arrival(q) && tb.has_departure(q) && st.planned_track[a] >= 0 &&
            st.planned_track[a] == st.planned_track[b]) {
          track_stations.push_back(s);
          close = close || pw.live(arr(b, q), dep(a, pa), 0, arr(a, pa), dep(b, q), 0);
        }
        for (const auto& group : st.switch_groups) {
          for (const auto& [ja, ma] : group.members) {
            if (ja != a) continue;
            for (const auto& [jb, mb] : group.members) {
              if (jb != b) continue;
              switches.push_back({s, ma, mb});
              const TimeRef ra{a, pa, ma == Movement::in};
              const TimeRef rb{b, q, mb == Movement::in};
              close = close || pw.live(rb, ra, instance.switch_time(a, b, s), ra, rb,
                                       instance.switch_time(b, a, s));
            }
          }
        }
      }

      if (!close) continue;
      sets.close_pairs.insert(pair);
      if (!same_direction.empty()) {
        sets.headway_pairs.insert(pair);
        sets.common_station_pairs[pair] = same_direction;
      }
      if (!opposite_single.empty()) {
        sets.single_pairs.insert(pair);
        sets.common_single_pairs[pair] = opposite_single;
      }
      for (int s : track_stations) sets.track_pairs[s].insert(pair);
      for (const auto& sw : switches) {
        const int s = sw.station;
        const int pa = ta.position_of(s);
        const int pb = tb.position_of(s);
        if (sw.ma == Movement::out && sw.mb == Movement::out) {
          sets.switch_out_pairs[s].insert(pair);
        } else if (sw.ma == Movement::out && sw.mb == Movement::in) {
          sets.switch_out_in_pairs[{s, tb.route[pb - 1]}].insert({a, b});
        } else if (sw.ma == Movement::in && sw.mb == Movement::out) {
          sets.switch_out_in_pairs[{s, ta.route[pa - 1]}].insert({b, a});
        } else {
          const int from_a = ta.route[pa - 1];
          const int from_b = tb.route[pb - 1];
          if (from_a == from_b && !passing_possible(instance, from_a, s)) {
            sets.switch_in_noMP_pairs[{s, from_a}].insert(pair);
          } else {
            sets.switch_in_MP_pairs[{s, from_a}].insert(pair);
          }
        }
      }
    }
  }
  return sets;
}

void write_index_sets(std::ostream& out, const Instance& instance, const IndexSets& sets) {
  auto tn = [&](int j) -> const std::string& { return instance.train(j).id; };
  auto sn = [&](int s) -> const std::string& { return instance.station(s).id; };
  out << "# family\ttrain\ttrain'\tstation\tstation'\n";
  for (const auto& [s, turns] : sets.turn_pairs) {
    for (const auto& t : turns) out << "turn\t" << tn(t.terminating) << '\t' << tn(t.continuing) << '\t' << sn(s) << "\t-\n";
  }
  for (const auto& p : sets.close_pairs) out << "close\t" << tn(p.first) << '\t' << tn(p.second) << "\t-\t-\n";
  for (const auto& p : sets.headway_pairs) {
    for (const auto& leg : sets.common_station_pairs.at(p)) {
      out << "headway\t" << tn(p.first) << '\t' << tn(p.second) << '\t' << sn(leg.from) << '\t' << sn(leg.to) << '\n';
    }
  }
  for (const auto& p : sets.single_pairs) {
    for (const auto& leg : sets.common_single_pairs.at(p)) {
      out << "single\t" << tn(p.first) << '\t' << tn(p.second) << '\t' << sn(leg.from) << '\t' << sn(leg.to) << '\n';
    }
  }
  for (const auto& [s, pairs] : sets.track_pairs) {
    for (const auto& p : pairs) out << "track\t" << tn(p.first) << '\t' << tn(p.second) << '\t' << sn(s) << "\t-\n";
  }
  for (const auto& [s, pairs] : sets.switch_out_pairs) {
    for (const auto& p : pairs) out << "switch_out\t" << tn(p.first) << '\t' << tn(p.second) << '\t' << sn(s) << "\t-\n";
  }
  auto dump_pairwise = [&](const char* name, const std::map<StationPair, std::set<TrainPair>>& family) {
    for (const auto& [key, pairs] : family) {
      for (const auto& p : pairs) {
        out << name << '\t' << tn(p.first) << '\t' << tn(p.second) << '\t' << sn(key.first) << '\t'
            << sn(key.second) << '\n';
      }
    }
  };
  dump_pairwise("switch_out_in", sets.switch_out_in_pairs);
  dump_pairwise("switch_in_noMP", sets.switch_in_noMP_pairs);
  dump_pairwise("switch_in_MP", sets.switch_in_MP_pairs);
}

SizeEstimate estimate_size(int num_trains, int num_stations, const Rational& alpha,
                           const Rational& n_meet, TrackMode mode) {
  if (!(alpha > 0 && alpha < 1)) throw UsageError("alpha must lie in (0, 1)");
  if (num_trains <= 0 || num_stations <= 0) throw UsageError("train and station counts must be positive");
  if (n_meet <= 0) throw UsageError("meet count must be positive");
  SizeEstimate e;
  e.alpha = alpha;
  e.n_meet = n_meet;
  e.num_trains = num_trains;
  e.num_stations = num_stations;
  e.track_mode = mode;
  const Rational js(static_cast<std::int64_t>(num_trains) * num_stations);
  e.t_count = alpha * js;
  if (mode == TrackMode::double_track) {
    e.precedence_count = alpha * n_meet * js;
    e.constraint_count = alpha * (6 * n_meet + 2) * js;
  } else {
    e.precedence_count = 2 * alpha * n_meet * js;
    e.constraint_count = alpha * (8 * n_meet + 2) * js;
  }
  return e;
}

}  // namespace railsched
