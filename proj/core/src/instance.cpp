#include "railsched/instance.hpp"

#include <algorithm>
#include <set>

#include "railsched/error.hpp"

namespace railsched {

std::string to_string(TrainClass cls) {
  switch (cls) {
    case TrainClass::stopping: return "stopping";
    case TrainClass::intercity: return "intercity";
    case TrainClass::express: return "express";
    case TrainClass::shunting: return "shunting";
  }
  throw InternalError("unknown train class");
}

TrainClass train_class_from_string(const std::string& text) {
  if (text == "stopping") return TrainClass::stopping;
  if (text == "intercity") return TrainClass::intercity;
  if (text == "express") return TrainClass::express;
  if (text == "shunting") return TrainClass::shunting;
  throw SchemaError("unknown train class '" + text + "'");
}

Rational default_weight(TrainClass cls) {
  switch (cls) {
    case TrainClass::stopping: return Rational(1);
    case TrainClass::intercity: return Rational(3, 2);
    case TrainClass::express: return Rational(7, 4);
    case TrainClass::shunting: return Rational(0);
  }
  throw InternalError("unknown train class");
}

std::string to_string(TrackDirection direction) {
  switch (direction) {
    case TrackDirection::bidirectional: return "both";
    case TrackDirection::forward: return "forward";
    case TrackDirection::backward: return "backward";
  }
  throw InternalError("unknown track direction");
}

TrackDirection track_direction_from_string(const std::string& text) {
  if (text == "both" || text == "bidirectional") return TrackDirection::bidirectional;
  if (text == "forward") return TrackDirection::forward;
  if (text == "backward") return TrackDirection::backward;
  throw SchemaError("unknown track direction '" + text + "'");
}

int TrainInfo::position_of(int station) const {
  auto it = std::find(route.begin(), route.end(), station);
  return it == route.end() ? -1 : static_cast<int>(it - route.begin());
}

bool SegmentInfo::single_track() const {
  return tracks.size() == 1 && tracks.front().direction == TrackDirection::bidirectional;
}

int SegmentInfo::usable_tracks(int from_station) const {
  const bool forward = from_station == from;
  int count = 0;
  for (const auto& track : tracks) {
    if (track.direction == TrackDirection::bidirectional ||
        (forward && track.direction == TrackDirection::forward) ||
        (!forward && track.direction == TrackDirection::backward)) {
      ++count;
    }
  }
  return count;
}

namespace {

void check_id(const std::string& id, const std::string& what) {
  if (id.empty()) throw SchemaError(what + " with empty id");
  for (char c : id) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == ',') {
      throw SchemaError(what + " id '" + id + "' contains whitespace or a comma");
    }
  }
}

void check_nonnegative(int value, const std::string& what) {
  if (value < 0) throw ValidationError(what + " is negative (" + std::to_string(value) + ")");
}

std::vector<Track> effective_tracks(const Segment& segment, const std::vector<Closure>& closures) {
  std::vector<Track> tracks = segment.tracks;
  bool closed = false;
  for (const auto& closure : closures) {
    if (closure.segment != segment.id) continue;
    closed = true;
    std::erase_if(tracks, [&](const Track& t) {
      return std::find(closure.surviving.begin(), closure.surviving.end(), t.id) ==
             closure.surviving.end();
    });
  }
  if (closed) {
    if (tracks.empty()) {
      throw ValidationError("closures leave segment '" + segment.id + "' without tracks");
    }
    // Single-line working: survivors must carry both directions.
    const bool fwd = std::any_of(tracks.begin(), tracks.end(), [](const Track& t) {
      return t.direction != TrackDirection::backward;
    });
    const bool bwd = std::any_of(tracks.begin(), tracks.end(), [](const Track& t) {
      return t.direction != TrackDirection::forward;
    });
    if (!fwd || !bwd) {
      for (auto& t : tracks) t.direction = TrackDirection::bidirectional;
    }
  }
  return tracks;
}

}  // namespace

Instance Instance::create(InstanceData data) {
  auto state = std::make_shared<State>();
  State& st = *state;

  if (data.d_max <= 0) throw ValidationError("d_max must be positive");

  // Stations.
  for (std::size_t s = 0; s < data.stations.size(); ++s) {
    const auto& layout = data.stations[s];
    check_id(layout.id, "station");
    if (!st.station_ids.emplace(layout.id, static_cast<int>(s)).second) {
      throw SchemaError("duplicate station id '" + layout.id + "'");
    }
    check_nonnegative(layout.switch_time, "switch_time of station " + layout.id);
    std::set<std::string> seen;
    for (const auto& t : layout.tracks) {
      if (!seen.insert(t).second) {
        throw SchemaError("duplicate track '" + t + "' at station " + layout.id);
      }
    }
  }

  // Segments.
  for (std::size_t k = 0; k < data.segments.size(); ++k) {
    const auto& seg = data.segments[k];
    check_id(seg.id, "segment");
    if (!st.segment_ids.emplace(seg.id, static_cast<int>(k)).second) {
      throw SchemaError("duplicate segment id '" + seg.id + "'");
    }
    if (!st.station_ids.contains(seg.from) || !st.station_ids.contains(seg.to)) {
      throw ReferenceError("segment '" + seg.id + "' joins unknown station");
    }
    if (seg.from == seg.to) throw ValidationError("segment '" + seg.id + "' is a loop");
    if (seg.tracks.empty()) throw ValidationError("segment '" + seg.id + "' has no tracks");
    check_nonnegative(seg.headway, "headway of segment " + seg.id);
    if (seg.length < 0) throw ValidationError("negative length on segment " + seg.id);
    std::set<std::string> seen;
    for (const auto& t : seg.tracks) {
      if (!seen.insert(t.id).second) {
        throw SchemaError("duplicate track '" + t.id + "' on segment " + seg.id);
      }
    }
    const int a = st.station_ids.at(seg.from);
    const int b = st.station_ids.at(seg.to);
    const auto key = std::minmax(a, b);
    if (!st.segment_by_ends.emplace(std::pair{key.first, key.second}, static_cast<int>(k)).second) {
      throw ValidationError("two segments join " + seg.from + " and " + seg.to);
    }
  }

  // Disturbance references.
  for (const auto& closure : data.disturbance.closures) {
    auto it = st.segment_ids.find(closure.segment);
    if (it == st.segment_ids.end()) {
      throw ReferenceError("closure names unknown segment '" + closure.segment + "'");
    }
    if (closure.surviving.empty()) {
      throw ValidationError("closure of '" + closure.segment + "' leaves no track");
    }
    const auto& seg = data.segments[it->second];
    for (const auto& id : closure.surviving) {
      if (std::none_of(seg.tracks.begin(), seg.tracks.end(),
                       [&](const Track& t) { return t.id == id; })) {
        throw ReferenceError("closure of '" + closure.segment + "' keeps unknown track '" + id + "'");
      }
    }
  }

  for (std::size_t k = 0; k < data.segments.size(); ++k) {
    const auto& seg = data.segments[k];
    SegmentInfo info;
    info.index = static_cast<int>(k);
    info.id = seg.id;
    info.from = st.station_ids.at(seg.from);
    info.to = st.station_ids.at(seg.to);
    info.tracks = effective_tracks(seg, data.disturbance.closures);
    info.headway = seg.headway;
    info.length = seg.length;
    st.segments.push_back(std::move(info));
  }

  // Trains.
  const auto& tt = data.timetable;
  for (std::size_t j = 0; j < data.trains.size(); ++j) {
    const auto& spec = data.trains[j];
    check_id(spec.id, "train");
    if (!st.train_ids.emplace(spec.id, static_cast<int>(j)).second) {
      throw SchemaError("duplicate train id '" + spec.id + "'");
    }
    TrainInfo info;
    info.index = static_cast<int>(j);
    info.id = spec.id;
    info.cls = spec.cls;
    info.weight = spec.weight.value_or(default_weight(spec.cls));
    if (info.weight < 0) throw ValidationError("negative weight for train " + spec.id);
    if (spec.route.empty()) throw ValidationError("train '" + spec.id + "' has an empty route");
    std::set<int> visited;
    for (const auto& sid : spec.route) {
      auto it = st.station_ids.find(sid);
      if (it == st.station_ids.end()) {
        throw ReferenceError("train '" + spec.id + "' routed through unknown station '" + sid + "'");
      }
      if (!visited.insert(it->second).second) {
        throw ValidationError("train '" + spec.id + "' visits station '" + sid + "' twice");
      }
      info.route.push_back(it->second);
    }
    const int n = static_cast<int>(info.route.size());
    info.departures = spec.exits ? n : n - 1;
    if (info.departures == 0) {
      throw ValidationError("train '" + spec.id + "' has no departure inside the area");
    }
    for (int p = 0; p + 1 < n; ++p) {
      const int a = info.route[p];
      const int b = info.route[p + 1];
      auto it = st.segment_by_ends.find(std::pair{std::min(a, b), std::max(a, b)});
      if (it == st.segment_by_ends.end()) {
        throw ReferenceError("train '" + spec.id + "': no segment between " + spec.route[p] +
                             " and " + spec.route[p + 1]);
      }
      if (st.segments[it->second].usable_tracks(a) == 0) {
        throw ValidationError("train '" + spec.id + "': segment '" + st.segments[it->second].id +
                              "' has no track usable from " + spec.route[p]);
      }
      info.leg_segment.push_back(it->second);
      auto pit = tt.pass.find({spec.id, spec.route[p], spec.route[p + 1]});
      if (pit == tt.pass.end()) {
        throw SchemaError("missing running time for train '" + spec.id + "' " + spec.route[p] +
                          " -> " + spec.route[p + 1]);
      }
      check_nonnegative(pit->second, "running time of train " + spec.id);
      info.pass.push_back(pit->second);
    }
    info.dwell.assign(n, 0);
    info.delay.assign(n, 0);
    for (int p = 0; p < n; ++p) {
      if (auto it = tt.dwell.find({spec.id, spec.route[p]}); it != tt.dwell.end()) {
        check_nonnegative(it->second, "dwell of train " + spec.id);
        if (p > 0) info.dwell[p] = it->second;
      }
      if (auto it = data.disturbance.delays.find({spec.id, spec.route[p]});
          it != data.disturbance.delays.end()) {
        check_nonnegative(it->second, "delay of train " + spec.id);
        if (p >= info.departures) {
          throw ValidationError("delay of train '" + spec.id + "' at '" + spec.route[p] +
                                "' where it does not depart");
        }
        info.delay[p] = it->second;
      }
    }
    for (int p = 0; p < info.departures; ++p) {
      auto it = tt.departure.find({spec.id, spec.route[p]});
      if (it == tt.departure.end()) {
        throw SchemaError("missing scheduled departure of train '" + spec.id + "' at '" +
                          spec.route[p] + "'");
      }
      check_nonnegative(it->second, "scheduled departure of train " + spec.id);
      info.sigma.push_back(it->second);
    }
    for (int p = 1; p < info.departures; ++p) {
      const int earliest = info.sigma[p - 1] + info.pass[p - 1] + info.dwell[p];
      if (info.sigma[p] < earliest) {
        throw TemporalError("train '" + spec.id + "' scheduled at " + spec.route[p] + " at " +
                            std::to_string(info.sigma[p]) + " but cannot depart before " +
                            std::to_string(earliest));
      }
    }
    st.trains.push_back(std::move(info));
  }

  // Dangling timetable keys.
  auto require_train_station = [&](const TrainStation& key, const std::string& what) {
    auto jt = st.train_ids.find(key.first);
    if (jt == st.train_ids.end()) throw ReferenceError(what + " names unknown train '" + key.first + "'");
    auto sit = st.station_ids.find(key.second);
    if (sit == st.station_ids.end()) {
      throw ReferenceError(what + " names unknown station '" + key.second + "'");
    }
    const int pos = st.trains[jt->second].position_of(sit->second);
    if (pos < 0) {
      throw ReferenceError(what + ": train '" + key.first + "' does not visit '" + key.second + "'");
    }
    return pos;
  };
  for (const auto& [key, value] : tt.departure) {
    const int pos = require_train_station(key, "scheduled departure");
    if (!st.trains[st.train_ids.at(key.first)].has_departure(pos)) {
      throw ValidationError("scheduled departure for train '" + key.first + "' at its terminal '" +
                            key.second + "'");
    }
  }
  for (const auto& [key, value] : tt.dwell) require_train_station(key, "dwell time");
  for (const auto& [key, value] : data.disturbance.delays) require_train_station(key, "delay");
  for (const auto& [key, value] : tt.pass) {
    const auto& [train, from, to] = key;
    const int p = require_train_station({train, from}, "running time");
    const auto& info = st.trains[st.train_ids.at(train)];
    if (!st.station_ids.contains(to)) {
      throw ReferenceError("running time names unknown station '" + to + "'");
    }
    if (p + 1 >= static_cast<int>(info.route.size()) ||
        info.route[p + 1] != st.station_ids.at(to)) {
      throw ReferenceError("running time for train '" + train + "' on a leg it does not run");
    }
  }
  for (const auto& [key, value] : tt.headway) {
    const auto& [leader, follower, from, to] = key;
    for (const auto& id : {leader, follower}) {
      if (!st.train_ids.contains(id)) throw ReferenceError("headway names unknown train '" + id + "'");
    }
    for (const auto& id : {from, to}) {
      if (!st.station_ids.contains(id)) throw ReferenceError("headway names unknown station '" + id + "'");
    }
    check_nonnegative(value, "headway override");
    st.headway_override[{st.train_ids.at(leader), st.train_ids.at(follower), st.station_ids.at(from),
                         st.station_ids.at(to)}] = value;
  }
  for (const auto& [key, value] : tt.switch_time) {
    const auto& [first, second, station] = key;
    for (const auto& id : {first, second}) {
      if (!st.train_ids.contains(id)) throw ReferenceError("switch time names unknown train '" + id + "'");
    }
    if (!st.station_ids.contains(station)) {
      throw ReferenceError("switch time names unknown station '" + station + "'");
    }
    check_nonnegative(value, "switch time override");
    st.switch_override[{st.train_ids.at(first), st.train_ids.at(second), st.station_ids.at(station)}] = value;
  }

  // Station layouts.
  for (std::size_t s = 0; s < data.stations.size(); ++s) {
    const auto& layout = data.stations[s];
    StationInfo info;
    info.index = static_cast<int>(s);
    info.id = layout.id;
    info.depot = layout.depot;
    info.tracks = layout.tracks;
    info.switch_time = layout.switch_time;
    info.planned_track.assign(st.trains.size(), -1);
    for (const auto& [train, track] : layout.planned_track) {
      auto jt = st.train_ids.find(train);
      if (jt == st.train_ids.end()) {
        throw ReferenceError("station '" + layout.id + "' plans unknown train '" + train + "'");
      }
      if (st.trains[jt->second].position_of(info.index) < 0) {
        throw ReferenceError("station '" + layout.id + "' plans train '" + train +
                             "' which does not visit it");
      }
      auto tt_it = std::find(layout.tracks.begin(), layout.tracks.end(), track);
      if (tt_it == layout.tracks.end()) {
        throw ReferenceError("station '" + layout.id + "' plans unknown track '" + track + "'");
      }
      info.planned_track[jt->second] = static_cast<int>(tt_it - layout.tracks.begin());
    }
    if (!layout.tracks.empty() && !layout.depot) {
      for (const auto& train : st.trains) {
        const int pos = train.position_of(info.index);
        if (pos >= 0 && train.has_arrival(pos) && train.has_departure(pos) &&
            info.planned_track[train.index] < 0) {
          throw ValidationError("train '" + train.id + "' stops at '" + layout.id +
                                "' without a planned track");
        }
      }
    }
    std::set<std::string> group_names;
    for (const auto& group : layout.switch_groups) {
      if (!group_names.insert(group.name).second) {
        throw SchemaError("duplicate switch group '" + group.name + "' at " + layout.id);
      }
      SwitchGroupInfo g;
      g.name = group.name;
      for (const auto& member : group.members) {
        auto jt = st.train_ids.find(member.train);
        if (jt == st.train_ids.end()) {
          throw ReferenceError("switch group '" + group.name + "' names unknown train '" +
                               member.train + "'");
        }
        const auto& train = st.trains[jt->second];
        const int pos = train.position_of(info.index);
        if (pos < 0) {
          throw ReferenceError("switch group '" + group.name + "' at '" + layout.id +
                               "' lists train '" + member.train + "' not routed through it");
        }
        if (member.movement == Movement::out && !train.has_departure(pos)) {
          throw ValidationError("train '" + member.train + "' does not depart from '" + layout.id + "'");
        }
        if (member.movement == Movement::in && !train.has_arrival(pos)) {
          throw ValidationError("train '" + member.train + "' does not arrive at '" + layout.id + "'");
        }
        g.members.emplace_back(jt->second, member.movement);
      }
      info.switch_groups.push_back(std::move(g));
    }
    st.stations.push_back(std::move(info));
  }

  // Rolling stock turns.
  for (const auto& turn : tt.turns) {
    TurnInfo info;
    info.station = st.station_ids.contains(turn.station) ? st.station_ids.at(turn.station) : -1;
    if (info.station < 0) throw ReferenceError("turn at unknown station '" + turn.station + "'");
    for (const auto& id : {turn.terminating, turn.continuing}) {
      if (!st.train_ids.contains(id)) throw ReferenceError("turn names unknown train '" + id + "'");
    }
    info.terminating = st.train_ids.at(turn.terminating);
    info.continuing = st.train_ids.at(turn.continuing);
    info.minutes = turn.minutes;
    check_nonnegative(turn.minutes, "turnaround time");
    const auto& term = st.trains[info.terminating];
    const auto& cont = st.trains[info.continuing];
    if (term.route.back() != info.station || term.departures == static_cast<int>(term.route.size())) {
      throw ValidationError("train '" + turn.terminating + "' does not terminate at '" + turn.station + "'");
    }
    if (cont.route.front() != info.station) {
      throw ValidationError("train '" + turn.continuing + "' does not start at '" + turn.station + "'");
    }
    if (info.terminating == info.continuing) throw ValidationError("train turns into itself");
    st.turns.push_back(info);
  }

  st.data = std::move(data);
  return Instance(std::move(state));
}

int Instance::train_index(const std::string& id) const {
  auto it = state_->train_ids.find(id);
  if (it == state_->train_ids.end()) throw ReferenceError("unknown train '" + id + "'");
  return it->second;
}

int Instance::station_index(const std::string& id) const {
  auto it = state_->station_ids.find(id);
  if (it == state_->station_ids.end()) throw ReferenceError("unknown station '" + id + "'");
  return it->second;
}

int Instance::segment_index(const std::string& id) const {
  auto it = state_->segment_ids.find(id);
  if (it == state_->segment_ids.end()) throw ReferenceError("unknown segment '" + id + "'");
  return it->second;
}

int Instance::segment_between(int a, int b) const {
  auto it = state_->segment_by_ends.find(std::pair{std::min(a, b), std::max(a, b)});
  return it == state_->segment_by_ends.end() ? -1 : it->second;
}

int Instance::headway(int leader, int follower, int from, int to) const {
  if (auto it = state_->headway_override.find({leader, follower, from, to});
      it != state_->headway_override.end()) {
    return it->second;
  }
  const int k = segment_between(from, to);
  if (k < 0) throw ReferenceError("no segment for headway lookup");
  return state_->segments[k].headway;
}

int Instance::switch_time(int first, int second, int station) const {
  if (auto it = state_->switch_override.find({first, second, station});
      it != state_->switch_override.end()) {
    return it->second;
  }
  return state_->stations.at(station).switch_time;
}

Instance Instance::with_d_max(int d_max) const {
  InstanceData copy = data();
  copy.d_max = d_max;
  return create(std::move(copy));
}

Instance apply_disturbance(const Instance& base, const Disturbance& d) {
  if (d.empty()) return base;
  InstanceData data = base.data();
  for (const auto& [key, minutes] : d.delays) {
    if (minutes < 0) throw ValidationError("negative delay for train " + key.first);
    data.disturbance.delays[key] += minutes;
  }
  for (const auto& closure : d.closures) data.disturbance.closures.push_back(closure);
  return Instance::create(std::move(data));
}

}  // namespace railsched
