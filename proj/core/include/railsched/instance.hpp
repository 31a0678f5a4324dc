#ifndef RAILSCHED_INSTANCE_HPP
#define RAILSCHED_INSTANCE_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "railsched/rational.hpp"

namespace railsched {

// ---------------------------------------------------------------------------
// Raw scenario data, keyed by the identifiers used in instance files.
// ---------------------------------------------------------------------------

enum class TrainClass { stopping, intercity, express, shunting };

std::string to_string(TrainClass cls);
TrainClass train_class_from_string(const std::string& text);

/// Priority weight used when a train does not override it.
Rational default_weight(TrainClass cls);

enum class TrackDirection {
  bidirectional,
  forward,   ///< only from the segment's `from` end to its `to` end
  backward,  ///< only from `to` to `from`
};

std::string to_string(TrackDirection direction);
TrackDirection track_direction_from_string(const std::string& text);

struct Track {
  std::string id;
  TrackDirection direction = TrackDirection::bidirectional;
  bool operator==(const Track&) const = default;
};

/// Line section between two decision stations.
struct Segment {
  std::string id;
  std::string from;
  std::string to;
  std::vector<Track> tracks;
  int headway = 0;      ///< default minimal headway for same-direction trains, minutes
  double length = 1.0;  ///< drawing distance only; 0 marks co-located stations
  bool operator==(const Segment&) const = default;
};

enum class Movement { in, out };

struct SwitchMember {
  std::string train;
  Movement movement = Movement::out;
  bool operator==(const SwitchMember&) const = default;
};

/// Interlocking area usable by one train at a time.
struct SwitchGroup {
  std::string name;
  std::vector<SwitchMember> members;
  bool operator==(const SwitchGroup&) const = default;
};

struct StationLayout {
  std::string id;
  bool depot = false;
  std::vector<std::string> tracks;
  std::map<std::string, std::string> planned_track;  ///< train -> station track
  std::vector<SwitchGroup> switch_groups;
  int switch_time = 0;  ///< default time to clear an interlocking area, minutes
  bool operator==(const StationLayout&) const = default;
};

struct TrainSpec {
  std::string id;
  TrainClass cls = TrainClass::stopping;
  std::optional<Rational> weight;  ///< overrides default_weight(cls)
  std::vector<std::string> route;  ///< every visited decision station, in order
  bool exits = false;  ///< keeps a departure at the last station (train leaves the area)
  bool operator==(const TrainSpec&) const = default;
};

using TrainStation = std::pair<std::string, std::string>;
using TrainLeg = std::tuple<std::string, std::string, std::string>;  // train, from, to
using HeadwayKey = std::tuple<std::string, std::string, std::string, std::string>;  // leader, follower, from, to
using SwitchKey = std::tuple<std::string, std::string, std::string>;  // first, second, station

struct TurnSpec {
  std::string station;
  std::string terminating;
  std::string continuing;
  int minutes = 0;
  bool operator==(const TurnSpec&) const = default;
};

struct Timetable {
  std::map<TrainStation, int> departure;  ///< scheduled departure
  std::map<TrainStation, int> dwell;      ///< minimal dwell, 0 when absent
  std::map<TrainLeg, int> pass;           ///< running time between consecutive stations
  std::map<HeadwayKey, int> headway;      ///< overrides the segment default
  std::map<SwitchKey, int> switch_time;   ///< overrides the station default
  std::vector<TurnSpec> turns;
  bool operator==(const Timetable&) const = default;
};

struct Closure {
  std::string segment;
  std::vector<std::string> surviving;  ///< track ids left open
  bool operator==(const Closure&) const = default;
};

struct Disturbance {
  std::map<TrainStation, int> delays;  ///< added to the technically feasible departure
  std::vector<Closure> closures;
  bool empty() const { return delays.empty() && closures.empty(); }
  bool operator==(const Disturbance&) const = default;
};

struct InstanceData {
  std::vector<StationLayout> stations;
  std::vector<Segment> segments;
  std::vector<TrainSpec> trains;
  Timetable timetable;
  Disturbance disturbance;
  int d_max = 40;
  bool operator==(const InstanceData&) const = default;
};

// ---------------------------------------------------------------------------
// Validated, index-based view used by every algorithm.
// ---------------------------------------------------------------------------

struct TrainInfo {
  int index = 0;
  std::string id;
  TrainClass cls = TrainClass::stopping;
  Rational weight;
  std::vector<int> route;        ///< station indices
  std::vector<int> leg_segment;  ///< segment of leg p (route[p] -> route[p+1])
  std::vector<int> pass;         ///< running time of leg p
  std::vector<int> dwell;        ///< minimal dwell at route position p (0 at p = 0)
  std::vector<int> sigma;        ///< scheduled departure at departure position p
  std::vector<int> delay;        ///< initial delay at route position p
  int departures = 0;            ///< positions 0..departures-1 carry a departure variable

  bool has_departure(int pos) const { return pos >= 0 && pos < departures; }
  bool has_arrival(int pos) const { return pos > 0 && pos < static_cast<int>(route.size()); }
  /// Route position of a station, or -1.
  int position_of(int station) const;
};

struct SegmentInfo {
  int index = 0;
  std::string id;
  int from = 0;
  int to = 0;
  std::vector<Track> tracks;  ///< after closures
  int headway = 0;
  double length = 1.0;

  /// Exactly one track and it is bidirectional.
  bool single_track() const;
  /// Tracks usable when travelling from station `from_station`.
  int usable_tracks(int from_station) const;
};

struct SwitchGroupInfo {
  std::string name;
  std::vector<std::pair<int, Movement>> members;  ///< (train index, movement)
};

struct StationInfo {
  int index = 0;
  std::string id;
  bool depot = false;
  std::vector<std::string> tracks;
  std::vector<int> planned_track;  ///< per train: index into tracks or -1
  std::vector<SwitchGroupInfo> switch_groups;
  int switch_time = 0;
};

struct TurnInfo {
  int station = 0;
  int terminating = 0;
  int continuing = 0;
  int minutes = 0;
};

/// Immutable validated scenario. Cheap to copy (shared state).
class Instance {
 public:
  /// Validates and indexes; throws SchemaError / ReferenceError / TemporalError /
  /// ValidationError on violations.
  static Instance create(InstanceData data);

  const InstanceData& data() const;
  int d_max() const;

  int num_trains() const;
  int num_stations() const;
  int num_segments() const;

  const TrainInfo& train(int j) const;
  const StationInfo& station(int s) const;
  const SegmentInfo& segment(int k) const;
  const std::vector<TurnInfo>& turns() const;

  int train_index(const std::string& id) const;    ///< throws ReferenceError
  int station_index(const std::string& id) const;  ///< throws ReferenceError
  int segment_index(const std::string& id) const;  ///< throws ReferenceError
  /// Segment joining two stations in either orientation, or -1.
  int segment_between(int a, int b) const;

  /// Headway for `follower` running behind `leader` over the leg from -> to.
  int headway(int leader, int follower, int from, int to) const;
  /// Time `first` needs to clear the interlocking of `station` ahead of `second`.
  int switch_time(int first, int second, int station) const;

  /// Same instance with a replaced delay bound.
  Instance with_d_max(int d_max) const;

  bool operator==(const Instance& other) const { return data() == other.data(); }

 private:
  struct State;
  explicit Instance(std::shared_ptr<const State> state) : state_(std::move(state)) {}
  std::shared_ptr<const State> state_;
};

struct Instance::State {
  InstanceData data;
  std::vector<TrainInfo> trains;
  std::vector<StationInfo> stations;
  std::vector<SegmentInfo> segments;
  std::vector<TurnInfo> turns;
  std::map<std::string, int> train_ids;
  std::map<std::string, int> station_ids;
  std::map<std::string, int> segment_ids;
  std::map<std::pair<int, int>, int> segment_by_ends;
  std::map<std::tuple<int, int, int, int>, int> headway_override;
  std::map<std::tuple<int, int, int>, int> switch_override;
};

inline const InstanceData& Instance::data() const { return state_->data; }
inline int Instance::d_max() const { return state_->data.d_max; }
inline int Instance::num_trains() const { return static_cast<int>(state_->trains.size()); }
inline int Instance::num_stations() const { return static_cast<int>(state_->stations.size()); }
inline int Instance::num_segments() const { return static_cast<int>(state_->segments.size()); }
inline const TrainInfo& Instance::train(int j) const { return state_->trains[j]; }
inline const StationInfo& Instance::station(int s) const { return state_->stations[s]; }
inline const SegmentInfo& Instance::segment(int k) const { return state_->segments[k]; }
inline const std::vector<TurnInfo>& Instance::turns() const { return state_->turns; }

/// Returns `base` with `d` merged into its disturbance: delays add up, closures
/// intersect the surviving track sets. `base` is left untouched.
Instance apply_disturbance(const Instance& base, const Disturbance& d);

}  // namespace railsched

#endif  // RAILSCHED_INSTANCE_HPP
