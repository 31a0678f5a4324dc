#ifndef RAILSCHED_DERIVATION_HPP
#define RAILSCHED_DERIVATION_HPP

#include <compare>
#include <cstdint>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "railsched/instance.hpp"
#include "railsched/rational.hpp"

namespace railsched {

/// Earliest departures and the [lo, hi] window of every departure variable.
struct DerivedTimes {
  int d_max = 0;
  /// upsilon[j][p]: earliest departure of train j at departure position p.
  std::vector<std::vector<int>> upsilon;

  int lo(int train, int pos) const { return upsilon[train][pos]; }
  int hi(int train, int pos) const { return upsilon[train][pos] + d_max; }
  /// Earliest departure at a station, throws ReferenceError if the train has none there.
  int at(const Instance& instance, int train, int station) const;
};

DerivedTimes earliest_departures(const Instance& instance);

/// Either the departure of a train from a route position or its arrival there.
/// Arrivals are the previous departure plus the running time.
struct TimeRef {
  int train = 0;
  int pos = 0;
  bool arrival = false;
};

struct Window {
  int lo = 0;
  int hi = 0;
};

/// Window of a departure or arrival, given the departure windows.
Window window_of(const Instance& instance, const DerivedTimes& derived, const TimeRef& ref);

/// Ordered pair of train indices. In the symmetric families it is stored with
/// first < second; the ordered families keep their role order.
struct TrainPair {
  int first = 0;
  int second = 0;
  auto operator<=>(const TrainPair&) const = default;
};

inline TrainPair canonical_pair(int a, int b) { return a < b ? TrainPair{a, b} : TrainPair{b, a}; }

/// Consecutive station pair, oriented in travel direction.
struct Leg {
  int from = 0;
  int to = 0;
  auto operator<=>(const Leg&) const = default;
};

using StationPair = std::pair<int, int>;

struct IndexSets {
  std::map<int, std::vector<TurnInfo>> turn_pairs;  ///< per station
  std::set<TrainPair> close_pairs;
  std::set<TrainPair> headway_pairs;
  std::set<TrainPair> single_pairs;
  std::map<int, std::set<TrainPair>> track_pairs;
  std::map<int, std::set<TrainPair>> switch_out_pairs;
  /// (s, s') -> (j, j'): j departs s while j' arrives at s from s'. Role-ordered.
  std::map<StationPair, std::set<TrainPair>> switch_out_in_pairs;
  /// (s, s') -> pairs both arriving at s from s' with no passing possibility on the way.
  std::map<StationPair, std::set<TrainPair>> switch_in_noMP_pairs;
  /// (s, s') -> pairs arriving at s that may swap order before s; s' is the
  /// origin of the pair's first train.
  std::map<StationPair, std::set<TrainPair>> switch_in_MP_pairs;
  /// Consecutive station pairs run by both trains in the same direction.
  std::map<TrainPair, std::vector<Leg>> common_station_pairs;
  /// Single-track legs run by both in opposite directions, oriented by the first train.
  std::map<TrainPair, std::vector<Leg>> common_single_pairs;
  /// Consecutive station pairs of every route.
  std::vector<std::vector<Leg>> route_pairs;
};

/// True when the two trains can overtake or pass each other on the segment
/// joining `from` and `to` when both run from `from`.
bool passing_possible(const Instance& instance, int from, int to);

IndexSets build_index_sets(const Instance& instance, const DerivedTimes& derived);

/// Tabular dump of all families, one tuple per line.
void write_index_sets(std::ostream& out, const Instance& instance, const IndexSets& sets);

/// Smallest constant C such that  A >= B + tau - C  holds for every
/// A in [lo_a, hi_a] and B in [lo_b, hi_b]:  C = -lo_a + hi_b + tau.
std::int64_t big_M(std::int64_t lo_a, std::int64_t hi_a, std::int64_t lo_b, std::int64_t hi_b,
                   std::int64_t tau);

enum class TrackMode { double_track, single_track };

struct SizeEstimate {
  Rational t_count;
  Rational precedence_count;
  Rational constraint_count;
  Rational alpha;
  Rational n_meet;
  int num_trains = 0;
  int num_stations = 0;
  TrackMode track_mode = TrackMode::double_track;
};

/// Closed-form model size for a network where trains visit an `alpha` share of
/// the stations and meet `n_meet` other trains per station on average.
SizeEstimate estimate_size(int num_trains, int num_stations, const Rational& alpha,
                           const Rational& n_meet, TrackMode mode);

}  // namespace railsched

#endif  // RAILSCHED_DERIVATION_HPP
