#ifndef RAILSCHED_GENERATE_HPP
#define RAILSCHED_GENERATE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "railsched/instance.hpp"

namespace railsched {

enum class LineKind { double_track, double_with_closure, single_track };

std::string to_string(LineKind kind);
LineKind line_kind_from_string(const std::string& text);

/// One train per cycle: direction, class and minute offset within the cycle.
struct TrainRequest {
  bool forward = true;
  TrainClass cls = TrainClass::stopping;
  int offset = 0;
};

struct LineOptions {
  LineKind kind = LineKind::double_track;
  int stations = 3;
  std::vector<TrainRequest> trains;  ///< repeated every cycle
  int cycle = 60;
  int horizon = 180;
  int max_trains = -1;  ///< keep only the first trains in start order; -1 keeps all
  std::uint64_t seed = 1;
  int d_max = 40;
  int headway = 2;
  int max_wait = -1;  ///< per-train insertion delay limit, default one cycle
};

/// Cyclic timetable on a straight line S0 .. S(n-1), made conflict-free by
/// greedy insertion. Throws InfeasibleGeneration when a train cannot be placed.
Instance gen_synthetic_line(const LineOptions& options);

/// `count` trains per cycle alternating direction with evenly spread offsets and classes
/// cycling stopping, intercity, express.
std::vector<TrainRequest> even_train_pattern(int count, int cycle);

/// Adds `count` entry or en-route delays of 1..max_minutes to distinct trains.
Instance with_random_delays(const Instance& base, std::uint64_t seed, int count, int max_minutes);

struct RandomNetworkOptions {
  int max_trains = 4;
  int max_stations = 4;
  int min_d_max = 3;
  int max_d_max = 10;
  bool disturb = true;
};

/// Small random network with mixed tracks, interlocking groups, turns and
/// delays; used by property tests. Always a valid instance.
Instance random_network(std::uint64_t seed, const RandomNetworkOptions& options = {});

}  // namespace railsched

#endif  // RAILSCHED_GENERATE_HPP
