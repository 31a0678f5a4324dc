#ifndef RAILSCHED_DIAGRAM_HPP
#define RAILSCHED_DIAGRAM_HPP

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "railsched/harness.hpp"
#include "railsched/instance.hpp"

namespace railsched {

struct DiagramVertex {
  std::string train;
  std::string path;  ///< "scheduled" or "realized"
  int vertex = 0;    ///< order along the train's polyline
  std::string station;
  std::string event;  ///< "arr" or "dep"
  int time = 0;
  double distance = 0.0;
  bool operator==(const DiagramVertex&) const = default;
};

struct TimeDistance {
  std::vector<std::string> corridor;
  std::vector<double> offsets;  ///< distance of each corridor station
  std::vector<DiagramVertex> vertices;
  bool operator==(const TimeDistance&) const = default;
};

/// Polylines of every train touching the corridor, for the timetable and for
/// `realized`. Corridor neighbours must share a segment; zero-length segments
/// are drawn 0.25 apart so co-located stations stay distinguishable.
TimeDistance time_distance(const Instance& instance, const Schedule& realized,
                           const std::vector<std::string>& corridor);

/// `train,path,vertex,station,event,time,distance`
void write_time_distance_csv(std::ostream& out, const TimeDistance& diagram);
/// Inverse of write_time_distance_csv; throws SchemaError on malformed rows.
TimeDistance read_time_distance_csv(std::istream& in);

/// Scheduled paths red dashed, realized paths green solid.
void write_time_distance_svg(std::ostream& out, const TimeDistance& diagram, const std::string& title = "");

}  // namespace railsched

#endif  // RAILSCHED_DIAGRAM_HPP
