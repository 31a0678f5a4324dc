#include "railsched/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "railsched/error.hpp"

namespace railsched {

namespace {

constexpr double kColocated = 0.25;

std::string xml_escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!line.empty() && line.back() == sep) parts.emplace_back();
  return parts;
}

}  // namespace

TimeDistance time_distance(const Instance& instance, const Schedule& realized,
                           const std::vector<std::string>& corridor) {
  if (corridor.empty()) throw UsageError("empty corridor");
  if (static_cast<int>(realized.size()) != instance.num_trains()) throw UsageError("schedule does not cover every train");
  TimeDistance d;
  d.corridor = corridor;
  std::map<int, double> offset;
  double at = 0.0;
  for (std::size_t i = 0; i < corridor.size(); ++i) {
    const int s = instance.station_index(corridor[i]);
    if (offset.contains(s)) throw UsageError("station '" + corridor[i] + "' appears twice in the corridor");
    if (i > 0) {
      const int prev = instance.station_index(corridor[i - 1]);
      const int k = instance.segment_between(prev, s);
      if (k < 0) throw UsageError("no segment between '" + corridor[i - 1] + "' and '" + corridor[i] + "'");
      const double len = instance.segment(k).length;
      at += len > 0 ? len : kColocated;
    }
    offset[s] = at;
    d.offsets.push_back(at);
  }

  for (int j = 0; j < instance.num_trains(); ++j) {
    const auto& train = instance.train(j);
    if (static_cast<int>(realized[j].size()) != train.departures) {
      throw UsageError("schedule of train '" + train.id + "' has the wrong number of departures");
    }
    for (const char* path : {"scheduled", "realized"}) {
      const bool sched = path[0] == 's';
      auto dep = [&](int p) { return sched ? train.sigma[p] : realized[j][p]; };
      int vertex = 0;
      for (int p = 0; p < static_cast<int>(train.route.size()); ++p) {
        auto it = offset.find(train.route[p]);
        if (it == offset.end()) continue;
        const std::string& sid = instance.station(train.route[p]).id;
        if (train.has_arrival(p) && train.has_departure(p - 1)) {
          d.vertices.push_back({train.id, path, vertex++, sid, "arr", dep(p - 1) + train.pass[p - 1], it->second});
        }
        if (train.has_departure(p)) d.vertices.push_back({train.id, path, vertex++, sid, "dep", dep(p), it->second});
      }
    }
  }
  return d;
}

void write_time_distance_csv(std::ostream& out, const TimeDistance& d) {
  out << "# corridor";
  for (std::size_t i = 0; i < d.corridor.size(); ++i) out << ' ' << d.corridor[i] << '=' << d.offsets[i];
  out << "\ntrain,path,vertex,station,event,time,distance\n";
  for (const auto& v : d.vertices) {
    out << v.train << ',' << v.path << ',' << v.vertex << ',' << v.station << ',' << v.event << ',' << v.time << ','
        << v.distance << '\n';
  }
}

TimeDistance read_time_distance_csv(std::istream& in) {
  TimeDistance d;
  std::string line;
  bool header = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind("# corridor", 0) == 0) {
      std::istringstream words(line.substr(10));
      std::string w;
      while (words >> w) {
        const auto eq = w.rfind('=');
        if (eq == std::string::npos) throw SchemaError("malformed corridor entry '" + w + "'");
        d.corridor.push_back(w.substr(0, eq));
        d.offsets.push_back(std::stod(w.substr(eq + 1)));
      }
      continue;
    }
    if (line[0] == '#') continue;
    if (!header) {
      if (line != "train,path,vertex,station,event,time,distance") throw SchemaError("unexpected diagram header");
      header = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 7) throw SchemaError("line " + std::to_string(lineno) + ": expected 7 fields");
    try {
      d.vertices.push_back({f[0], f[1], std::stoi(f[2]), f[3], f[4], std::stoi(f[5]), std::stod(f[6])});
    } catch (const std::logic_error&) {
      throw SchemaError("line " + std::to_string(lineno) + ": malformed number");
    }
  }
  if (!header) throw SchemaError("missing diagram header");
  return d;
}

void write_time_distance_svg(std::ostream& out, const TimeDistance& d, const std::string& title) {
  const double width = 960, height = 540, left = 90, right = 30, top = 50, bottom = 50;
  int t0 = 0, t1 = 60;
  if (!d.vertices.empty()) {
    auto [lo, hi] = std::minmax_element(d.vertices.begin(), d.vertices.end(),
                                        [](const auto& a, const auto& b) { return a.time < b.time; });
    t0 = lo->time - lo->time % 10 - (lo->time % 10 < 0 ? 10 : 0);
    t1 = std::max(t0 + 10, hi->time + 10 - ((hi->time % 10) + 10) % 10);
  }
  const double dmax = d.offsets.empty() ? 1.0 : std::max(d.offsets.back(), 1e-9);
  auto x = [&](double t) { return left + (t - t0) / (t1 - t0) * (width - left - right); };
  auto y = [&](double dist) { return top + dist / dmax * (height - top - bottom); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty()) out << "<text x=\"" << left << "\" y=\"22\" font-size=\"14\">" << xml_escape(title) << "</text>\n";

  const int step = (t1 - t0) > 240 ? 60 : (t1 - t0) > 90 ? 30 : 10;
  for (int t = t0; t <= t1; t += step) {
    out << "<line x1=\"" << x(t) << "\" y1=\"" << top << "\" x2=\"" << x(t) << "\" y2=\"" << height - bottom
        << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << x(t) << "\" y=\"" << height - bottom + 16 << "\" text-anchor=\"middle\">" << t
        << "</text>\n";
  }
  for (std::size_t i = 0; i < d.corridor.size(); ++i) {
    out << "<line x1=\"" << left << "\" y1=\"" << y(d.offsets[i]) << "\" x2=\"" << width - right << "\" y2=\""
        << y(d.offsets[i]) << "\" stroke=\"#999\"/>\n";
    out << "<text x=\"" << left - 8 << "\" y=\"" << y(d.offsets[i]) + 4 << "\" text-anchor=\"end\">"
        << xml_escape(d.corridor[i]) << "</text>\n";
  }
  out << "<text x=\"" << (left + width - right) / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\">time [min]</text>\n";

  std::map<std::string, int> corridor_index;
  for (std::size_t i = 0; i < d.corridor.size(); ++i) corridor_index[d.corridor[i]] = static_cast<int>(i);

  // Consecutive vertices of one train and path form a polyline unless the
  // train left the corridor in between.
  std::size_t i = 0;
  std::map<std::string, bool> labelled;
  while (i < d.vertices.size()) {
    std::size_t k = i + 1;
    while (k < d.vertices.size() && d.vertices[k].train == d.vertices[i].train &&
           d.vertices[k].path == d.vertices[i].path) {
      const auto a = corridor_index.find(d.vertices[k - 1].station);
      const auto b = corridor_index.find(d.vertices[k].station);
      if (a == corridor_index.end() || b == corridor_index.end() || std::abs(a->second - b->second) > 1) break;
      ++k;
    }
    const bool sched = d.vertices[i].path == "scheduled";
    out << "<polyline fill=\"none\" stroke=\"" << (sched ? "#d62728" : "#2ca02c") << "\" stroke-width=\""
        << (sched ? 1.2 : 1.8) << '"' << (sched ? " stroke-dasharray=\"6 4\"" : "") << " points=\"";
    for (std::size_t v = i; v < k; ++v) {
      out << (v > i ? " " : "") << x(d.vertices[v].time) << ',' << y(d.vertices[v].distance);
    }
    out << "\"><title>" << xml_escape(d.vertices[i].train) << ' ' << d.vertices[i].path << "</title></polyline>\n";
    if (!sched && !labelled[d.vertices[i].train]) {
      labelled[d.vertices[i].train] = true;
      out << "<text x=\"" << x(d.vertices[i].time) + 3 << "\" y=\"" << y(d.vertices[i].distance) - 3
          << "\" fill=\"#2ca02c\" font-size=\"9\">" << xml_escape(d.vertices[i].train) << "</text>\n";
    }
    i = k;
  }
  const double ly = top - 18;
  out << "<line x1=\"" << width - 260 << "\" y1=\"" << ly << "\" x2=\"" << width - 230 << "\" y2=\"" << ly
      << "\" stroke=\"#d62728\" stroke-dasharray=\"6 4\"/><text x=\"" << width - 225 << "\" y=\"" << ly + 4
      << "\">scheduled</text>\n";
  out << "<line x1=\"" << width - 140 << "\" y1=\"" << ly << "\" x2=\"" << width - 110 << "\" y2=\"" << ly
      << "\" stroke=\"#2ca02c\" stroke-width=\"1.8\"/><text x=\"" << width - 105 << "\" y=\"" << ly + 4
      << "\">realized</text>\n";
  out << "</svg>\n";
}

}  // namespace railsched
