#include "railsched/instance_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "railsched/error.hpp"

namespace railsched {

using nlohmann::json;

namespace {

const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw SchemaError(path + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path + ": missing field '" + key + "'");
  return *it;
}

int as_int(const json& value, const std::string& path) {
  if (!value.is_number_integer()) throw SchemaError(path + ": expected an integer");
  return value.get<int>();
}

std::string as_string(const json& value, const std::string& path) {
  if (!value.is_string()) throw SchemaError(path + ": expected a string");
  return value.get<std::string>();
}

bool as_bool(const json& value, const std::string& path) {
  if (!value.is_boolean()) throw SchemaError(path + ": expected a boolean");
  return value.get<bool>();
}

const json& as_array(const json& value, const std::string& path) {
  if (!value.is_array()) throw SchemaError(path + ": expected an array");
  return value;
}

int get_int(const json& obj, const char* key, const std::string& path) {
  return as_int(require(obj, key, path), path + "." + key);
}

std::string get_string(const json& obj, const char* key, const std::string& path) {
  return as_string(require(obj, key, path), path + "." + key);
}

template <typename F>
void for_each_item(const json& obj, const char* key, const std::string& path, bool required, F&& f) {
  if (!obj.contains(key)) {
    if (required) throw SchemaError(path + ": missing field '" + key + "'");
    return;
  }
  const auto& arr = as_array(obj.at(key), path + "." + key);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    f(arr[i], path + "." + key + "[" + std::to_string(i) + "]");
  }
}

template <typename Map, typename Key>
void insert_unique(Map& map, Key key, int value, const std::string& path) {
  if (!map.emplace(std::move(key), value).second) throw SchemaError(path + ": duplicate entry");
}

Rational parse_weight(const json& value, const std::string& path) {
  if (value.is_number_integer()) return Rational(value.get<std::int64_t>());
  if (value.is_number()) return rational_from_decimal(value.get<double>());
  if (value.is_string()) return parse_rational(value.get<std::string>());
  throw SchemaError(path + ": expected a number or a rational string");
}

}  // namespace

InstanceData parse_instance_data(std::string_view document) {
  json root;
  try {
    root = json::parse(document);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("malformed instance document: ") + e.what());
  }
  const std::string p = "$";
  if (!root.is_object()) throw SchemaError("$: expected an object");
  static const char* known[] = {"schema_version", "d_max", "stations", "segments",
                                "trains", "timetable", "disturbance"};
  for (const auto& [key, value] : root.items()) {
    if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
      throw SchemaError("$: unknown field '" + key + "'");
    }
  }
  const int version = get_int(root, "schema_version", p);
  if (version != kSchemaVersion) {
    throw SchemaError("$: unsupported schema_version " + std::to_string(version));
  }

  InstanceData data;
  data.d_max = get_int(root, "d_max", p);

  for_each_item(root, "stations", p, true, [&](const json& item, const std::string& path) {
    StationLayout layout;
    layout.id = get_string(item, "id", path);
    if (item.contains("depot")) layout.depot = as_bool(item.at("depot"), path + ".depot");
    if (item.contains("switch_time")) layout.switch_time = as_int(item.at("switch_time"), path + ".switch_time");
    for_each_item(item, "tracks", path, false, [&](const json& t, const std::string& tp) {
      layout.tracks.push_back(as_string(t, tp));
    });
    if (item.contains("planned_tracks")) {
      const auto& planned = item.at("planned_tracks");
      if (!planned.is_object()) throw SchemaError(path + ".planned_tracks: expected an object");
      for (const auto& [train, track] : planned.items()) {
        layout.planned_track[train] = as_string(track, path + ".planned_tracks." + train);
      }
    }
    for_each_item(item, "switch_groups", path, false, [&](const json& g, const std::string& gp) {
      SwitchGroup group;
      group.name = get_string(g, "name", gp);
      for_each_item(g, "members", gp, true, [&](const json& m, const std::string& mp) {
        SwitchMember member;
        member.train = get_string(m, "train", mp);
        const auto movement = get_string(m, "movement", mp);
        if (movement == "in") member.movement = Movement::in;
        else if (movement == "out") member.movement = Movement::out;
        else throw SchemaError(mp + ".movement: expected 'in' or 'out'");
        group.members.push_back(std::move(member));
      });
      layout.switch_groups.push_back(std::move(group));
    });
    data.stations.push_back(std::move(layout));
  });

  for_each_item(root, "segments", p, true, [&](const json& item, const std::string& path) {
    Segment seg;
    seg.id = get_string(item, "id", path);
    seg.from = get_string(item, "from", path);
    seg.to = get_string(item, "to", path);
    seg.headway = get_int(item, "headway", path);
    if (item.contains("length")) {
      const auto& len = item.at("length");
      if (!len.is_number()) throw SchemaError(path + ".length: expected a number");
      seg.length = len.get<double>();
    }
    for_each_item(item, "tracks", path, true, [&](const json& t, const std::string& tp) {
      Track track;
      track.id = get_string(t, "id", tp);
      track.direction = track_direction_from_string(get_string(t, "direction", tp));
      seg.tracks.push_back(std::move(track));
    });
    data.segments.push_back(std::move(seg));
  });

  for_each_item(root, "trains", p, true, [&](const json& item, const std::string& path) {
    TrainSpec train;
    train.id = get_string(item, "id", path);
    train.cls = train_class_from_string(get_string(item, "class", path));
    if (item.contains("weight")) train.weight = parse_weight(item.at("weight"), path + ".weight");
    if (item.contains("exits")) train.exits = as_bool(item.at("exits"), path + ".exits");
    for_each_item(item, "route", path, true, [&](const json& s, const std::string& sp) {
      train.route.push_back(as_string(s, sp));
    });
    data.trains.push_back(std::move(train));
  });

  const auto& tt = require(root, "timetable", p);
  const std::string tp = p + ".timetable";
  auto& timetable = data.timetable;
  for_each_item(tt, "departures", tp, true, [&](const json& item, const std::string& path) {
    insert_unique(timetable.departure,
                  TrainStation{get_string(item, "train", path), get_string(item, "station", path)},
                  get_int(item, "time", path), path);
  });
  for_each_item(tt, "dwell", tp, false, [&](const json& item, const std::string& path) {
    insert_unique(timetable.dwell,
                  TrainStation{get_string(item, "train", path), get_string(item, "station", path)},
                  get_int(item, "minutes", path), path);
  });
  for_each_item(tt, "pass", tp, true, [&](const json& item, const std::string& path) {
    insert_unique(timetable.pass,
                  TrainLeg{get_string(item, "train", path), get_string(item, "from", path),
                           get_string(item, "to", path)},
                  get_int(item, "minutes", path), path);
  });
  for_each_item(tt, "headway", tp, false, [&](const json& item, const std::string& path) {
    insert_unique(timetable.headway,
                  HeadwayKey{get_string(item, "leader", path), get_string(item, "follower", path),
                             get_string(item, "from", path), get_string(item, "to", path)},
                  get_int(item, "minutes", path), path);
  });
  for_each_item(tt, "switch", tp, false, [&](const json& item, const std::string& path) {
    insert_unique(timetable.switch_time,
                  SwitchKey{get_string(item, "first", path), get_string(item, "second", path),
                            get_string(item, "station", path)},
                  get_int(item, "minutes", path), path);
  });
  for_each_item(tt, "turns", tp, false, [&](const json& item, const std::string& path) {
    timetable.turns.push_back(TurnSpec{get_string(item, "station", path),
                                       get_string(item, "terminating", path),
                                       get_string(item, "continuing", path),
                                       get_int(item, "minutes", path)});
  });

  if (root.contains("disturbance")) {
    const auto& dist = root.at("disturbance");
    const std::string dp = p + ".disturbance";
    if (!dist.is_object()) throw SchemaError(dp + ": expected an object");
    for_each_item(dist, "delays", dp, false, [&](const json& item, const std::string& path) {
      insert_unique(data.disturbance.delays,
                    TrainStation{get_string(item, "train", path), get_string(item, "station", path)},
                    get_int(item, "minutes", path), path);
    });
    for_each_item(dist, "closures", dp, false, [&](const json& item, const std::string& path) {
      Closure closure;
      closure.segment = get_string(item, "segment", path);
      for_each_item(item, "surviving", path, true, [&](const json& t, const std::string& sp) {
        closure.surviving.push_back(as_string(t, sp));
      });
      data.disturbance.closures.push_back(std::move(closure));
    });
  }
  return data;
}

Instance load_instance(std::string_view document) {
  return Instance::create(parse_instance_data(document));
}

Instance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open instance file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return load_instance(buffer.str());
}

std::string serialize_instance_data(const InstanceData& data) {
  json root = json::object();
  root["schema_version"] = kSchemaVersion;
  root["d_max"] = data.d_max;

  json stations = json::array();
  for (const auto& layout : data.stations) {
    json s = {{"id", layout.id}, {"depot", layout.depot}, {"switch_time", layout.switch_time},
              {"tracks", layout.tracks}};
    json planned = json::object();
    for (const auto& [train, track] : layout.planned_track) planned[train] = track;
    s["planned_tracks"] = planned;
    json groups = json::array();
    for (const auto& g : layout.switch_groups) {
      json members = json::array();
      for (const auto& m : g.members) {
        members.push_back({{"train", m.train}, {"movement", m.movement == Movement::in ? "in" : "out"}});
      }
      groups.push_back({{"name", g.name}, {"members", members}});
    }
    s["switch_groups"] = groups;
    stations.push_back(std::move(s));
  }
  root["stations"] = std::move(stations);

  json segments = json::array();
  for (const auto& seg : data.segments) {
    json tracks = json::array();
    for (const auto& t : seg.tracks) tracks.push_back({{"id", t.id}, {"direction", to_string(t.direction)}});
    segments.push_back({{"id", seg.id}, {"from", seg.from}, {"to", seg.to}, {"headway", seg.headway},
                        {"length", seg.length}, {"tracks", tracks}});
  }
  root["segments"] = std::move(segments);

  json trains = json::array();
  for (const auto& train : data.trains) {
    json t = {{"id", train.id}, {"class", to_string(train.cls)}, {"route", train.route},
              {"exits", train.exits}};
    if (train.weight) t["weight"] = to_string(*train.weight);
    trains.push_back(std::move(t));
  }
  root["trains"] = std::move(trains);

  const auto& tt = data.timetable;
  json timetable = json::object();
  json departures = json::array();
  for (const auto& [key, time] : tt.departure) {
    departures.push_back({{"train", key.first}, {"station", key.second}, {"time", time}});
  }
  timetable["departures"] = std::move(departures);
  json dwell = json::array();
  for (const auto& [key, minutes] : tt.dwell) {
    dwell.push_back({{"train", key.first}, {"station", key.second}, {"minutes", minutes}});
  }
  timetable["dwell"] = std::move(dwell);
  json pass = json::array();
  for (const auto& [key, minutes] : tt.pass) {
    const auto& [train, from, to] = key;
    pass.push_back({{"train", train}, {"from", from}, {"to", to}, {"minutes", minutes}});
  }
  timetable["pass"] = std::move(pass);
  json headway = json::array();
  for (const auto& [key, minutes] : tt.headway) {
    const auto& [leader, follower, from, to] = key;
    headway.push_back({{"leader", leader}, {"follower", follower}, {"from", from}, {"to", to},
                       {"minutes", minutes}});
  }
  timetable["headway"] = std::move(headway);
  json sw = json::array();
  for (const auto& [key, minutes] : tt.switch_time) {
    const auto& [first, second, station] = key;
    sw.push_back({{"first", first}, {"second", second}, {"station", station}, {"minutes", minutes}});
  }
  timetable["switch"] = std::move(sw);
  json turns = json::array();
  for (const auto& turn : tt.turns) {
    turns.push_back({{"station", turn.station}, {"terminating", turn.terminating},
                     {"continuing", turn.continuing}, {"minutes", turn.minutes}});
  }
  timetable["turns"] = std::move(turns);
  root["timetable"] = std::move(timetable);

  json delays = json::array();
  for (const auto& [key, minutes] : data.disturbance.delays) {
    delays.push_back({{"train", key.first}, {"station", key.second}, {"minutes", minutes}});
  }
  json closures = json::array();
  for (const auto& c : data.disturbance.closures) {
    closures.push_back({{"segment", c.segment}, {"surviving", c.surviving}});
  }
  root["disturbance"] = {{"delays", delays}, {"closures", closures}};
  return root.dump(2) + "\n";
}

std::string serialize_instance(const Instance& instance) {
  return serialize_instance_data(instance.data());
}

}  // namespace railsched
