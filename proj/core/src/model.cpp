#include "railsched/model.hpp"

#include <cctype>
#include <cstdlib>
#include <numeric>
#include <set>

#include "railsched/error.hpp"

namespace railsched {

std::string_view to_string(Family family) {
  switch (family) {
    case Family::running: return "running";
    case Family::headway: return "headway";
    case Family::single: return "single";
    case Family::dwell: return "dwell";
    case Family::timetable: return "timetable";
    case Family::track: return "track";
    case Family::switch_out: return "switch_out";
    case Family::switch_out_in: return "switch_out_in";
    case Family::switch_in_noMP: return "switch_in_noMP";
    case Family::switch_in_MP: return "switch_in_MP";
    case Family::turn: return "turn";
    case Family::order_link: return "order_link";
  }
  return "?";
}

int DecisionModel::find_binary(BinaryKind kind, int first, int second, int station, int other_station) const {
  auto it = binary_index.find({kind, first, second, station, other_station});
  return it == binary_index.end() ? -1 : it->second;
}

std::map<Family, int> DecisionModel::family_counts() const {
  std::map<Family, int> counts;
  for (const auto& c : constraints) ++counts[c.family];
  return counts;
}

namespace {

std::string sanitize(const std::string& id) {
  std::string out;
  for (char c : id) out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  return out;
}

class Builder {
 public:
  Builder(const Instance& instance, const DerivedTimes& derived) : m_{instance, derived} {}

  DecisionModel take() { return std::move(m_); }

  const Instance& inst() const { return m_.instance; }

  void declare_times() {
    const auto& in = inst();
    m_.time_var_of.resize(in.num_trains());
    for (int j = 0; j < in.num_trains(); ++j) {
      const auto& train = in.train(j);
      for (int p = 0; p < train.departures; ++p) {
        TimeVar v;
        v.train = j;
        v.pos = p;
        v.station = train.route[p];
        v.lo = m_.derived.lo(j, p);
        v.hi = m_.derived.hi(j, p);
        v.name = unique("t_" + sanitize(train.id) + "_" + sanitize(in.station(v.station).id));
        m_.time_var_of[j].push_back(static_cast<int>(m_.time_vars.size()));
        m_.time_vars.push_back(std::move(v));
      }
    }
  }

  int binary(BinaryKind kind, int first, int second, int station, int other = -1) {
    auto key = std::make_tuple(kind, first, second, station, other);
    auto it = m_.binary_index.find(key);
    if (it != m_.binary_index.end()) return it->second;
    const auto& in = inst();
    BinaryVar b{kind, first, second, station, other, ""};
    const std::string pair = sanitize(in.train(first).id) + "_" + sanitize(in.train(second).id);
    switch (kind) {
      case BinaryKind::y_out: b.name = "yout_" + pair + "_" + sanitize(in.station(station).id); break;
      case BinaryKind::y_in: b.name = "yin_" + pair + "_" + sanitize(in.station(station).id); break;
      case BinaryKind::z:
        b.name = "z_" + pair + "_" + sanitize(in.station(station).id) + "_" + sanitize(in.station(other).id);
        break;
    }
    b.name = unique(b.name);
    const int index = static_cast<int>(m_.binary_vars.size());
    m_.binary_vars.push_back(std::move(b));
    m_.binary_index.emplace(key, index);
    return index;
  }

  TimeRef dep_at(int train, int station) const {
    const int pos = inst().train(train).position_of(station);
    if (!inst().train(train).has_departure(pos)) {
      throw InternalError("index set references a missing departure of '" + inst().train(train).id + "' at '" +
                          inst().station(station).id + "'");
    }
    return {train, pos, false};
  }

  TimeRef arr_at(int train, int station) const {
    const int pos = inst().train(train).position_of(station);
    if (!inst().train(train).has_arrival(pos)) {
      throw InternalError("index set references a missing arrival of '" + inst().train(train).id + "' at '" +
                          inst().station(station).id + "'");
    }
    return {train, pos, true};
  }

  /// later >= earlier + tau, optionally deactivated.
  void precedence(Family family, const TimeRef& later, const TimeRef& earlier, int tau,
                  std::optional<Literal> deactivator, std::string note) {
    ConstraintRecord r;
    r.family = family;
    const auto [vl, ol] = expr(later);
    const auto [ve, oe] = expr(earlier);
    r.terms = {{vl, 1}, {ve, -1}};
    r.rhs = static_cast<std::int64_t>(tau) + oe - ol;
    if (deactivator) {
      const Window wl = window_of(inst(), m_.derived, later);
      const Window we = window_of(inst(), m_.derived, earlier);
      r.big_m = big_M(wl.lo, wl.hi, we.lo, we.hi, tau);
      r.deactivator = deactivator;
    }
    r.note = std::move(note);
    m_.constraints.push_back(std::move(r));
  }

  /// Both orders of a disjunction decided by `var`: value 1 means `a_first` holds.
  void disjunction(Family family, int var, const TimeRef& a_later, const TimeRef& a_earlier, int tau_a,
                   const TimeRef& b_later, const TimeRef& b_earlier, int tau_b, const std::string& note) {
    precedence(family, a_later, a_earlier, tau_a, Literal{var, true}, note);
    precedence(family, b_later, b_earlier, tau_b, Literal{var, false}, note);
  }

  void lower_bound(Family family, int var, std::int64_t rhs, std::string note) {
    ConstraintRecord r;
    r.family = family;
    r.terms = {{var, 1}};
    r.rhs = rhs;
    r.note = std::move(note);
    m_.constraints.push_back(std::move(r));
  }

  void link(int x, int y, std::string note) {
    ConstraintRecord r;
    r.family = Family::order_link;
    r.binary_terms = {{x, 1}, {y, -1}};
    r.relation = Relation::eq;
    r.rhs = 0;
    r.note = std::move(note);
    m_.constraints.push_back(std::move(r));
  }

  DecisionModel& model() { return m_; }

 private:
  std::pair<int, std::int64_t> expr(const TimeRef& ref) const {
    if (!ref.arrival) return {m_.time_var_of[ref.train][ref.pos], 0};
    return {m_.time_var_of[ref.train][ref.pos - 1], inst().train(ref.train).pass[ref.pos - 1]};
  }

  std::string unique(std::string name) {
    if (names_.insert(name).second) return name;
    for (int k = 2;; ++k) {
      std::string candidate = name + "_" + std::to_string(k);
      if (names_.insert(candidate).second) return candidate;
    }
  }

  DecisionModel m_;
  std::set<std::string> names_;
};

}  // namespace

DecisionModel build_model(const Instance& instance, const DerivedTimes& derived, const IndexSets& sets) {
  if (instance.num_trains() == 0) throw ValidationError("empty model: the instance has no trains");
  Builder b(instance, derived);
  b.declare_times();
  auto& m = b.model();
  auto tn = [&](int j) -> const std::string& { return instance.train(j).id; };
  auto sn = [&](int s) -> const std::string& { return instance.station(s).id; };

  for (int j = 0; j < instance.num_trains(); ++j) {
    const auto& train = instance.train(j);
    for (int p = 0; p + 1 < train.departures; ++p) {
      b.precedence(Family::running, {j, p + 1, false}, {j, p, false}, train.pass[p], std::nullopt,
                   tn(j) + " " + sn(train.route[p]) + "->" + sn(train.route[p + 1]));
    }
    for (int p = 1; p < train.departures; ++p) {
      b.precedence(Family::dwell, {j, p, false}, {j, p - 1, false}, train.pass[p - 1] + train.dwell[p],
                   std::nullopt, tn(j) + " " + sn(train.route[p]));
    }
    for (int p = 0; p < train.departures; ++p) {
      b.lower_bound(Family::timetable, m.time_var_of[j][p], train.sigma[p], tn(j) + " " + sn(train.route[p]));
    }
  }

  for (const auto& pair : sets.headway_pairs) {
    const int a = pair.first, c = pair.second;
    for (const auto& leg : sets.common_station_pairs.at(pair)) {
      const int y = b.binary(BinaryKind::y_out, a, c, leg.from);
      b.disjunction(Family::headway, y, b.dep_at(c, leg.from), b.dep_at(a, leg.from),
                    instance.headway(a, c, leg.from, leg.to), b.dep_at(a, leg.from), b.dep_at(c, leg.from),
                    instance.headway(c, a, leg.from, leg.to),
                    tn(a) + " " + tn(c) + " " + sn(leg.from) + "->" + sn(leg.to));
    }
  }

  for (const auto& pair : sets.single_pairs) {
    const int a = pair.first, c = pair.second;
    for (const auto& leg : sets.common_single_pairs.at(pair)) {
      const int z = b.binary(BinaryKind::z, a, c, leg.from, leg.to);
      b.disjunction(Family::single, z, b.dep_at(c, leg.to), b.arr_at(a, leg.to), 0, b.dep_at(a, leg.from),
                    b.arr_at(c, leg.from), 0, tn(a) + " " + tn(c) + " " + sn(leg.from) + "-" + sn(leg.to));
    }
  }

  for (const auto& [s, pairs] : sets.track_pairs) {
    for (const auto& pair : pairs) {
      const int a = pair.first, c = pair.second;
      const int y = b.binary(BinaryKind::y_out, a, c, s);
      b.disjunction(Family::track, y, b.arr_at(c, s), b.dep_at(a, s), 0, b.arr_at(a, s), b.dep_at(c, s), 0,
                    tn(a) + " " + tn(c) + " " + sn(s));
    }
  }

  for (const auto& [s, pairs] : sets.switch_out_pairs) {
    for (const auto& pair : pairs) {
      const int a = pair.first, c = pair.second;
      const int y = b.binary(BinaryKind::y_out, a, c, s);
      b.disjunction(Family::switch_out, y, b.dep_at(c, s), b.dep_at(a, s), instance.switch_time(a, c, s),
                    b.dep_at(a, s), b.dep_at(c, s), instance.switch_time(c, a, s),
                    tn(a) + " " + tn(c) + " " + sn(s));
    }
  }

  for (const auto& [key, pairs] : sets.switch_out_in_pairs) {
    const auto [s, from] = key;
    for (const auto& pair : pairs) {
      const int leaving = pair.first, entering = pair.second;
      const TimeRef out = b.dep_at(leaving, s);
      const TimeRef in = b.arr_at(entering, s);
      const std::string note = tn(leaving) + " " + tn(entering) + " " + sn(s) + "<-" + sn(from);
      const int tau_leaving_first = instance.switch_time(leaving, entering, s);
      const int tau_entering_first = instance.switch_time(entering, leaving, s);
      if (leaving < entering) {
        const int z = b.binary(BinaryKind::z, leaving, entering, s, from);
        b.disjunction(Family::switch_out_in, z, in, out, tau_leaving_first, out, in, tau_entering_first, note);
      } else {
        const int z = b.binary(BinaryKind::z, entering, leaving, from, s);
        b.disjunction(Family::switch_out_in, z, out, in, tau_entering_first, in, out, tau_leaving_first, note);
      }
    }
  }

  for (const auto& [key, pairs] : sets.switch_in_noMP_pairs) {
    const auto [s, from] = key;
    for (const auto& pair : pairs) {
      const int a = pair.first, c = pair.second;
      const int y = b.binary(BinaryKind::y_out, a, c, from);
      b.disjunction(Family::switch_in_noMP, y, b.arr_at(c, s), b.arr_at(a, s), instance.switch_time(a, c, s),
                    b.arr_at(a, s), b.arr_at(c, s), instance.switch_time(c, a, s),
                    tn(a) + " " + tn(c) + " " + sn(s) + "<-" + sn(from));
    }
  }

  for (const auto& [key, pairs] : sets.switch_in_MP_pairs) {
    const auto [s, from] = key;
    for (const auto& pair : pairs) {
      const int a = pair.first, c = pair.second;
      const int y = b.binary(BinaryKind::y_in, a, c, s);
      b.disjunction(Family::switch_in_MP, y, b.arr_at(c, s), b.arr_at(a, s), instance.switch_time(a, c, s),
                    b.arr_at(a, s), b.arr_at(c, s), instance.switch_time(c, a, s),
                    tn(a) + " " + tn(c) + " " + sn(s) + "<-" + sn(from));
    }
  }

  for (const auto& [s, turns] : sets.turn_pairs) {
    for (const auto& t : turns) {
      b.precedence(Family::turn, b.dep_at(t.continuing, s), b.arr_at(t.terminating, s), t.minutes, std::nullopt,
                   tn(t.terminating) + " " + tn(t.continuing) + " " + sn(s));
    }
  }

  // Order links: no overtaking between a shared leg and a shared station track,
  // and entry order equal to exit order on a shared station track.
  std::set<std::pair<int, int>> linked;
  auto add_link = [&](int x, int y, const std::string& note) {
    if (x == y || !linked.insert({std::min(x, y), std::max(x, y)}).second) return;
    b.link(x, y, note);
  };
  for (const auto& pair : sets.headway_pairs) {
    for (const auto& leg : sets.common_station_pairs.at(pair)) {
      auto it = sets.track_pairs.find(leg.to);
      if (it == sets.track_pairs.end() || !it->second.contains(pair)) continue;
      const int x = b.binary(BinaryKind::y_out, pair.first, pair.second, leg.from);
      const int y = b.binary(BinaryKind::y_out, pair.first, pair.second, leg.to);
      add_link(x, y, tn(pair.first) + " " + tn(pair.second) + " " + sn(leg.from) + "->" + sn(leg.to));
    }
  }
  for (const auto& [key, pairs] : sets.switch_in_MP_pairs) {
    const int s = key.first;
    auto it = sets.track_pairs.find(s);
    if (it == sets.track_pairs.end()) continue;
    for (const auto& pair : pairs) {
      if (!it->second.contains(pair)) continue;
      const int x = b.binary(BinaryKind::y_in, pair.first, pair.second, s);
      const int y = b.binary(BinaryKind::y_out, pair.first, pair.second, s);
      add_link(x, y, tn(pair.first) + " " + tn(pair.second) + " " + sn(s));
    }
  }

  const Rational d(instance.d_max());
  for (int j = 0; j < instance.num_trains(); ++j) {
    const auto& train = instance.train(j);
    if (train.departures == 0 || train.weight.numerator() == 0) continue;
    const int last = train.departures - 1;
    const Rational coeff = train.weight / d;
    m.objective.emplace_back(m.time_var_of[j][last], coeff);
    m.objective_constant -= coeff * derived.lo(j, last);
  }
  return b.take();
}

DecisionModel build_model(const Instance& instance) {
  const DerivedTimes derived = earliest_departures(instance);
  return build_model(instance, derived, build_index_sets(instance, derived));
}

Rational evaluate_objective(const DecisionModel& model, const std::vector<int>& times) {
  if (times.size() != model.time_vars.size()) {
    throw UsageError("departure assignment covers " + std::to_string(times.size()) + " of " +
                     std::to_string(model.time_vars.size()) + " time variables");
  }
  Rational value = model.objective_constant;
  for (const auto& [var, coeff] : model.objective) value += coeff * times[var];
  return value;
}

std::int64_t ScaledObjective::value(const std::vector<int>& times) const {
  std::int64_t v = offset;
  for (const auto& [var, c] : terms) v += c * times[var];
  return v;
}

ScaledObjective scale_objective(const DecisionModel& model) {
  ScaledObjective s;
  std::int64_t l = model.objective_constant.denominator();
  for (const auto& [var, c] : model.objective) l = std::lcm(l, c.denominator());
  s.scale = l;
  for (const auto& [var, c] : model.objective) s.terms.emplace_back(var, (c * l).numerator());
  s.offset = (model.objective_constant * l).numerator();
  return s;
}

std::int64_t slack(const ConstraintRecord& record, const std::vector<int>& times, const std::vector<int>& binaries) {
  std::int64_t lhs = 0;
  for (const auto& t : record.terms) lhs += t.coeff * times[t.var];
  for (const auto& t : record.binary_terms) lhs += t.coeff * binaries[t.var];
  if (record.deactivator) lhs += *record.big_m * record.deactivator->value(binaries[record.deactivator->var]);
  const std::int64_t diff = lhs - record.rhs;
  return record.relation == Relation::eq ? -std::abs(diff) : diff;
}

std::vector<int> violated_records(const DecisionModel& model, const std::vector<int>& times,
                                  const std::vector<int>& binaries) {
  if (times.size() != model.time_vars.size() || binaries.size() != model.binary_vars.size()) {
    throw UsageError("assignment does not match the model's variables");
  }
  std::vector<int> out;
  for (int v = 0; v < model.num_time_vars(); ++v) {
    if (times[v] < model.time_vars[v].lo || times[v] > model.time_vars[v].hi) out.push_back(-1 - v);
  }
  for (int i = 0; i < static_cast<int>(model.constraints.size()); ++i) {
    if (slack(model.constraints[i], times, binaries) < 0) out.push_back(i);
  }
  return out;
}

int departure_of(const DecisionModel& model, const Solution& solution, int train, int pos) {
  return solution.times.at(model.time_var_of.at(train).at(pos));
}

}  // namespace railsched
