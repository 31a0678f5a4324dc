#include "railsched/lp_export.hpp"

#include <map>
#include <sstream>

namespace railsched {

namespace {

// Keeps rows and name lists under the line length limit of common LP readers.
class LineWriter {
 public:
  explicit LineWriter(std::ostream& out) : out_(out) {}

  void term(const std::string& text) {
    if (width_ + text.size() > 200) {
      out_ << "\n  ";
      width_ = 2;
    }
    out_ << ' ' << text;
    width_ += text.size() + 1;
  }

  void start(const std::string& head) {
    out_ << head;
    width_ = head.size();
  }

  void end() {
    out_ << '\n';
    width_ = 0;
  }

 private:
  std::ostream& out_;
  std::size_t width_ = 0;
};

std::string signed_term(std::int64_t coeff, const std::string& name, bool first) {
  std::string sign = coeff < 0 ? "-" : (first ? "" : "+");
  const std::int64_t mag = coeff < 0 ? -coeff : coeff;
  std::string body = mag == 1 ? name : std::to_string(mag) + " " + name;
  return sign.empty() ? body : sign + " " + body;
}

}  // namespace

void write_lp(std::ostream& out, const DecisionModel& model) {
  out << "\\ railsched decision model\n";
  out << "\\ " << model.num_time_vars() << " time variables, " << model.num_binaries() << " binaries, "
      << model.constraints.size() << " constraints\n";
  out << "\\ constant: " << to_string(model.objective_constant) << '\n';

  LineWriter w(out);
  out << "Minimize\n";
  w.start(" obj:");
  if (model.objective.empty()) {
    w.term("0 " + model.time_vars.front().name);
  } else {
    bool first = true;
    for (const auto& [var, coeff] : model.objective) {
      std::string text = to_exact_decimal(coeff < 0 ? -coeff : coeff) + " " + model.time_vars[var].name;
      if (coeff < 0) text = "- " + text;
      else if (!first) text = "+ " + text;
      w.term(text);
      first = false;
    }
  }
  w.end();

  out << "Subject To\n";
  std::map<Family, int> counter;
  for (const auto& c : model.constraints) {
    const int n = ++counter[c.family];
    out << "\\ " << to_string(c.family) << ' ' << c.note << '\n';
    w.start(" " + std::string(to_string(c.family)) + "_" + std::to_string(n) + ":");
    bool first = true;
    std::int64_t rhs = c.rhs;
    for (const auto& t : c.terms) {
      w.term(signed_term(t.coeff, model.time_vars[t.var].name, first));
      first = false;
    }
    for (const auto& t : c.binary_terms) {
      w.term(signed_term(t.coeff, model.binary_vars[t.var].name, first));
      first = false;
    }
    if (c.deactivator && *c.big_m != 0) {
      // C * (1 - x) moves C to the right-hand side.
      const std::int64_t coeff = c.deactivator->negated ? -*c.big_m : *c.big_m;
      if (c.deactivator->negated) rhs -= *c.big_m;
      w.term(signed_term(coeff, model.binary_vars[c.deactivator->var].name, first));
    }
    w.term(c.relation == Relation::eq ? "=" : ">=");
    w.term(std::to_string(rhs));
    w.end();
  }

  out << "Bounds\n";
  for (const auto& v : model.time_vars) out << ' ' << v.lo << " <= " << v.name << " <= " << v.hi << '\n';

  if (!model.time_vars.empty()) {
    out << "General\n";
    w.start("");
    for (const auto& v : model.time_vars) w.term(v.name);
    w.end();
  }
  if (!model.binary_vars.empty()) {
    out << "Binary\n";
    w.start("");
    for (const auto& b : model.binary_vars) w.term(b.name);
    w.end();
  }
  out << "End\n";
}

std::string export_lp(const DecisionModel& model) {
  std::ostringstream out;
  write_lp(out, model);
  return out.str();
}

}  // namespace railsched
