#include "railsched/penalty.hpp"

#include <algorithm>

#include "railsched/error.hpp"

namespace railsched {

namespace {

int bits_for(std::int64_t range) {
  int k = 0;
  while (((std::int64_t{1} << k) - 1) < range) ++k;
  return k;
}

struct Linear {
  std::map<int, std::int64_t> terms;
  std::int64_t constant = 0;

  void add(int bit, std::int64_t coeff) {
    if (coeff == 0) return;
    auto& c = terms[bit];
    c += coeff;
    if (c == 0) terms.erase(bit);
  }
  std::int64_t min() const {
    std::int64_t v = constant;
    for (const auto& [bit, c] : terms) v += std::min<std::int64_t>(0, c);
    return v;
  }
  std::int64_t max() const {
    std::int64_t v = constant;
    for (const auto& [bit, c] : terms) v += std::max<std::int64_t>(0, c);
    return v;
  }
};

}  // namespace

Rational penalty_lower_bound(const DecisionModel& model) {
  Rational p;
  for (const auto& [var, coeff] : model.objective) {
    p += coeff * (model.time_vars[var].hi - model.time_vars[var].lo);
  }
  return p;
}

PenaltyForm to_penalty_form(const DecisionModel& model, const Rational& weight) {
  PenaltyForm f;
  f.p_min = penalty_lower_bound(model);
  if (weight <= f.p_min) {
    throw UsageError("penalty weight " + to_string(weight) + " must exceed " + to_string(f.p_min));
  }
  f.weight = weight;

  for (int v = 0; v < model.num_time_vars(); ++v) {
    const auto& tv = model.time_vars[v];
    const int k = bits_for(tv.hi - tv.lo);
    f.time_bits.emplace_back(f.num_bits(), k);
    for (int i = 0; i < k; ++i) f.bits.push_back({BitRole::time, v, i, tv.name + "[" + std::to_string(i) + "]"});
  }
  for (int b = 0; b < model.num_binaries(); ++b) {
    f.binary_bit.push_back(f.num_bits());
    f.bits.push_back({BitRole::binary, b, 0, model.binary_vars[b].name});
  }

  auto add_time = [&](Linear& l, int var, std::int64_t coeff) {
    l.constant += coeff * model.time_vars[var].lo;
    const auto [first, count] = f.time_bits[var];
    for (int i = 0; i < count; ++i) l.add(first + i, coeff * (std::int64_t{1} << i));
  };

  auto penalise = [&](Linear l, bool inequality, int record, std::string label) {
    if (inequality) {
      if (l.min() >= 0) return;  // holds everywhere on the encoded box
      PenaltyRow row;
      if (l.max() > 0) {
        row.slack_first = f.num_bits();
        row.slack_bits = bits_for(l.max());
        for (int i = 0; i < row.slack_bits; ++i) {
          f.bits.push_back({BitRole::slack, static_cast<int>(f.rows.size()), i,
                            "s" + std::to_string(f.rows.size()) + "[" + std::to_string(i) + "]"});
          l.add(row.slack_first + i, -(std::int64_t{1} << i));
        }
      }
      row.terms.assign(l.terms.begin(), l.terms.end());
      row.constant = l.constant;
      row.record = record;
      row.label = std::move(label);
      f.rows.push_back(std::move(row));
    } else {
      if (l.terms.empty() && l.constant == 0) return;
      PenaltyRow row;
      row.terms.assign(l.terms.begin(), l.terms.end());
      row.constant = l.constant;
      row.record = record;
      row.label = std::move(label);
      f.rows.push_back(std::move(row));
    }
  };

  for (int v = 0; v < model.num_time_vars(); ++v) {
    const auto& tv = model.time_vars[v];
    const auto [first, count] = f.time_bits[v];
    if ((std::int64_t{1} << count) - 1 <= tv.hi - tv.lo) continue;
    Linear l;
    l.constant = tv.hi;
    add_time(l, v, -1);
    penalise(l, true, -1, "window " + tv.name);
  }

  for (int r = 0; r < static_cast<int>(model.constraints.size()); ++r) {
    const auto& c = model.constraints[r];
    Linear l;
    l.constant = -c.rhs;
    for (const auto& t : c.terms) add_time(l, t.var, t.coeff);
    for (const auto& t : c.binary_terms) l.add(f.binary_bit[t.var], t.coeff);
    if (c.deactivator) {
      const int bit = f.binary_bit[c.deactivator->var];
      if (c.deactivator->negated) {
        l.constant += *c.big_m;
        l.add(bit, -*c.big_m);
      } else {
        l.add(bit, *c.big_m);
      }
    }
    penalise(std::move(l), c.relation == Relation::ge, r, std::string(to_string(c.family)) + " " + c.note);
  }

  // Objective over the time bits.
  f.constant = model.objective_constant;
  for (const auto& [var, coeff] : model.objective) {
    f.constant += coeff * model.time_vars[var].lo;
    const auto [first, count] = f.time_bits[var];
    for (int i = 0; i < count; ++i) f.q[{first + i, first + i}] += coeff * (std::int64_t{1} << i);
  }

  // Squared residuals; x * x = x on the diagonal.
  for (const auto& row : f.rows) {
    const std::int64_t c = row.constant;
    f.constant += weight * (c * c);
    for (std::size_t i = 0; i < row.terms.size(); ++i) {
      const auto [bi, ai] = row.terms[i];
      f.q[{bi, bi}] += weight * (ai * ai + 2 * c * ai);
      for (std::size_t j = i + 1; j < row.terms.size(); ++j) {
        const auto [bj, aj] = row.terms[j];
        f.q[{std::min(bi, bj), std::max(bi, bj)}] += weight * (2 * ai * aj);
      }
    }
  }
  std::erase_if(f.q, [](const auto& entry) { return entry.second.numerator() == 0; });
  return f;
}

Rational PenaltyForm::energy(const std::vector<std::uint8_t>& x) const {
  Rational e = constant;
  for (const auto& [ij, c] : q) {
    if (x[ij.first] && x[ij.second]) e += c;
  }
  return e;
}

std::int64_t PenaltyForm::violation(const std::vector<std::uint8_t>& x) const {
  std::int64_t total = 0;
  for (const auto& row : rows) {
    std::int64_t r = row.constant;
    for (const auto& [bit, c] : row.terms) r += c * x[bit];
    total += r * r;
  }
  return total;
}

std::pair<std::vector<int>, std::vector<int>> PenaltyForm::decode(const DecisionModel& model,
                                                                  const std::vector<std::uint8_t>& x) const {
  std::vector<int> times(model.num_time_vars());
  for (int v = 0; v < model.num_time_vars(); ++v) {
    const auto [first, count] = time_bits[v];
    int t = model.time_vars[v].lo;
    for (int i = 0; i < count; ++i) t += x[first + i] << i;
    times[v] = t;
  }
  std::vector<int> binaries(model.num_binaries());
  for (int b = 0; b < model.num_binaries(); ++b) binaries[b] = x[binary_bit[b]];
  return {times, binaries};
}

std::vector<std::uint8_t> PenaltyForm::encode(const DecisionModel& model, const std::vector<int>& times,
                                              const std::vector<int>& binaries) const {
  std::vector<std::uint8_t> x(bits.size(), 0);
  for (int v = 0; v < model.num_time_vars(); ++v) {
    const auto [first, count] = time_bits[v];
    const int offset = times[v] - model.time_vars[v].lo;
    for (int i = 0; i < count; ++i) x[first + i] = (offset >> i) & 1;
  }
  for (int b = 0; b < model.num_binaries(); ++b) x[binary_bit[b]] = binaries[b] ? 1 : 0;
  for (const auto& row : rows) {
    if (row.slack_bits == 0) continue;
    std::int64_t value = row.constant;
    for (const auto& [bit, c] : row.terms) {
      if (bit < row.slack_first || bit >= row.slack_first + row.slack_bits) value += c * x[bit];
    }
    value = std::clamp<std::int64_t>(value, 0, (std::int64_t{1} << row.slack_bits) - 1);
    for (int i = 0; i < row.slack_bits; ++i) x[row.slack_first + i] = (value >> i) & 1;
  }
  return x;
}

namespace {

// Terminating decimals stay decimal; anything else is written as p/q so no
// coefficient is rounded.
std::string exact_text(const Rational& c) {
  std::int64_t d = c.denominator();
  while (d % 2 == 0) d /= 2;
  while (d % 5 == 0) d /= 5;
  return d == 1 ? to_exact_decimal(c) : to_string(c);
}

}  // namespace

void write_qubo(std::ostream& out, const PenaltyForm& form) {
  out << "# railsched penalty form\n";
  out << "# bits " << form.num_bits() << '\n';
  out << "# penalty_weight " << to_string(form.weight) << '\n';
  out << "# p_min " << to_string(form.p_min) << '\n';
  out << "# constant " << to_string(form.constant) << '\n';
  out << "# energy = constant + sum over lines of coeff * x_i * x_j (i == j: linear term); coeff is a decimal or p/q\n";
  for (int i = 0; i < form.num_bits(); ++i) {
    const auto& b = form.bits[i];
    out << "# bit " << i << ' ';
    switch (b.role) {
      case BitRole::time: out << "time " << b.name << " weight " << (std::int64_t{1} << b.power); break;
      case BitRole::binary: out << "binary " << b.name; break;
      case BitRole::slack:
        out << "slack " << b.name << " weight " << (std::int64_t{1} << b.power) << " row "
            << form.rows[b.owner].label;
        break;
    }
    out << '\n';
  }
  for (const auto& [ij, c] : form.q) out << ij.first << ' ' << ij.second << ' ' << exact_text(c) << '\n';
}

}  // namespace railsched
