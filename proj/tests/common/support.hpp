#ifndef RAILSCHED_TEST_SUPPORT_HPP
#define RAILSCHED_TEST_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "railsched/model.hpp"
#include "railsched/penalty.hpp"
#include "railsched/solution_io.hpp"

namespace support {

/// Model-side feasibility of fixed departures: with the times fixed every
/// precedence group can be decided on its own, so the best binaries are
/// exactly the ones consistent with the realized order.
inline bool model_feasible(const railsched::DecisionModel& m, const std::vector<int>& times) {
  return railsched::violated_records(m, times, railsched::infer_binaries(m, times)).empty();
}

struct PenaltyScan {
  std::int64_t min_energy = 0;  ///< scaled by `scale`
  std::int64_t scale = 1;
  std::vector<std::vector<std::uint8_t>> minimizers;  ///< at most `keep`
};

/// Exhaustive Gray-code walk over every bit assignment of the form.
inline PenaltyScan scan_penalty(const railsched::PenaltyForm& f, std::size_t keep = 256) {
  std::int64_t scale = f.constant.denominator();
  for (const auto& [ij, c] : f.q) scale = std::lcm(scale, c.denominator());
  const int n = f.num_bits();
  std::vector<std::vector<std::pair<int, std::int64_t>>> nb(n);
  std::vector<std::int64_t> lin(n, 0);
  for (const auto& [ij, c] : f.q) {
    const std::int64_t v = (c * scale).numerator();
    if (ij.first == ij.second) {
      lin[ij.first] += v;
    } else {
      nb[ij.first].push_back({ij.second, v});
      nb[ij.second].push_back({ij.first, v});
    }
  }
  PenaltyScan out;
  out.scale = scale;
  std::vector<std::uint8_t> x(n, 0);
  std::int64_t e = (f.constant * scale).numerator();
  out.min_energy = e;
  out.minimizers.push_back(x);
  for (std::uint64_t k = 1; k < (std::uint64_t{1} << n); ++k) {
    const int i = __builtin_ctzll(k);
    std::int64_t delta = lin[i];
    for (const auto& [j, v] : nb[i]) delta += v * x[j];
    e += x[i] ? -delta : delta;
    x[i] ^= 1;
    if (e < out.min_energy) {
      out.min_energy = e;
      out.minimizers.assign(1, x);
    } else if (e == out.min_energy && out.minimizers.size() < keep) {
      out.minimizers.push_back(x);
    }
  }
  return out;
}

inline std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = (i + j) / 2.0 + 1.0;
    i = j + 1;
  }
  return r;
}

/// Spearman rank correlation with average ranks for ties; 0 when either side is constant.
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0 || syy == 0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace support

#endif
