#include "railsched/rational.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "railsched/error.hpp"

namespace railsched {

namespace {

std::int64_t parse_int(std::string_view text, std::string_view whole) {
  std::int64_t value = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  if (!text.empty() && text.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) {
    throw SchemaError("not a rational number: '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view whole = text;
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto den = parse_int(text.substr(slash + 1), whole);
    if (den == 0) throw SchemaError("zero denominator in '" + std::string(whole) + "'");
    return Rational(parse_int(text.substr(0, slash), whole), den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    const auto frac = text.substr(dot + 1);
    if (frac.size() > 12) throw SchemaError("too many decimals in '" + std::string(whole) + "'");
    const bool negative = !text.empty() && text.front() == '-';
    auto int_part = text.substr(0, dot);
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    const std::int64_t ip = (int_part.empty() || int_part == "-" || int_part == "+")
                                ? 0
                                : parse_int(int_part, whole);
    const std::int64_t fp = frac.empty() ? 0 : parse_int(frac, whole);
    const std::int64_t magnitude = std::llabs(ip) * scale + fp;
    return Rational(negative ? -magnitude : magnitude, scale);
  }
  return Rational(parse_int(text, whole));
}

Rational rational_from_decimal(double value) {
  if (!std::isfinite(value)) throw SchemaError("non-finite number");
  std::int64_t scale = 1;
  for (int digits = 0; digits <= 9; ++digits) {
    const double scaled = value * static_cast<double>(scale);
    const double rounded = std::round(scaled);
    if (std::fabs(scaled - rounded) < 1e-9 * std::max(1.0, std::fabs(scaled))) {
      return Rational(static_cast<std::int64_t>(rounded), scale);
    }
    scale *= 10;
  }
  throw SchemaError("number is not a short decimal: " + std::to_string(value));
}

std::string to_string(const Rational& value) {
  if (value.denominator() == 1) return std::to_string(value.numerator());
  return std::to_string(value.numerator()) + "/" + std::to_string(value.denominator());
}

double to_double(const Rational& value) {
  return static_cast<double>(value.numerator()) / static_cast<double>(value.denominator());
}

std::string to_decimal(const Rational& value, int digits) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*f", digits, to_double(value));
  return buffer;
}

std::string to_exact_decimal(const Rational& value) {
  std::int64_t den = value.denominator();
  int twos = 0, fives = 0;
  while (den % 2 == 0) den /= 2, ++twos;
  while (den % 5 == 0) den /= 5, ++fives;
  if (den != 1 || std::max(twos, fives) > 15) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.17g", to_double(value));
    return buffer;
  }
  const int digits = std::max(twos, fives);
  std::int64_t scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  const Rational scaled = value * scale;  // integral by construction
  const std::int64_t n = scaled.numerator();
  const std::int64_t whole = n / scale;
  std::int64_t frac = std::llabs(n % scale);
  std::string out = (n < 0 && whole == 0 ? "-" : "") + std::to_string(whole);
  if (digits == 0) return out;
  std::string f = std::to_string(frac);
  f.insert(0, static_cast<std::size_t>(digits) - f.size(), '0');
  while (!f.empty() && f.back() == '0') f.pop_back();
  return out + "." + f;
}

}  // namespace railsched
