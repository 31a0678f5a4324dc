#ifndef RAILSCHED_RATIONAL_HPP
#define RAILSCHED_RATIONAL_HPP

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace railsched {

using Rational = boost::rational<std::int64_t>;

/// Parses "3", "-7/4" or a finite decimal such as "1.75" exactly.
Rational parse_rational(std::string_view text);

/// Converts a double that is a short decimal (at most 9 fractional digits) exactly.
Rational rational_from_decimal(double value);

/// "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& value);

double to_double(const Rational& value);

/// Decimal rendering with `digits` fractional digits, for reports.
std::string to_decimal(const Rational& value, int digits = 4);

/// Shortest exact decimal when the expansion terminates, 17 significant digits otherwise.
std::string to_exact_decimal(const Rational& value);

}  // namespace railsched

#endif  // RAILSCHED_RATIONAL_HPP
