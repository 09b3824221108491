#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <string>
#include <string_view>

namespace spacesim {

using Rational = boost::rational<std::int64_t>;

/// Accepts "p/q", an integer, or a decimal such as "0.5" (converted exactly
/// using its written digits).
Rational parse_rational(std::string_view text);
std::string format_rational(const Rational& r);

inline double to_double(const Rational& r) {
  return boost::rational_cast<double>(r);
}

}  // namespace spacesim
