#include "spacesim/rational.hpp"

#include <charconv>

#include "spacesim/error.hpp"

namespace spacesim {

namespace {

std::int64_t parse_int(std::string_view text, std::string_view whole) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorCode::ParseError,
                "not a rational number: '" + std::string(whole) + "'");
  }
  return v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = parse_int(text.substr(0, slash), text);
    auto den = parse_int(text.substr(slash + 1), text);
    if (den == 0) {
      throw Error(ErrorCode::ParseError, "zero denominator in '" + std::string(text) + "'");
    }
    return {num, den};
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    auto frac = text.substr(dot + 1);
    if (frac.size() > 15) {
      throw Error(ErrorCode::ParseError, "too many decimals in '" + std::string(text) + "'");
    }
    std::string digits(text.substr(0, dot));
    digits += frac;
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    return {parse_int(digits, text), den};
  }
  return {parse_int(text, text), 1};
}

std::string format_rational(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace spacesim
