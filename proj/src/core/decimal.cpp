#include "modae/core/decimal.hpp"

#include <cctype>
#include <limits>

#include "modae/core/error.hpp"

namespace modae {

Decimal parse_decimal(std::string_view text) {
  Decimal d;
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
    negative = text[i] == '-';
    ++i;
  }
  bool digits = false;
  bool point = false;
  constexpr auto limit = std::numeric_limits<std::int64_t>::max() / 10;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '.' && !point) {
      point = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw Error("malformed number '" + std::string(text) + "'");
    }
    if (d.numerator > limit || (point && d.denominator > limit)) {
      throw Error("number '" + std::string(text) + "' exceeds the supported precision");
    }
    digits = true;
    d.numerator = d.numerator * 10 + (c - '0');
    if (point) d.denominator *= 10;
  }
  if (!digits) throw Error("malformed number '" + std::string(text) + "'");
  // Drop trailing zeros of the fraction so "2.0" and "2" share a quantum.
  while (d.denominator > 1 && d.numerator % 10 == 0) {
    d.numerator /= 10;
    d.denominator /= 10;
  }
  if (negative) d.numerator = -d.numerator;
  return d;
}

std::string format_scaled(std::int64_t value, std::int64_t denominator) {
  if (denominator == 1) return std::to_string(value);
  std::string sign = value < 0 ? "-" : "";
  const std::uint64_t mag = value < 0 ? static_cast<std::uint64_t>(-(value + 1)) + 1
                                      : static_cast<std::uint64_t>(value);
  const auto den = static_cast<std::uint64_t>(denominator);
  std::string frac = std::to_string(mag % den);
  std::size_t width = std::to_string(den).size() - 1;
  frac.insert(0, width - frac.size(), '0');
  while (!frac.empty() && frac.back() == '0') frac.pop_back();
  std::string out = sign + std::to_string(mag / den);
  if (!frac.empty()) out += "." + frac;
  return out;
}

}  // namespace modae
