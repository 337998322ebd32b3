#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace modae {

/// Exact decimal literal: value = numerator / denominator, denominator a power of ten.
struct Decimal {
  std::int64_t numerator = 0;
  std::int64_t denominator = 1;

  // Value expressed in units of 1/target; target must be a multiple of denominator.
  std::int64_t scaled_to(std::int64_t target) const { return numerator * (target / denominator); }
};

// Accepts [-]digits[.digits]. Throws modae::Error on anything else.
Decimal parse_decimal(std::string_view text);

// Renders value/denominator (denominator a power of ten) without rounding.
std::string format_scaled(std::int64_t value, std::int64_t denominator);

}  // namespace modae
