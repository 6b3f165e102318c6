#pragma once

#include "equidist/real.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace equidist {

struct Rational {
  Index num = 0;
  Index den = 1;  // > 0, gcd(|num|, den) == 1
};

/// A real constant given by a short textual expression.
///
/// Accepted forms: decimals ("1.5", "-2e-3"), fractions ("3/7"), square
/// roots ("sqrt2", "sqrt(5)"), and the names "golden", "pi", "e". Decimals
/// and fractions also carry their exact rational value so that
/// continued-fraction expansions of them terminate.
class RealExpr {
 public:
  RealExpr() = default;

  static RealExpr parse(std::string_view text);

  /// The exact binary value of a double; trusted to 53 bits only.
  static RealExpr from_double(double value);

  const Real& value() const { return value_; }
  const std::optional<Rational>& exact() const { return exact_; }
  const std::string& text() const { return text_; }

  /// Number of bits of the value that are meaningful.
  int trusted_bits() const { return trusted_bits_; }

 private:
  Real value_ = 0;
  std::optional<Rational> exact_ = Rational{0, 1};
  std::string text_ = "0";
  int trusted_bits_ = kRealBits;
};

}  // namespace equidist
