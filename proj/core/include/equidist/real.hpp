#pragma once

// Extended-precision reals and wide sequence indices.
//
// The certifier works at indices around 1e31 where x_n itself can exceed
// 1e46, so fractional parts are only meaningful when values are carried
// with ~100 significant digits. Indices are 128-bit signed integers.

#include <boost/multiprecision/mpfr.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace equidist {

using Real = boost::multiprecision::number<
    boost::multiprecision::mpfr_float_backend<100>,
    boost::multiprecision::et_off>;

/// Sequence index. Wide enough for n ~ 1e37.
using Index = __int128;

inline constexpr int kRealBits = 333;  // ~100 decimal digits

Real to_real(Index n);

/// floor(x) as an Index. Throws std::overflow_error if |x| >= 2^126.
Index floor_index(const Real& x);

std::string to_string(Index n);

/// Parses a decimal integer. Accepts scientific forms that denote an exact
/// integer ("1e31", "2.5e3"). Throws std::invalid_argument otherwise.
Index parse_index(std::string_view text);

/// Fractional part x - floor(x) in [0, 1).
Real frac(const Real& x);

/// Fractional part rounded to the nearest double and clamped into [0, 1).
double frac_to_double(const Real& x);

/// Clamps a computed fractional value into [0, 1).
double clamp_unit(double u);

/// 2^e as a Real.
Real pow2(int e);

inline Index index_abs(Index n) { return n < 0 ? -n : n; }

Index gcd(Index a, Index b);

}  // namespace equidist
