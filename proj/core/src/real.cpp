#include "equidist/real.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace equidist {

namespace {

constexpr Index kIndexMax = (Index(1) << 126);

}  // namespace

Real to_real(Index n) {
  if (n >= INT64_MIN && n <= INT64_MAX) {
    return Real(static_cast<long long>(n));
  }
  const bool negative = n < 0;
  const unsigned __int128 magnitude =
      negative ? static_cast<unsigned __int128>(-n) : static_cast<unsigned __int128>(n);
  const auto hi = static_cast<unsigned long long>(magnitude >> 64);
  const auto lo = static_cast<unsigned long long>(magnitude);
  Real r = Real(hi) * pow2(64) + Real(lo);
  return negative ? Real(-r) : r;
}

Index floor_index(const Real& x) {
  Real f = floor(x);
  if (abs(f) >= to_real(kIndexMax)) {
    throw std::overflow_error("value out of index range");
  }
  const bool negative = f < 0;
  if (negative) f = -f;
  const Real two64 = pow2(64);
  const Real hi_r = floor(f / two64);
  const Real lo_r = f - hi_r * two64;
  const auto hi = hi_r.convert_to<unsigned long long>();
  const auto lo = lo_r.convert_to<unsigned long long>();
  const Index magnitude =
      static_cast<Index>((static_cast<unsigned __int128>(hi) << 64) | lo);
  return negative ? -magnitude : magnitude;
}

std::string to_string(Index n) {
  if (n == 0) return "0";
  const bool negative = n < 0;
  unsigned __int128 m =
      negative ? static_cast<unsigned __int128>(-n) : static_cast<unsigned __int128>(n);
  std::string digits;
  while (m != 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(m % 10)));
    m /= 10;
  }
  if (negative) digits.push_back('-');
  std::reverse(digits.begin(), digits.end());
  return digits;
}

Index parse_index(std::string_view text) {
  const std::string original(text);
  auto fail = [&]() -> Index {
    throw std::invalid_argument("not an integer index: '" + original + "'");
  };
  if (text.empty()) return fail();
  bool negative = false;
  if (text.front() == '+' || text.front() == '-') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  std::string mantissa;
  int fraction_digits = 0;
  bool seen_point = false;
  std::size_t pos = 0;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mantissa.push_back(c);
      if (seen_point) ++fraction_digits;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (c == '_' || c == '\'') {
      continue;
    } else {
      break;
    }
  }
  if (mantissa.empty()) return fail();
  int exponent = 0;
  if (pos < text.size()) {
    if (text[pos] != 'e' && text[pos] != 'E') return fail();
    ++pos;
    bool exp_negative = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      exp_negative = text[pos] == '-';
      ++pos;
    }
    if (pos >= text.size()) return fail();
    for (; pos < text.size(); ++pos) {
      if (!std::isdigit(static_cast<unsigned char>(text[pos]))) return fail();
      exponent = exponent * 10 + (text[pos] - '0');
      if (exponent > 60) return fail();
    }
    if (exp_negative) exponent = -exponent;
  }
  int shift = exponent - fraction_digits;
  while (shift < 0) {
    if (mantissa.back() != '0') return fail();
    mantissa.pop_back();
    ++shift;
    if (mantissa.empty()) mantissa = "0";
  }
  mantissa.append(static_cast<std::size_t>(shift), '0');
  Index value = 0;
  for (char c : mantissa) {
    if (value > (kIndexMax - 9) / 10) {
      throw std::out_of_range("index too large: '" + original + "'");
    }
    value = value * 10 + (c - '0');
  }
  return negative ? -value : value;
}

Real frac(const Real& x) { return x - floor(x); }

double clamp_unit(double u) {
  if (!(u > 0.0)) return 0.0;  // also maps -0.0 and NaN to 0
  if (u >= 1.0) return std::nextafter(1.0, 0.0);
  return u;
}

double frac_to_double(const Real& x) { return clamp_unit(frac(x).convert_to<double>()); }

Real pow2(int e) { return ldexp(Real(1), e); }

Index gcd(Index a, Index b) {
  a = index_abs(a);
  b = index_abs(b);
  while (b != 0) {
    const Index t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace equidist
