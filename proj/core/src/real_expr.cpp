#include "equidist/real_expr.hpp"

#include <boost/math/constants/constants.hpp>

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace equidist {

namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

bool is_decimal(std::string_view s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  bool digits = false;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) { ++i; digits = true; }
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) { ++i; digits = true; }
  }
  if (!digits) return false;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    bool exp_digits = false;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) { ++i; exp_digits = true; }
    if (!exp_digits) return false;
  }
  return i == s.size();
}

Rational reduce(Index num, Index den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  if (den < 0) { num = -num; den = -den; }
  const Index g = gcd(num, den);
  if (g > 1) { num /= g; den /= g; }
  return {num, den};
}

// Exact rational value of a decimal literal, if it fits in 128 bits.
std::optional<Rational> decimal_rational(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  std::string digits;
  int scale = 0;
  bool point = false;
  std::size_t i = 0;
  for (; i < s.size() && s[i] != 'e' && s[i] != 'E'; ++i) {
    if (s[i] == '.') { point = true; continue; }
    digits.push_back(s[i]);
    if (point) ++scale;
  }
  int exponent = 0;
  if (i < s.size()) exponent = std::stoi(std::string(s.substr(i + 1)));
  scale -= exponent;
  if (digits.size() > 36 || scale > 36 || scale < -36) return std::nullopt;
  Index num = 0;
  for (char c : digits) num = num * 10 + (c - '0');
  Index den = 1;
  for (; scale < 0; ++scale) {
    if (num > (Index(1) << 120)) return std::nullopt;
    num *= 10;
  }
  for (int k = 0; k < scale; ++k) den *= 10;
  return reduce(negative ? -num : num, den);
}

}  // namespace

RealExpr RealExpr::parse(std::string_view raw) {
  const std::string text = trim(raw);
  if (text.empty()) throw std::invalid_argument("empty real expression");
  RealExpr out;
  out.text_ = text;
  out.trusted_bits_ = kRealBits;

  std::string body = text;
  bool negative = false;
  if (body.front() == '-' && !is_decimal(body)) {
    negative = true;
    body.erase(body.begin());
  }

  if (is_decimal(body)) {
    out.value_ = Real(body);
    out.exact_ = decimal_rational(body);
    return out;
  }

  out.exact_.reset();
  if (const auto slash = body.find('/'); slash != std::string::npos) {
    const Index num = parse_index(body.substr(0, slash));
    const Index den = parse_index(body.substr(slash + 1));
    out.exact_ = reduce(negative ? -num : num, den);
    out.value_ = to_real(out.exact_->num) / to_real(out.exact_->den);
    return out;
  }
  if (body == "golden" || body == "phi") {
    out.value_ = (1 + sqrt(Real(5))) / 2;
  } else if (body == "pi") {
    out.value_ = boost::math::constants::pi<Real>();
  } else if (body == "e") {
    out.value_ = exp(Real(1));
  } else if (body.rfind("sqrt", 0) == 0) {
    std::string arg = body.substr(4);
    if (!arg.empty() && arg.front() == '(' && arg.back() == ')') {
      arg = arg.substr(1, arg.size() - 2);
    }
    if (!is_decimal(arg)) throw std::invalid_argument("bad sqrt argument in '" + text + "'");
    const Real radicand(arg);
    if (radicand < 0) throw std::invalid_argument("negative radicand in '" + text + "'");
    out.value_ = sqrt(radicand);
    const Real root = floor(out.value_);
    if (root * root == radicand) out.exact_ = Rational{floor_index(root), 1};
  } else {
    throw std::invalid_argument("unrecognized real expression '" + text + "'");
  }
  if (negative) {
    out.value_ = -out.value_;
    if (out.exact_) out.exact_->num = -out.exact_->num;
  }
  return out;
}

RealExpr RealExpr::from_double(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite real");
  RealExpr out;
  out.value_ = Real(value);
  out.exact_.reset();
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  out.text_ = buf;
  out.trusted_bits_ = 53;
  return out;
}

}  // namespace equidist
