#include "equidist/diophantine.hpp"

#include <algorithm>
#include <stdexcept>

namespace equidist {

namespace {

struct Fraction {
  Index p;
  Index q;
};

// Denominators above this are not trusted for a value known to `bits` bits.
Index trust_horizon(int bits) {
  const int e = std::clamp(bits / 2, 1, 100);
  return Index(1) << e;
}

constexpr Index kOverflowGuard = Index(1) << 120;

Index checked_step(Index a, Index x, Index prev) {
  if (a != 0 && x > (kOverflowGuard - prev) / a) throw std::overflow_error("convergent overflow");
  return a * x + prev;
}

std::vector<Convergent> finish(const std::vector<Fraction>& raw, bool last_is_exact, const Real& value,
                               bool negative, Index q_cap, bool beyond_trust) {
  std::vector<Convergent> out;
  std::size_t start = 0;
  // 1 = q_0 = q_1 happens when the first partial quotient after a_0 is 1;
  // keep only the later of the two.
  if (raw.size() >= 2 && raw[0].q == raw[1].q) start = 1;
  for (std::size_t k = start; k < raw.size(); ++k) {
    if (raw[k].q > q_cap) break;
    Convergent c;
    c.p = negative ? -raw[k].p : raw[k].p;
    c.q = raw[k].q;
    if (gcd(c.p, c.q) != 1) throw std::logic_error("convergent not in lowest terms");
    const Real err = abs(value - to_real(raw[k].p) / to_real(raw[k].q));
    c.abs_error = err.convert_to<double>();
    if (k + 1 < raw.size()) {
      c.q_next = raw[k + 1].q;
      const Real bound = 1 / (to_real(c.q) * to_real(*c.q_next));
      c.err_bound = bound.convert_to<double>();
      if (err > bound * (1 + pow2(-90))) {
        throw std::logic_error("convergent violates |theta - p/q| <= 1/(q q')");
      }
    } else {
      c.beyond_trust = beyond_trust || !last_is_exact;
      c.err_bound = c.beyond_trust ? c.abs_error : 0.0;
    }
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::vector<Convergent> convergents(const Real& theta, Index q_cap, int trusted_bits) {
  if (!isfinite(theta)) throw std::invalid_argument("theta must be finite");
  if (q_cap < 1) throw std::invalid_argument("q_cap must be >= 1");
  const bool negative = theta < 0;
  const Real x0 = abs(theta);
  const Index horizon = trust_horizon(trusted_bits);

  std::vector<Fraction> raw;
  Index a0 = floor_index(x0);
  Real rem = x0 - to_real(a0);
  Index p_prev = 1, q_prev = 0;
  Index p = a0, q = 1;
  raw.push_back({p, q});
  bool exact = false;
  bool beyond = false;
  // Continue until one convergent past q_cap is known.
  while (true) {
    if (rem == 0) {
      exact = true;
      break;
    }
    if (q > q_cap && raw.size() >= 2 && raw[raw.size() - 2].q <= q_cap) break;
    if (q > q_cap && raw.size() >= 3) break;
    const Real x = 1 / rem;
    if (x >= to_real(horizon)) {
      beyond = true;
      break;
    }
    const Index a = floor_index(x);
    rem = x - to_real(a);
    const Index p_new = checked_step(a, p, p_prev);
    const Index q_new = checked_step(a, q, q_prev);
    if (q_new > horizon) {
      beyond = true;
      break;
    }
    p_prev = p;
    q_prev = q;
    p = p_new;
    q = q_new;
    raw.push_back({p, q});
  }
  return finish(raw, exact, x0, negative, q_cap, beyond);
}

std::vector<Convergent> convergents(const RealExpr& theta, Index q_cap) {
  if (!theta.exact()) return convergents(theta.value(), q_cap, theta.trusted_bits());
  if (q_cap < 1) throw std::invalid_argument("q_cap must be >= 1");
  const Rational r = *theta.exact();
  const bool negative = r.num < 0;
  Index num = index_abs(r.num);
  Index den = r.den;
  std::vector<Fraction> raw;
  Index p_prev = 1, q_prev = 0, p = 0, q = 1;
  bool first = true;
  while (den != 0) {
    const Index a = num / den;
    const Index rem = num % den;
    if (first) {
      p = a;
      q = 1;
      first = false;
    } else {
      const Index p_new = checked_step(a, p, p_prev);
      const Index q_new = checked_step(a, q, q_prev);
      p_prev = p;
      q_prev = q;
      p = p_new;
      q = q_new;
    }
    raw.push_back({p, q});
    num = den;
    den = rem;
    if (q > q_cap && raw.size() >= 2 && raw[raw.size() - 2].q > q_cap) break;
  }
  const Real value = abs(to_real(r.num) / to_real(r.den));
  return finish(raw, den == 0, value, negative, q_cap, false);
}

Index denominator_ceiling(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  return floor_index(1 / pow(Real(epsilon), 4));
}

Convergent select_convergent(const Real& theta, double epsilon, int trusted_bits) {
  const auto list = convergents(theta, denominator_ceiling(epsilon), trusted_bits);
  return list.back();
}

Convergent select_convergent(const RealExpr& theta, double epsilon) {
  const auto list = convergents(theta, denominator_ceiling(epsilon));
  return list.back();
}

}  // namespace equidist
