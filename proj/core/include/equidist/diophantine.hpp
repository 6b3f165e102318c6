#pragma once

// Continued-fraction convergents and the epsilon-driven convergent choice.

#include "equidist/real.hpp"
#include "equidist/real_expr.hpp"

#include <optional>
#include <vector>

namespace equidist {

/// One convergent p/q of theta. q_next is the denominator of the following
/// convergent; it is absent when the expansion ends at p/q (theta == p/q) or
/// when the next partial quotient lies beyond the precision of theta.
struct Convergent {
  Index p = 0;
  Index q = 1;
  std::optional<Index> q_next;
  /// 1/(q q_next), or 0 for the exact terminal convergent.
  double err_bound = 0;
  /// |theta - p/q| evaluated in extended precision.
  double abs_error = 0;
  /// True when the expansion stopped because theta is not known precisely
  /// enough to continue, rather than because theta == p/q.
  bool beyond_trust = false;

  bool terminal() const { return !q_next.has_value(); }
};

/// Convergents with q <= q_cap in order of strictly increasing q (the first
/// of two equal leading denominators is dropped). Each one is validated
/// against |theta - p/q| <= 1/(q q_next). Negative theta is expanded as
/// |theta| with the sign carried in p.
std::vector<Convergent> convergents(const RealExpr& theta, Index q_cap);
std::vector<Convergent> convergents(const Real& theta, Index q_cap, int trusted_bits = kRealBits);

/// The convergent with q <= eps^-4 < q_next. When the expansion ends first,
/// returns its last convergent with q_next absent.
Convergent select_convergent(const RealExpr& theta, double epsilon);
Convergent select_convergent(const Real& theta, double epsilon, int trusted_bits = kRealBits);

/// floor(eps^-4), the denominator ceiling of select_convergent.
Index denominator_ceiling(double epsilon);

}  // namespace equidist
