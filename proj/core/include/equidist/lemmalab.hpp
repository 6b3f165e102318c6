#pragma once

// Executable checkers for the quantitative lemmas behind the certifier, and
// seeded randomized suites that drive them.

#include "equidist/discrepancy.hpp"
#include "equidist/seqlab.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace equidist {

enum class LemmaId { L3, L5, L5_remark, L6, L7, L1, L2, L4, L8, Chebyshev };

const char* to_string(LemmaId id);
std::optional<LemmaId> parse_lemma_id(std::string_view text);

/// One evaluation of a displayed inequality lhs <= rhs.
struct LemmaCheck {
  LemmaId lemma_id = LemmaId::L3;
  double lhs = 0;
  double rhs = 0;
  double margin = 0;  // rhs - lhs
  bool pass = false;
  /// L1 only: D / ((y_m - y_1)/m + K/sqrt(y_m - y_1)).
  std::optional<double> ratio;
  std::string instance_digest;
};

/// The instance does not satisfy the lemma's hypotheses. Not a failure.
struct Rejected {
  std::string reason;
};

using CheckResult = std::variant<LemmaCheck, Rejected>;

/// pass <=> margin >= -1e-9 * max(1, |rhs|)
LemmaCheck make_check(LemmaId id, double lhs, double rhs, std::string digest = {});

/// Discrepancy as used inside checkers: the oracle up to 1000 points, the
/// sorted-points form above that.
double checker_discrepancy(std::span<const double> values);

/// Closed-interval counting #(Y cap [a, b]) and half-open #(Y cap [a, b)).
std::size_t count_closed(std::span<const double> y, double a, double b);
std::size_t count_half_open(std::span<const double> y, double a, double b);

CheckResult check_counting_bound(const RealSequence& y, double a, double b);
CheckResult check_length_lower_bound(const RealSequence& y);

struct HalfOpen {
  double a;
  double b;
};
CheckResult check_interval_comparison(const RealSequence& y, HalfOpen J, HalfOpen I);

CheckResult check_discrepancy_bound_L5(const RealSequence& y);
/// The same bound with max|dy| in place of |y_m - y_1| / m.
CheckResult check_discrepancy_bound_L5_remark(const RealSequence& y);

inline constexpr double kDefaultSuiteConstant = 10.0;
CheckResult check_discrepancy_bound_L1(const RealSequence& y, double K, double constant = kDefaultSuiteConstant);

CheckResult check_perturbation(const RealSequence& x, const RealSequence& y, double eps);
CheckResult check_merge(const std::vector<RealSequence>& parts);

/// Finite-scale block aggregation. cutpoints n_0 < n_1 < ... are absolute
/// indices; blocks are (n_j, n_{j+1}]. The prefix x_{origin+1..N} must satisfy
///   D <= 2 eps + (n_0 - origin)/(N - origin) + (last block)/(N - origin) + 1e-9.
/// Rejected when a block has D > eps or n_{j+1} > (1 + eps) n_j.
CheckResult check_block_aggregation(const RealSequence& x, double eps, const std::vector<Index>& cutpoints);
CheckResult check_block_aggregation(const Sequence& seq, Index origin, double eps,
                                    const std::vector<Index>& cutpoints,
                                    const StreamOptions& stream = {});

CheckResult check_chebyshev(const RealSequence& a, const RealSequence& b);

// --- suites -------------------------------------------------------------------

struct SuiteOptions {
  std::uint64_t seed = 42;
  std::size_t accepted_target = 10'000;
  /// Gives up after this many instances even if the target is not met.
  std::size_t max_trials = 200'000;
  double constant = kDefaultSuiteConstant;  // L1 ratio ceiling
  unsigned threads = 1;
};

struct SuiteReport {
  LemmaId lemma_id = LemmaId::L3;
  std::size_t trials = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t failed = 0;
  double worst_margin = 0;
  std::optional<double> max_ratio;  // L1 only
  std::uint64_t seed = 0;
  /// Digest of the first failing instance, if any.
  std::string first_failure;
};

/// Lemmas with a randomized suite, in report order.
const std::vector<LemmaId>& suite_lemmas();

/// One deterministic random instance of the lemma, indexed by (seed, i).
CheckResult run_instance(LemmaId id, std::uint64_t seed, std::size_t i, double constant = kDefaultSuiteConstant);

SuiteReport run_suite(LemmaId id, const SuiteOptions& options);

}  // namespace equidist
