#pragma once

// Counting function and discrepancy of finite point sets modulo one.

#include "equidist/seqlab.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>

namespace equidist {

/// Half-open [a, b) with 0 <= a < b <= 1.
struct Interval {
  double a;
  double b;
  Interval(double a_, double b_);
  double length() const { return b - a; }
};

enum class DiscrepancyMethod { fast, oracle, streamed };

const char* to_string(DiscrepancyMethod method);

/// Interval whose deviation attains the discrepancy. The supremum is
/// generally not attained by a half-open interval; the flags say which
/// endpoints are counted in the limiting interval (e.g. a single point p is
/// witnessed by [p, p] with both ends counted).
struct Witness {
  double a = 0;
  double b = 0;
  bool include_a = true;
  bool include_b = false;
};

struct DiscrepancyReport {
  double value = 0;
  std::optional<Witness> witness;
  DiscrepancyMethod method = DiscrepancyMethod::fast;
};

std::size_t count_in_interval(const UnitSequence& u, const Interval& interval);

/// Signed deviation count/m - (b - a) of the witness interval.
double witness_deviation(std::span<const double> u, const Witness& w);

/// Extreme discrepancy sup_{0<=a<b<=1} |A([a,b))/m - (b-a)| via the
/// sorted-points closed form 1/m + max_i(i/m - u_(i)) - min_i(i/m - u_(i)).
DiscrepancyReport extreme_discrepancy(const UnitSequence& u);
DiscrepancyReport extreme_discrepancy(std::span<const double> u);

inline constexpr std::size_t kOracleGuard = 10'000;

/// Brute force over every candidate endpoint pair. O(d^2) in the number of
/// distinct values; refuses inputs longer than `guard`.
DiscrepancyReport extreme_discrepancy_oracle(const UnitSequence& u, std::size_t guard = kOracleGuard);
DiscrepancyReport extreme_discrepancy_oracle(std::span<const double> u, std::size_t guard = kOracleGuard);

/// Star discrepancy over anchored intervals [0, b).
double star_discrepancy(const UnitSequence& u);
double star_discrepancy(std::span<const double> u);

using BlockSink = std::function<void(std::span<const double>)>;

/// Emits every point of a set, in blocks. Must be repeatable: the streamed
/// discrepancy calls it several times and expects the same multiset.
using PointSource = std::function<void(const BlockSink&)>;

struct StreamOptions {
  std::size_t memory_points = std::size_t{1} << 24;
  unsigned bucket_bits = 20;
};

/// Exact extreme discrepancy of a point set too large to hold in memory.
/// Bucketed by value, each bucket group is collected and sorted in its own
/// pass; the result equals extreme_discrepancy() on the same multiset.
DiscrepancyReport extreme_discrepancy_streamed(const PointSource& source, const StreamOptions& options = {});

/// Points x_{first + k*stride}, k = 0..count-1, of a generated sequence.
PointSource sequence_points(const Sequence& seq, Index first, Index stride, std::size_t count);

}  // namespace equidist
