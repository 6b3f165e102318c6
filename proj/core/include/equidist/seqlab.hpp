#pragma once

// Sequence carriers, named generators, difference operators and the
// hypothesis scan on second differences.

#include "equidist/real.hpp"
#include "equidist/real_expr.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace equidist {

/// Finite run of finite reals x_{start}, x_{start+1}, ...
class RealSequence {
 public:
  RealSequence(Index start_index, std::vector<double> values);
  explicit RealSequence(std::vector<double> values) : RealSequence(1, std::move(values)) {}

  Index start_index() const { return start_index_; }
  Index last_index() const { return start_index_ + static_cast<Index>(values_.size()) - 1; }
  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  /// Value at absolute index n.
  double at(Index n) const;

 private:
  Index start_index_;
  std::vector<double> values_;
};

/// Points of [0, 1), typically fractional parts.
class UnitSequence {
 public:
  UnitSequence() = default;
  explicit UnitSequence(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  const std::vector<double>& values() const { return values_; }
  std::span<const double> span() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  std::vector<double> values_;
};

enum class Family { power, nlog, log, linear, quadratic, file, explicit_values };

/// Generator descriptor. Mini-language: "pow:a=1.5", "nlog", "log",
/// "linear:theta=sqrt2", "quad:theta=0.5,c=1e-12", "file:<path>",
/// "explicit:1,2.5,4".
struct SequenceSpec {
  Family family = Family::linear;
  RealExpr exponent;  // power
  RealExpr theta;     // linear, quadratic
  RealExpr curvature; // quadratic: x_n = theta*n + c*n(n-1)/2
  std::string path;   // file
  std::vector<std::string> literals;  // explicit values, verbatim text
  Index start_index = 1;              // file / explicit

  static SequenceSpec parse(std::string_view text);
  static SequenceSpec power(double a);
  static SequenceSpec linear(std::string_view theta);
  static SequenceSpec quadratic(std::string_view theta, std::string_view c);
  static SequenceSpec log();
  static SequenceSpec nlog();
  static SequenceSpec explicit_values(const std::vector<double>& values, Index start_index = 1);
  static SequenceSpec file(std::string path);

  std::string to_string() const;
};

/// A generated sequence x_n evaluated on demand in extended precision.
class Sequence {
 public:
  virtual ~Sequence() = default;

  virtual Real at(Index n) const = 0;
  virtual Index first_index() const { return 1; }
  virtual std::optional<Index> last_index() const { return std::nullopt; }
  virtual std::string name() const = 0;

  virtual Real first_difference(Index n) const;
  virtual Real second_difference(Index n) const;

  /// Cheap approximation of the second difference for dense scans.
  virtual long double second_difference_estimate(Index n) const;

  /// Fractional part of x_n as a double in [0, 1).
  virtual double frac_at(Index n) const;

  /// out[k] = {x_{first + k*stride}}. Default calls frac_at per element.
  virtual void fractional_parts(Index first, Index stride, std::span<double> out) const;

  bool contains(Index n) const;
  void require_range(Index from, Index to) const;
};

std::shared_ptr<const Sequence> make_sequence(const SequenceSpec& spec);

/// Parses the sequence file format: one decimal per line, '#' comments.
std::vector<std::string> read_sequence_file(const std::string& path);

RealSequence generate(const SequenceSpec& spec, Index from, Index to);
RealSequence generate(const Sequence& seq, Index from, Index to);

/// Fractional parts of x_from..x_to computed from the extended-precision
/// values, so large magnitudes keep their fractional information.
UnitSequence generate_fractional(const Sequence& seq, Index from, Index to);

RealSequence forward_differences(const RealSequence& x, int order);

UnitSequence fractional_parts(const RealSequence& x);

enum class MonotonicityKind { weakly_decreasing, weakly_increasing, neither };

struct MonotonicityProfile {
  MonotonicityKind kind = MonotonicityKind::neither;
  std::optional<double> constant_K;
};

MonotonicityProfile monotonicity_profile(std::span<const double> x);
inline MonotonicityProfile monotonicity_profile(const RealSequence& x) {
  return monotonicity_profile(x.values());
}

const char* to_string(MonotonicityKind kind);

struct HypothesisViolation {
  Index n = 0;
  std::string reason;
};

struct HypothesisReport {
  double epsilon = 0;
  std::optional<Index> n_epsilon;
  Index horizon = 0;
  /// True when Delta^2 x_n is negative on the tail and the scan ran on its
  /// negation (the weakly-increasing orientation).
  bool negated = false;
  std::vector<HypothesisViolation> violations;  // the last few only
  std::size_t violation_count = 0;
  std::size_t samples = 0;
};

/// Second-difference window required at index n:
///   1 / (eps^8 n^2) <= D2 < eps^12.
/// Returns a reason string when it fails.
std::optional<std::string> hypothesis_failure(const Real& second_difference, Index n, double epsilon);

inline constexpr Index kDenseScanLimit = 10'000'000;

HypothesisReport hypothesis_scan(const Sequence& seq, double epsilon, Index horizon);
HypothesisReport hypothesis_scan(const SequenceSpec& spec, double epsilon, Index horizon);

void require_epsilon(double epsilon);

}  // namespace equidist
