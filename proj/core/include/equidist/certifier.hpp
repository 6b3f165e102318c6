#pragma once

// Segment-by-segment certification of small discrepancy for sequences whose
// second differences sit in the window 1/(eps^8 n^2) <= D2 < eps^12.
//
// At each n the first difference is approximated by a convergent p/q with
// q <= eps^-4 < q'. Large q gives a segment that is a perturbed full residue
// system; small q splits the indices into q residue classes whose detrended
// values y_k(r) = -kp + x_{n+r+(k-1)q} are convex, and the sign change of
// dy_k(0) picks the segment length.

#include "equidist/diophantine.hpp"
#include "equidist/discrepancy.hpp"
#include "equidist/lemmalab.hpp"
#include "equidist/seqlab.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace equidist {

/// Raised when the second-difference window fails at a point the
/// certifier needs.
class HypothesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SegmentCertificate;

/// Raised when a segment exceeds the acceptance constant or its internal
/// invariants fail. Carries the offending segment.
class CertificationError : public std::runtime_error {
 public:
  CertificationError(const std::string& what, std::shared_ptr<const SegmentCertificate> segment)
      : std::runtime_error(what), segment_(std::move(segment)) {}
  const SegmentCertificate* segment() const { return segment_.get(); }

 private:
  std::shared_ptr<const SegmentCertificate> segment_;
};

/// y_k(r) for k = 1..k_max together with dy_k(r) = y_{k+1}(r) - y_k(r)
/// evaluated in extended precision before rounding.
struct ResidueSequence {
  Index n = 0;
  Index p = 0;
  Index q = 1;
  Index r = 1;
  std::vector<double> values;
  std::vector<double> differences;
};

/// 1 <= r <= q, k_max >= 3.
ResidueSequence residue_sequence(const SequenceSpec& spec, Index n, Index p, Index q, Index r, Index k_max);
ResidueSequence residue_sequence(const Sequence& seq, Index n, Index p, Index q, Index r, Index k_max);

/// h = #{k : dy_k <= 0} when some dy_k > 0; absent (infinite) otherwise.
struct SignChange {
  std::optional<Index> h;
  bool beta_positive = false;

  bool infinite() const { return !h.has_value(); }
};

/// Throws HypothesisError if dy decreases somewhere.
SignChange sign_change_index(std::span<const double> dy);
SignChange sign_change_index(const ResidueSequence& y);

enum class SegmentCase { case1, case2_1, case2_2, case2_3, fallback };
const char* to_string(SegmentCase c);

struct SegmentChecks {
  /// Case 1: D({jp/q}) == 1/q and max_j |x_{n+j} - x_n - jp/q| <= 2/q.
  bool residue_system = true;
  double max_drift = 0;
  bool drift = true;
  /// |alpha| < eps^4.
  bool alpha = true;
  /// h(0) >= h(r) >= h(0) - 1 for 1 <= r <= q.
  bool h_monotone = true;
  /// Sampled second differences over the segment are >= -1e-12.
  bool p1 = true;
  /// Case 2: qm <= 2 n eps. Case 1: q <= n eps.
  bool coverage = true;
  /// Case 2: D(union) <= max_r D(class r) + 1e-12.
  bool interleave = true;

  bool all() const { return residue_system && drift && alpha && h_monotone && p1 && coverage && interleave; }
};

struct SegmentCertificate {
  Index n = 0;
  Index m = 0;
  Index covered = 0;  // q for case 1, q*m otherwise
  SegmentCase kind = SegmentCase::case1;
  Index p = 0;
  Index q = 1;
  std::optional<Index> q_next;
  double alpha = 0;
  /// Absent when q > 1/eps; h0 itself is absent inside h_values when no
  /// sign change was found within 3n.
  std::optional<SignChange> h0;
  std::vector<SignChange> h_values;  // r = 0..q
  std::optional<double> delta;
  double measured_D = 0;
  double class_max_D = 0;
  std::optional<Witness> witness;
  double epsilon = 0;
  double bound_ratio = 0;
  /// Case 2.3: h0/m, the share of the segment before the sign change.
  double prefix_slack = 0;
  /// Case 2.3: (y_m(0) - y_{h0+1}(0)) * eps^4.
  std::optional<double> threshold_ratio;
  bool negated = false;
  std::string fallback_reason;
  SegmentChecks checks;
};

struct CertifyOptions {
  double constant_C = 10.0;
  unsigned threads = 1;
  /// A segment needing more points than this raises CertificationError
  /// before any evaluation.
  Index max_segment_points = Index(1) << 33;
  StreamOptions stream;
};

SegmentCertificate build_segment(const SequenceSpec& spec, Index n, double epsilon, const CertifyOptions& options = {});
SegmentCertificate build_segment(const Sequence& seq, Index n, double epsilon, const CertifyOptions& options = {});

/// Recomputes the union and per-class discrepancies of a Case 2 segment.
LemmaCheck interleave_check(const SegmentCertificate& cert, const SequenceSpec& spec, const StreamOptions& stream = {});
LemmaCheck interleave_check(const SegmentCertificate& cert, const Sequence& seq, const StreamOptions& stream = {});

struct CertificateRun {
  double epsilon = 0;
  Index n_epsilon = 0;
  Index n_start = 0;
  Index n_end = 0;  // last covered index
  double constant_C = 10;
  std::vector<SegmentCertificate> segments;
  double aggregate_D = 0;
  /// Block-aggregation constant: max(2 eps, largest block discrepancy).
  double eps_aggregate = 0;
  std::optional<LemmaCheck> aggregation;
  std::string aggregation_rejected;
};

using SegmentCallback = std::function<void(const SegmentCertificate&)>;

/// Chains n <- n + covered from n_start until n >= n_end. Each segment is
/// passed to on_segment as soon as it is certified.
CertificateRun certify_range(const SequenceSpec& spec, double epsilon, Index n_start, Index n_end,
                             const CertifyOptions& options = {}, const SegmentCallback& on_segment = {});
CertificateRun certify_range(const Sequence& seq, double epsilon, Index n_start, Index n_end,
                             const CertifyOptions& options = {}, const SegmentCallback& on_segment = {});

}  // namespace equidist
