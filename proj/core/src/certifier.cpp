#include "equidist/certifier.hpp"

#include "equidist/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace equidist {

namespace {

// -x_n, for sequences whose second differences are negative.
class NegatedSequence final : public Sequence {
 public:
  explicit NegatedSequence(const Sequence& base) : base_(base) {}

  Real at(Index n) const override { return -base_.at(n); }
  Index first_index() const override { return base_.first_index(); }
  std::optional<Index> last_index() const override { return base_.last_index(); }
  std::string name() const override { return "-(" + base_.name() + ")"; }
  Real first_difference(Index n) const override { return -base_.first_difference(n); }
  Real second_difference(Index n) const override { return -base_.second_difference(n); }
  long double second_difference_estimate(Index n) const override {
    return -base_.second_difference_estimate(n);
  }
  double frac_at(Index n) const override { return flip(base_.frac_at(n)); }
  void fractional_parts(Index first, Index stride, std::span<double> out) const override {
    base_.fractional_parts(first, stride, out);
    for (double& u : out) u = flip(u);
  }

 private:
  static double flip(double u) { return u == 0.0 ? 0.0 : clamp_unit(1.0 - u); }
  const Sequence& base_;
};

struct Oriented {
  const Sequence* seq;
  std::unique_ptr<NegatedSequence> holder;
  bool negated = false;
};

Oriented orient(const Sequence& seq, Index n) {
  Oriented o{&seq, nullptr, false};
  if (seq.second_difference(n) < 0) {
    o.holder = std::make_unique<NegatedSequence>(seq);
    o.seq = o.holder.get();
    o.negated = true;
  }
  return o;
}

Real inverse_power(double epsilon, int k) { return 1 / pow(Real(epsilon), k); }

void require_above_floor(Index n, double epsilon) {
  const Real floor5 = inverse_power(epsilon, 5);
  if (!(to_real(n) > floor5)) {
    throw HypothesisError("hypothesis violated: n=" + to_string(n) + " does not exceed eps^-5 = " +
                          floor5.str(8));
  }
}

void require_window(const Sequence& s, Index n, double epsilon) {
  if (auto why = hypothesis_failure(s.second_difference(n), n, epsilon)) {
    throw HypothesisError("hypothesis violated: " + *why);
  }
}

// dy_k(r) = -p + x_{n+r+kq} - x_{n+r+(k-1)q}
Real residue_step(const Sequence& s, Index n, Index p, Index q, Index r, Index k) {
  return s.at(n + r + k * q) - s.at(n + r + (k - 1) * q) - to_real(p);
}

// Largest k in [1, horizon] with dy_k(r) <= 0, found by bisection on the
// nondecreasing dy.
SignChange locate_sign_change(const Sequence& s, Index n, Index p, Index q, Index r, Index horizon) {
  if (residue_step(s, n, p, q, r, 1) > 0) return {Index(0), true};
  if (residue_step(s, n, p, q, r, horizon) <= 0) return {std::nullopt, false};
  Index lo = 1, hi = horizon;  // dy(lo) <= 0 < dy(hi)
  while (hi - lo > 1) {
    const Index mid = lo + (hi - lo) / 2;
    if (residue_step(s, n, p, q, r, mid) <= 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {lo, true};
}

DiscrepancyReport stream_discrepancy(const Sequence& s, Index first, Index stride, Index count,
                                     const StreamOptions& stream) {
  return extreme_discrepancy_streamed(sequence_points(s, first, stride, static_cast<std::size_t>(count)), stream);
}

// Second differences at evenly spaced points of [from, to].
bool sampled_convexity(const Sequence& s, Index from, Index to) {
  constexpr int kSamples = 16;
  for (int i = 0; i <= kSamples; ++i) {
    const Index j = from + (to - from) * i / kSamples;
    if (s.second_difference(j) < Real(-1e-12)) return false;
  }
  return true;
}

void run_case1(const Sequence& s, SegmentCertificate& cert, const CertifyOptions& options) {
  const Index q = cert.q;
  const Index n = cert.n;
  cert.m = q;
  cert.covered = q;
  if (q > options.max_segment_points) {
    throw CertificationError("segment of " + to_string(q) + " points exceeds the point budget",
                             std::make_shared<SegmentCertificate>(cert));
  }
  const std::size_t count = static_cast<std::size_t>(q);
  const Real xn = s.at(n);
  const Real p_over_q = to_real(cert.p) / to_real(q);
  std::vector<double> fracs(count);
  const unsigned threads = std::max(1u, options.threads);
  const std::size_t chunks = std::min<std::size_t>(count, threads * 4);
  std::vector<Real> drift(chunks, Real(0));
  parallel_for(chunks, threads, [&](std::size_t c) {
    const std::size_t lo = count * c / chunks;
    const std::size_t hi = count * (c + 1) / chunks;
    Real worst = 0;
    for (std::size_t i = lo; i < hi; ++i) {
      const Index j = static_cast<Index>(i) + 1;
      const Real x = s.at(n + j);
      fracs[i] = frac_to_double(x);
      worst = std::max(worst, Real(abs(x - xn - to_real(j) * p_over_q)));
    }
    drift[c] = worst;
  });
  const Real max_drift = *std::max_element(drift.begin(), drift.end());
  cert.checks.max_drift = max_drift.convert_to<double>();
  cert.checks.drift = max_drift <= Real(2) / to_real(q);

  const auto report = extreme_discrepancy(fracs);
  cert.measured_D = report.value;
  cert.witness = report.witness;

  // Z = {jp/q mod 1}
  std::vector<double> z(count);
  const Index pm = ((cert.p % q) + q) % q;
  for (std::size_t i = 0; i < count; ++i) {
    z[i] = static_cast<double>((static_cast<Index>(i + 1) * pm) % q) / static_cast<double>(q);
  }
  const double dz = extreme_discrepancy(z).value;
  cert.checks.residue_system = std::fabs(dz - 1.0 / static_cast<double>(q)) <= 1e-12;
  cert.checks.coverage = to_real(q) <= to_real(n) * Real(cert.epsilon);
  cert.checks.p1 = sampled_convexity(s, n, n + q);
}

void run_case2(const Sequence& s, SegmentCertificate& cert, const CertifyOptions& options) {
  const Index n = cert.n;
  const Index p = cert.p;
  const Index q = cert.q;
  const double epsilon = cert.epsilon;
  const Real eps(epsilon);
  const Index horizon = 3 * n;

  cert.h_values.assign(static_cast<std::size_t>(q + 1), SignChange{});
  parallel_for(cert.h_values.size(), options.threads, [&](std::size_t r) {
    cert.h_values[r] = locate_sign_change(s, n, p, q, static_cast<Index>(r), horizon);
  });
  const SignChange h0 = cert.h_values[0];
  cert.h0 = h0;
  for (Index r = 1; r <= q; ++r) {
    const SignChange& hr = cert.h_values[static_cast<std::size_t>(r)];
    if (h0.infinite()) {
      cert.checks.h_monotone = cert.checks.h_monotone && (hr.infinite() || *hr.h >= horizon - 1);
    } else {
      cert.checks.h_monotone =
          cert.checks.h_monotone && !hr.infinite() && *hr.h <= *h0.h && *hr.h >= *h0.h - 1;
    }
  }

  const Real n_eps2 = to_real(n) * eps * eps;
  const Index l = floor_index(n_eps2);

  auto y_gain = [&](Index m) {  // y_m(0) - y_{h0+1}(0)
    return s.at(n + (m - 1) * q) - s.at(n + *h0.h * q) - to_real((m - *h0.h - 1) * p);
  };

  auto fallback = [&](std::string why) {
    cert.kind = SegmentCase::fallback;
    cert.fallback_reason = std::move(why);
    cert.m = std::max<Index>(1, l - 1);
  };

  if (!h0.infinite()) {
    const Index h = *h0.h;
    cert.delta = (s.at(n + h * q) - 2 * s.at(n + (h - 1) * q) + s.at(n + (h - 2) * q)).convert_to<double>();
  }

  if (h0.infinite() || to_real(*h0.h) >= n_eps2) {
    cert.kind = SegmentCase::case2_1;
    cert.m = l - 1;
    if (cert.m <= 0) fallback("floor(n eps^2) - 1 <= 0");
  } else if (!(*cert.delta > 0)) {
    fallback("delta <= 0");
  } else {
    const Index h = *h0.h;
    const Real delta = s.at(n + h * q) - 2 * s.at(n + (h - 1) * q) + s.at(n + (h - 2) * q);
    if (1 / (eps * sqrt(delta)) < to_real(h)) {
      cert.kind = SegmentCase::case2_2;
      cert.m = h - 2;
      if (cert.m <= 0) fallback("h(0) - 2 <= 0");
    } else {
      const Index cap = 2 * l;
      const Real target = inverse_power(epsilon, 4);
      if (h + 2 > cap) {
        fallback("h(0) + 2 exceeds 2 floor(n eps^2)");
      } else {
        cert.kind = SegmentCase::case2_3;
        Index m = cap;
        if (y_gain(h + 2) >= target) {
          m = h + 2;
        } else if (y_gain(cap) >= target) {
          Index lo = h + 2, hi = cap;  // gain(lo) < target <= gain(hi)
          while (hi - lo > 1) {
            const Index mid = lo + (hi - lo) / 2;
            if (y_gain(mid) >= target) {
              hi = mid;
            } else {
              lo = mid;
            }
          }
          m = hi;
        }
        cert.m = m;
        cert.threshold_ratio = (y_gain(m) / target).convert_to<double>();
        cert.prefix_slack = static_cast<double>(h) / static_cast<double>(m);
      }
    }
  }

  cert.covered = q * cert.m;
  if (cert.covered > options.max_segment_points) {
    throw CertificationError("segment of " + to_string(cert.covered) + " points exceeds the point budget",
                             std::make_shared<SegmentCertificate>(cert));
  }
  cert.checks.coverage = to_real(cert.covered) <= 2 * to_real(n) * eps;

  const auto report = stream_discrepancy(s, n + 1, 1, cert.covered, options.stream);
  cert.measured_D = report.value;
  cert.witness = report.witness;
  if (q == 1) {
    cert.class_max_D = report.value;
  } else {
    std::vector<double> per_class(static_cast<std::size_t>(q));
    parallel_for(per_class.size(), options.threads, [&](std::size_t i) {
      per_class[i] = stream_discrepancy(s, n + static_cast<Index>(i) + 1, q, cert.m, options.stream).value;
    });
    cert.class_max_D = *std::max_element(per_class.begin(), per_class.end());
  }
  cert.checks.interleave = cert.measured_D <= cert.class_max_D + 1e-12;

  // dy_k(r) - alpha is a sum of second differences over [n, n + r + kq].
  bool p1 = sampled_convexity(s, n, n + cert.covered + q);
  const Real alpha = to_real(q) * s.first_difference(n) - to_real(p);
  for (Index k : {Index(1), std::max<Index>(1, cert.m / 2), cert.m}) {
    p1 = p1 && residue_step(s, n, p, q, 0, k) - alpha >= Real(-1e-12);
  }
  cert.checks.p1 = p1;
}

}  // namespace

ResidueSequence residue_sequence(const Sequence& seq, Index n, Index p, Index q, Index r, Index k_max) {
  if (q < 1 || r < 1 || r > q) throw std::invalid_argument("residue index r must lie in [1, q]");
  if (k_max < 3) throw std::invalid_argument("k_max must be >= 3");
  seq.require_range(n + r, n + r + (k_max - 1) * q);
  ResidueSequence out{n, p, q, r, {}, {}};
  out.values.reserve(static_cast<std::size_t>(k_max));
  Real prev = 0;
  for (Index k = 1; k <= k_max; ++k) {
    const Real y = seq.at(n + r + (k - 1) * q) - to_real(k * p);
    out.values.push_back(y.convert_to<double>());
    if (k > 1) out.differences.push_back((y - prev).convert_to<double>());
    prev = y;
  }
  return out;
}

ResidueSequence residue_sequence(const SequenceSpec& spec, Index n, Index p, Index q, Index r, Index k_max) {
  return residue_sequence(*make_sequence(spec), n, p, q, r, k_max);
}

SignChange sign_change_index(std::span<const double> dy) {
  for (std::size_t i = 0; i + 1 < dy.size(); ++i) {
    if (dy[i + 1] < dy[i]) {
      throw HypothesisError("hypothesis violated: residue differences decrease at k=" + std::to_string(i + 2));
    }
  }
  std::size_t h = 0;
  while (h < dy.size() && dy[h] <= 0) ++h;
  if (h == dy.size()) return {std::nullopt, false};
  return {static_cast<Index>(h), true};
}

SignChange sign_change_index(const ResidueSequence& y) { return sign_change_index(y.differences); }

const char* to_string(SegmentCase c) {
  switch (c) {
    case SegmentCase::case1: return "case1";
    case SegmentCase::case2_1: return "case2_1";
    case SegmentCase::case2_2: return "case2_2";
    case SegmentCase::case2_3: return "case2_3";
    case SegmentCase::fallback: return "fallback";
  }
  return "?";
}

SegmentCertificate build_segment(const Sequence& seq, Index n, double epsilon, const CertifyOptions& options) {
  require_epsilon(epsilon);
  require_above_floor(n, epsilon);
  const Oriented o = orient(seq, n);
  const Sequence& s = *o.seq;
  require_window(s, n, epsilon);

  SegmentCertificate cert;
  cert.n = n;
  cert.epsilon = epsilon;
  cert.negated = o.negated;

  const Real dx = s.first_difference(n);
  const Convergent c = select_convergent(dx, epsilon);
  cert.p = c.p;
  cert.q = c.q;
  cert.q_next = c.q_next;
  const Real alpha = to_real(c.q) * dx - to_real(c.p);
  cert.alpha = alpha.convert_to<double>();
  cert.checks.alpha = abs(alpha) < pow(Real(epsilon), 4);

  if (to_real(c.q) * Real(epsilon) > 1) {
    cert.kind = SegmentCase::case1;
    run_case1(s, cert, options);
  } else {
    run_case2(s, cert, options);
  }
  cert.bound_ratio = cert.measured_D / epsilon;
  return cert;
}

SegmentCertificate build_segment(const SequenceSpec& spec, Index n, double epsilon, const CertifyOptions& options) {
  return build_segment(*make_sequence(spec), n, epsilon, options);
}

LemmaCheck interleave_check(const SegmentCertificate& cert, const Sequence& seq, const StreamOptions& stream) {
  if (cert.kind == SegmentCase::case1) throw std::invalid_argument("interleave check needs a Case 2 segment");
  if (cert.m < 1) throw std::invalid_argument("segment has no elements");
  const Oriented o = orient(seq, cert.n);
  const Sequence& s = *o.seq;
  const double whole = stream_discrepancy(s, cert.n + 1, 1, cert.q * cert.m, stream).value;
  double worst = 0;
  for (Index r = 1; r <= cert.q; ++r) {
    worst = std::max(worst, stream_discrepancy(s, cert.n + r, cert.q, cert.m, stream).value);
  }
  return make_check(LemmaId::L8, whole, worst + 1e-12,
                    "interleave n=" + to_string(cert.n) + " q=" + to_string(cert.q) + " m=" + to_string(cert.m));
}

LemmaCheck interleave_check(const SegmentCertificate& cert, const SequenceSpec& spec, const StreamOptions& stream) {
  return interleave_check(cert, *make_sequence(spec), stream);
}

CertificateRun certify_range(const Sequence& seq, double epsilon, Index n_start, Index n_end,
                             const CertifyOptions& options, const SegmentCallback& on_segment) {
  require_epsilon(epsilon);
  if (n_end < n_start) throw std::invalid_argument("n_end must be >= n_start");
  require_above_floor(n_start, epsilon);

  CertificateRun run;
  run.epsilon = epsilon;
  run.n_start = n_start;
  run.n_end = n_start;
  run.constant_C = options.constant_C;

  const auto scan = hypothesis_scan(seq, epsilon, std::max(n_end, n_start + 1));
  if (!scan.n_epsilon) {
    const std::string why = scan.violations.empty() ? std::string("no admissible n") : scan.violations.back().reason;
    throw HypothesisError("hypothesis violated: " + why);
  }
  run.n_epsilon = *scan.n_epsilon;
  if (n_start < run.n_epsilon) {
    throw HypothesisError("hypothesis violated: n_start=" + to_string(n_start) + " is below n(eps)=" +
                          to_string(run.n_epsilon));
  }
  if (n_start == n_end) return run;

  std::vector<Index> cuts{n_start};
  Index n = n_start;
  double worst_block = 0;
  while (n < n_end) {
    SegmentCertificate seg = build_segment(seq, n, epsilon, options);
    if (!seg.checks.all()) {
      throw CertificationError("segment invariants failed at n=" + to_string(n),
                               std::make_shared<SegmentCertificate>(seg));
    }
    if (seg.bound_ratio > options.constant_C) {
      char buf[200];
      const Witness w = seg.witness.value_or(Witness{});
      std::snprintf(buf, sizeof buf, "bound ratio %.6g exceeds C=%.6g at n=%s, witness [%.17g, %.17g]",
                    seg.bound_ratio, options.constant_C, to_string(n).c_str(), w.a, w.b);
      throw CertificationError(buf, std::make_shared<SegmentCertificate>(seg));
    }
    worst_block = std::max(worst_block, seg.measured_D);
    n += seg.covered;
    cuts.push_back(n);
    if (on_segment) on_segment(seg);
    run.segments.push_back(std::move(seg));
  }
  run.n_end = n;

  const Oriented o = orient(seq, n_start);
  run.eps_aggregate = std::max(2 * epsilon, worst_block);
  const CheckResult agg = check_block_aggregation(*o.seq, n_start, run.eps_aggregate, cuts, options.stream);
  if (const auto* check = std::get_if<LemmaCheck>(&agg)) {
    run.aggregation = *check;
    run.aggregate_D = check->lhs;
  } else {
    run.aggregation_rejected = std::get<Rejected>(agg).reason;
    run.aggregate_D = stream_discrepancy(*o.seq, n_start + 1, 1, n - n_start, options.stream).value;
  }
  return run;
}

CertificateRun certify_range(const SequenceSpec& spec, double epsilon, Index n_start, Index n_end,
                             const CertifyOptions& options, const SegmentCallback& on_segment) {
  return certify_range(*make_sequence(spec), epsilon, n_start, n_end, options, on_segment);
}

}  // namespace equidist
