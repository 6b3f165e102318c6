#include "equidist/lemmalab.hpp"

#include "equidist/parallel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>

namespace equidist {

namespace {

constexpr std::size_t kOracleLimit = 1000;

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// FNV-1a over the bit patterns of the inputs.
class Digest {
 public:
  Digest& add(double v) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) {
      h_ ^= (bits >> (8 * i)) & 0xff;
      h_ *= 0x100000001b3ULL;
    }
    return *this;
  }
  Digest& add(std::span<const double> vs) {
    for (double v : vs) add(v);
    return *this;
  }
  std::string str(const char* tag) const { return std::string(tag) + ":" + hex64(h_); }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

std::vector<double> differences(std::span<const double> y) {
  std::vector<double> d;
  if (y.size() < 2) return d;
  d.reserve(y.size() - 1);
  for (std::size_t i = 0; i + 1 < y.size(); ++i) d.push_back(y[i + 1] - y[i]);
  return d;
}

// -1, 0 or +1 when the values are nonincreasing, constant or nondecreasing;
// nullopt when neither.
std::optional<int> monotone_direction(std::span<const double> v) {
  bool up = true, down = true;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    if (v[i + 1] < v[i]) up = false;
    if (v[i + 1] > v[i]) down = false;
  }
  if (up && down) return 0;
  if (up) return 1;
  if (down) return -1;
  return std::nullopt;
}

bool strictly_increasing(std::span<const double> v) {
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    if (!(v[i + 1] > v[i])) return false;
  }
  return true;
}

double min_abs(std::span<const double> v) {
  double out = std::numeric_limits<double>::infinity();
  for (double x : v) out = std::min(out, std::fabs(x));
  return out;
}

double max_abs(std::span<const double> v) {
  double out = 0;
  for (double x : v) out = std::max(out, std::fabs(x));
  return out;
}

// y and dy both monotone; with `strict_curvature`, min|d2y| > 0 as well.
std::optional<std::string> convex_conditions(std::span<const double> y, bool strict_curvature) {
  if (y.size() < 3) return "need at least 3 terms";
  const auto dy = differences(y);
  const auto d2 = differences(dy);
  if (!monotone_direction(y)) return "y is not monotone";
  if (!monotone_direction(dy)) return "dy is not monotone";
  if (strict_curvature && !(min_abs(d2) > 0)) return "min |d2y| is zero";
  return std::nullopt;
}

std::size_t max_unit_count(std::span<const double> y) {
  std::vector<double> fl;
  fl.reserve(y.size());
  for (double v : y) fl.push_back(std::floor(v));
  std::sort(fl.begin(), fl.end());
  std::size_t best = 0;
  for (std::size_t i = 0; i < fl.size();) {
    std::size_t j = i;
    while (j < fl.size() && fl[j] == fl[i]) ++j;
    best = std::max(best, j - i);
    i = j;
  }
  return best;
}

// Weakly-decreasing constant of d2y; a single nonnegative value has K = 1.
std::optional<double> curvature_constant(std::span<const double> d2) {
  if (d2.size() == 1) return d2[0] >= 0 ? std::optional<double>(1.0) : std::nullopt;
  const auto profile = monotonicity_profile(d2);
  if (profile.kind != MonotonicityKind::weakly_decreasing) return std::nullopt;
  return profile.constant_K;
}

double unit_discrepancy(std::span<const double> u) {
  if (u.size() <= kOracleLimit) return extreme_discrepancy_oracle(u, kOracleLimit).value;
  return extreme_discrepancy(u).value;
}

}  // namespace

const char* to_string(LemmaId id) {
  switch (id) {
    case LemmaId::L3: return "L3";
    case LemmaId::L5: return "L5";
    case LemmaId::L5_remark: return "L5_remark";
    case LemmaId::L6: return "L6";
    case LemmaId::L7: return "L7";
    case LemmaId::L1: return "L1";
    case LemmaId::L2: return "L2";
    case LemmaId::L4: return "L4";
    case LemmaId::L8: return "L8";
    case LemmaId::Chebyshev: return "Chebyshev";
  }
  return "?";
}

std::optional<LemmaId> parse_lemma_id(std::string_view text) {
  for (LemmaId id : {LemmaId::L3, LemmaId::L5, LemmaId::L5_remark, LemmaId::L6, LemmaId::L7, LemmaId::L1,
                     LemmaId::L2, LemmaId::L4, LemmaId::L8, LemmaId::Chebyshev}) {
    if (text == to_string(id)) return id;
  }
  if (text == "chebyshev") return LemmaId::Chebyshev;
  return std::nullopt;
}

LemmaCheck make_check(LemmaId id, double lhs, double rhs, std::string digest) {
  LemmaCheck c;
  c.lemma_id = id;
  c.lhs = lhs;
  c.rhs = rhs;
  c.margin = rhs - lhs;
  c.pass = c.margin >= -1e-9 * std::max(1.0, std::fabs(rhs));
  c.instance_digest = std::move(digest);
  return c;
}

double checker_discrepancy(std::span<const double> values) {
  std::vector<double> u;
  u.reserve(values.size());
  for (double v : values) u.push_back(clamp_unit(v - std::floor(v)));
  return unit_discrepancy(u);
}

std::size_t count_closed(std::span<const double> y, double a, double b) {
  return static_cast<std::size_t>(std::count_if(y.begin(), y.end(), [&](double v) { return v >= a && v <= b; }));
}

std::size_t count_half_open(std::span<const double> y, double a, double b) {
  return static_cast<std::size_t>(std::count_if(y.begin(), y.end(), [&](double v) { return v >= a && v < b; }));
}

CheckResult check_counting_bound(const RealSequence& ys, double a, double b) {
  const auto& y = ys.values();
  if (!(a <= b)) return Rejected{"a > b"};
  if (auto why = convex_conditions(y, true)) return Rejected{*why};
  const double curvature = min_abs(differences(differences(y)));
  const double lhs = static_cast<double>(count_closed(y, a, b));
  const double rhs = std::sqrt(2 * (b - a) / curvature) + 2;
  return make_check(LemmaId::L3, lhs, rhs, Digest().add(y).add(a).add(b).str("L3"));
}

CheckResult check_length_lower_bound(const RealSequence& ys) {
  const auto& y = ys.values();
  if (auto why = convex_conditions(y, false)) return Rejected{*why};
  const auto dy = differences(y);
  const double denom = std::max(max_abs(differences(dy)), min_abs(dy));
  if (!(denom > 0)) return Rejected{"degenerate denominator"};
  const double lhs = std::sqrt(2 * std::fabs(y.back() - y.front()) / denom);
  const double rhs = static_cast<double>(y.size());
  return make_check(LemmaId::L6, lhs, rhs, Digest().add(y).str("L6"));
}

CheckResult check_interval_comparison(const RealSequence& ys, HalfOpen J, HalfOpen I) {
  const auto& y = ys.values();
  if (y.size() < 2) return Rejected{"need at least 2 terms"};
  if (!strictly_increasing(y)) return Rejected{"y is not increasing"};
  const auto dir = monotone_direction(differences(y));
  if (!dir || *dir < 0) return Rejected{"dy is not increasing"};
  if (!(J.a < J.b && I.a < I.b)) return Rejected{"empty interval"};
  if (!(J.b <= I.a)) return Rejected{"J does not lie left of I"};
  if (!(J.a >= y.front() && J.b <= y.back())) return Rejected{"J is not inside [y_1, y_m)"};
  const double in_I = static_cast<double>(count_half_open(y, I.a, I.b));
  const double in_J = static_cast<double>(count_half_open(y, J.a, J.b));
  const double lhs = (in_I - 1) / (I.b - I.a);
  const double rhs = (in_J + 1) / (J.b - J.a);
  return make_check(LemmaId::L7, lhs, rhs, Digest().add(y).add(J.a).add(J.b).add(I.a).add(I.b).str("L7"));
}

namespace {

CheckResult l5_common(const RealSequence& ys, bool remark) {
  const auto& y = ys.values();
  if (y.size() < 2) return Rejected{"need m >= 2"};
  if (y.size() >= 3) {
    if (auto why = convex_conditions(y, true)) return Rejected{*why};
  } else if (!(y[1] != y[0])) {
    return Rejected{"y is constant"};
  }
  const double m = static_cast<double>(y.size());
  const double spread = remark ? max_abs(differences(y)) : std::fabs(y.back() - y.front()) / m;
  const double rhs = 2 * (spread + static_cast<double>(max_unit_count(y)) / m);
  const double lhs = checker_discrepancy(y);
  return make_check(remark ? LemmaId::L5_remark : LemmaId::L5, lhs, rhs,
                    Digest().add(y).str(remark ? "L5_remark" : "L5"));
}

}  // namespace

CheckResult check_discrepancy_bound_L5(const RealSequence& y) { return l5_common(y, false); }
CheckResult check_discrepancy_bound_L5_remark(const RealSequence& y) { return l5_common(y, true); }

CheckResult check_discrepancy_bound_L1(const RealSequence& ys, double K, double constant) {
  const auto& y = ys.values();
  if (y.size() < 3) return Rejected{"need m >= 3"};
  if (!(K >= 1)) return Rejected{"K must be >= 1"};
  if (!strictly_increasing(y)) return Rejected{"y is not increasing"};
  const auto K_data = curvature_constant(differences(differences(y)));
  if (!K_data || *K_data > K * (1 + 1e-12)) {
    return Rejected{"d2y is not weakly decreasing with the given K"};
  }
  const double spread = y.back() - y.front();
  const double core = spread / static_cast<double>(y.size()) + K / std::sqrt(spread);
  const double lhs = checker_discrepancy(y);
  LemmaCheck c = make_check(LemmaId::L1, lhs, constant * core, Digest().add(y).add(K).str("L1"));
  c.ratio = lhs / core;
  return c;
}

CheckResult check_perturbation(const RealSequence& x, const RealSequence& y, double eps) {
  if (x.size() != y.size()) return Rejected{"length mismatch"};
  if (!(eps > 0)) return Rejected{"eps must be positive"};
  double gap = 0;
  for (std::size_t i = 0; i < x.size(); ++i) gap = std::max(gap, std::fabs(x[i] - y[i]));
  if (!(gap < eps)) return Rejected{"max |x_k - y_k| is not below eps"};
  const double dx = checker_discrepancy(x.values());
  const double dy = checker_discrepancy(y.values());
  return make_check(LemmaId::L2, dy, dx + 2 * eps + 1e-12, Digest().add(x.values()).add(y.values()).add(eps).str("L2"));
}

CheckResult check_merge(const std::vector<RealSequence>& parts) {
  if (parts.empty()) return Rejected{"no parts"};
  std::vector<double> all;
  double worst = 0;
  Digest digest;
  for (const auto& part : parts) {
    all.insert(all.end(), part.values().begin(), part.values().end());
    worst = std::max(worst, checker_discrepancy(part.values()));
    digest.add(part.values()).add(std::numeric_limits<double>::quiet_NaN());
  }
  return make_check(LemmaId::L8, checker_discrepancy(all), worst + 1e-12, digest.str("L8"));
}

namespace {

std::optional<std::string> validate_cutpoints(const std::vector<Index>& cuts, Index origin, double eps) {
  if (cuts.size() < 2) return "need at least two cutpoints";
  if (cuts.front() < origin) return "first cutpoint precedes the data";
  for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
    if (cuts[j + 1] <= cuts[j]) return "cutpoints are not increasing";
    if (to_real(cuts[j + 1]) > to_real(cuts[j]) * (1 + Real(eps))) {
      return "n_{j+1} > (1 + eps) n_j at j=" + std::to_string(j);
    }
  }
  return std::nullopt;
}

LemmaCheck aggregation_check(double prefix_D, double eps, const std::vector<Index>& cuts, Index origin,
                             std::string digest) {
  const Real total = to_real(cuts.back() - origin);
  const Real head = to_real(cuts.front() - origin) / total;
  const Real tail = to_real(cuts[cuts.size() - 1] - cuts[cuts.size() - 2]) / total;
  const double rhs = 2 * eps + head.convert_to<double>() + tail.convert_to<double>() + 1e-9;
  return make_check(LemmaId::L4, prefix_D, rhs, std::move(digest));
}

}  // namespace

CheckResult check_block_aggregation(const RealSequence& x, double eps, const std::vector<Index>& cuts) {
  const Index origin = x.start_index() - 1;
  if (auto why = validate_cutpoints(cuts, origin, eps)) return Rejected{*why};
  if (cuts.back() > x.last_index()) return Rejected{"last cutpoint beyond the data"};
  const auto& v = x.values();
  auto slice = [&](Index from, Index to) {  // (from, to]
    return std::span<const double>(v).subspan(static_cast<std::size_t>(from - origin),
                                              static_cast<std::size_t>(to - from));
  };
  for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
    if (checker_discrepancy(slice(cuts[j], cuts[j + 1])) > eps) {
      return Rejected{"block " + std::to_string(j) + " has discrepancy above eps"};
    }
  }
  Digest digest;
  digest.add(v).add(eps);
  for (Index c : cuts) digest.add(static_cast<double>(c));
  return aggregation_check(checker_discrepancy(slice(origin, cuts.back())), eps, cuts, origin, digest.str("L4"));
}

CheckResult check_block_aggregation(const Sequence& seq, Index origin, double eps, const std::vector<Index>& cuts,
                                    const StreamOptions& stream) {
  if (auto why = validate_cutpoints(cuts, origin, eps)) return Rejected{*why};
  for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
    const auto count = static_cast<std::size_t>(cuts[j + 1] - cuts[j]);
    const double d = extreme_discrepancy_streamed(sequence_points(seq, cuts[j] + 1, 1, count), stream).value;
    if (d > eps) return Rejected{"block " + std::to_string(j) + " has discrepancy above eps"};
  }
  const auto count = static_cast<std::size_t>(cuts.back() - origin);
  const double prefix = extreme_discrepancy_streamed(sequence_points(seq, origin + 1, 1, count), stream).value;
  const std::string digest = "L4:" + seq.name() + ":origin=" + to_string(origin) + ":N=" + to_string(cuts.back());
  return aggregation_check(prefix, eps, cuts, origin, digest);
}

CheckResult check_chebyshev(const RealSequence& a, const RealSequence& b) {
  if (a.size() != b.size()) return Rejected{"length mismatch"};
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] > 0 && b[i] > 0)) return Rejected{"values must be positive"};
    if (i > 0 && (a[i] > a[i - 1] || b[i] > b[i - 1])) return Rejected{"values must be nonincreasing"};
  }
  long double sa = 0, sb = 0, sab = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sa += a[i];
    sb += b[i];
    sab += static_cast<long double>(a[i]) * b[i];
  }
  const double lhs = static_cast<double>(sa * sb);
  const double rhs_raw = static_cast<double>(static_cast<long double>(a.size()) * sab);
  return make_check(LemmaId::Chebyshev, lhs, rhs_raw + 1e-12 * std::max(1.0, std::fabs(rhs_raw)),
                    Digest().add(a.values()).add(b.values()).str("Chebyshev"));
}

// --- random instances ----------------------------------------------------------

namespace {

std::uint64_t splitmix(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Small deterministic generator; the bit-level recipe is fixed so that
// instances reproduce across standard libraries.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t index) : state_(seed) {
    state_ ^= splitmix(state_) + index * 0xd1b54a32d192ed03ULL;
  }
  std::uint64_t next() { return splitmix(state_); }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  std::size_t integer(std::size_t lo, std::size_t hi) {  // inclusive
    return lo + static_cast<std::size_t>(next() % (hi - lo + 1));
  }
  bool coin() { return (next() >> 63) != 0; }

 private:
  std::uint64_t state_;
};

// Cumulative sums of increasing positive steps, optionally reflected.
std::vector<double> convex_instance(Rng& rng, std::size_t m, bool allow_flat) {
  std::vector<double> y(m);
  double step = rng.log_uniform(1e-3, 2.0);
  const double curvature_scale = rng.log_uniform(1e-5, 0.5);
  const bool flat = allow_flat && rng.uniform() < 0.1;
  y[0] = rng.uniform(-5.0, 5.0);
  for (std::size_t k = 1; k < m; ++k) {
    y[k] = y[k - 1] + step;
    if (!flat) step += curvature_scale * rng.log_uniform(1e-2, 1.0);
  }
  const int mode = static_cast<int>(rng.integer(0, 3));
  // 0: as is; 1: negate (decreasing, concave); 2: reverse (decreasing, convex);
  // 3: reverse and negate (increasing, concave).
  if (mode == 1 || mode == 3) {
    for (double& v : y) v = -v;
  }
  if (mode == 2 || mode == 3) std::reverse(y.begin(), y.end());
  return y;
}

std::vector<double> increasing_convex(Rng& rng, std::size_t m) {
  std::vector<double> y(m);
  double step = rng.log_uniform(1e-3, 2.0);
  const double curvature_scale = rng.log_uniform(1e-5, 0.5);
  y[0] = rng.uniform(-5.0, 5.0);
  for (std::size_t k = 1; k < m; ++k) {
    y[k] = y[k - 1] + step;
    step += curvature_scale * rng.log_uniform(1e-2, 1.0);
  }
  return y;
}

std::vector<double> random_points(Rng& rng, std::size_t m) {
  std::vector<double> out(m);
  if (rng.coin()) {
    for (double& v : out) v = rng.uniform(-3.0, 3.0);
  } else {
    const double theta = rng.uniform(0.0, 1.0);
    const double shift = rng.uniform(0.0, 1.0);
    for (std::size_t k = 0; k < m; ++k) out[k] = shift + theta * static_cast<double>(k + 1);
  }
  return out;
}

std::vector<double> decreasing_positive(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.log_uniform(1e-3, 1e3);
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

CheckResult instance_L1(Rng& rng, double constant) {
  const std::size_t m = rng.integer(3, 64);
  const double K = rng.uniform(1.0, 4.0);
  const double envelope = rng.log_uniform(1e-4, 0.5);
  const double decay = rng.uniform(0.0, 2.0);
  std::vector<double> y(m);
  double step = rng.log_uniform(1e-3, 2.0);
  y[0] = rng.uniform(-5.0, 5.0);
  for (std::size_t k = 1; k < m; ++k) {
    y[k] = y[k - 1] + step;
    step += envelope * std::pow(static_cast<double>(k), -decay) * rng.uniform(1.0, K);
  }
  const auto K_data = curvature_constant(differences(differences(y)));
  if (!K_data) return Rejected{"rounding broke d2y"};
  return check_discrepancy_bound_L1(RealSequence(y), *K_data, constant);
}

}  // namespace

const std::vector<LemmaId>& suite_lemmas() {
  static const std::vector<LemmaId> ids{LemmaId::L3, LemmaId::L5, LemmaId::L5_remark, LemmaId::L6, LemmaId::L7,
                                        LemmaId::L1, LemmaId::L2, LemmaId::L8, LemmaId::Chebyshev};
  return ids;
}

CheckResult run_instance(LemmaId id, std::uint64_t seed, std::size_t i, double constant) {
  Rng rng(seed ^ (static_cast<std::uint64_t>(id) << 56), i);
  CheckResult out = Rejected{"no suite"};
  switch (id) {
    case LemmaId::L3: {
      const auto y = convex_instance(rng, rng.integer(3, 64), false);
      const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
      const double a = rng.uniform(*lo - 1, *hi);
      const double b = a + rng.log_uniform(1e-3, std::max(1e-2, *hi - *lo + 1));
      out = check_counting_bound(RealSequence(y), a, b);
      break;
    }
    case LemmaId::L5:
    case LemmaId::L5_remark: {
      const auto y = convex_instance(rng, rng.integer(2, 64), false);
      out = id == LemmaId::L5 ? check_discrepancy_bound_L5(RealSequence(y))
                              : check_discrepancy_bound_L5_remark(RealSequence(y));
      break;
    }
    case LemmaId::L6:
      out = check_length_lower_bound(RealSequence(convex_instance(rng, rng.integer(3, 64), true)));
      break;
    case LemmaId::L7: {
      const auto y = increasing_convex(rng, rng.integer(2, 64));
      const double lo = y.front(), hi = y.back();
      double p[4];
      p[0] = rng.uniform(lo, hi);
      p[1] = rng.uniform(p[0], hi);
      p[2] = rng.uniform(p[1], hi + (hi - lo));
      p[3] = rng.uniform(p[2], hi + 2 * (hi - lo));
      out = check_interval_comparison(RealSequence(y), {p[0], p[1]}, {p[2], p[3]});
      break;
    }
    case LemmaId::L1:
      out = instance_L1(rng, constant);
      break;
    case LemmaId::L2: {
      const std::size_t m = rng.integer(1, 64);
      const auto x = random_points(rng, m);
      const double eps = rng.log_uniform(1e-4, 0.5);
      std::vector<double> y(x);
      for (double& v : y) v += eps * 0.999 * rng.uniform(-1.0, 1.0);
      out = check_perturbation(RealSequence(x), RealSequence(y), eps);
      break;
    }
    case LemmaId::L8: {
      std::vector<RealSequence> parts;
      const std::size_t count = rng.integer(1, 5);
      for (std::size_t k = 0; k < count; ++k) parts.emplace_back(random_points(rng, rng.integer(1, 40)));
      out = check_merge(parts);
      break;
    }
    case LemmaId::Chebyshev: {
      const std::size_t n = rng.integer(1, 50);
      out = check_chebyshev(RealSequence(decreasing_positive(rng, n)), RealSequence(decreasing_positive(rng, n)));
      break;
    }
    case LemmaId::L4:
      return Rejected{"L4 has no randomized suite"};
  }
  if (auto* check = std::get_if<LemmaCheck>(&out)) {
    check->instance_digest = std::string(to_string(id)) + ":seed=" + std::to_string(seed) + ":i=" +
                             std::to_string(i) + ":" + check->instance_digest;
  }
  return out;
}

SuiteReport run_suite(LemmaId id, const SuiteOptions& options) {
  SuiteReport report;
  report.lemma_id = id;
  report.seed = options.seed;
  report.worst_margin = std::numeric_limits<double>::infinity();
  if (id == LemmaId::L1) report.max_ratio = 0.0;

  constexpr std::size_t kBatch = 2048;
  std::vector<CheckResult> batch(kBatch);
  std::size_t next = 0;
  while (report.accepted < options.accepted_target && report.trials < options.max_trials) {
    const std::size_t len = std::min(kBatch, options.max_trials - report.trials);
    parallel_for(len, options.threads, [&](std::size_t k) {
      batch[k] = run_instance(id, options.seed, next + k, options.constant);
    });
    // Merge in index order and stop exactly at the target, so the report
    // does not depend on the batch size or thread count.
    for (std::size_t k = 0; k < len && report.accepted < options.accepted_target; ++k) {
      ++report.trials;
      if (const auto* check = std::get_if<LemmaCheck>(&batch[k])) {
        ++report.accepted;
        report.worst_margin = std::min(report.worst_margin, check->margin);
        if (check->ratio) report.max_ratio = std::max(*report.max_ratio, *check->ratio);
        if (!check->pass) {
          if (report.failed == 0) report.first_failure = check->instance_digest;
          ++report.failed;
        }
      } else {
        ++report.rejected;
      }
    }
    next += len;
  }
  if (report.accepted == 0) report.worst_margin = 0;
  return report;
}

}  // namespace equidist
