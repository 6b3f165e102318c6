#include "equidist/seqlab.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <fstream>
#include <limits>
#include <sstream>

namespace equidist {

namespace {

using u128 = unsigned __int128;

// Magnitude below which long double evaluation keeps the fractional part
// accurate to ~1e-13.
constexpr long double kFastMagnitude = 1048576.0L;  // 2^20

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

long double to_ld(Index n) { return static_cast<long double>(n); }

double fast_frac(long double x) { return clamp_unit(static_cast<double>(x - std::floor(x))); }

class PowerSequence final : public Sequence {
 public:
  explicit PowerSequence(RealExpr a) : a_(std::move(a)) {
    if (!(a_.value() > 0)) throw std::invalid_argument("power family requires a > 0");
    a_ld_ = a_.value().convert_to<long double>();
    const Real twice = a_.value() * 2;
    if (twice == floor(twice) && twice < 64) {
      half_integer_ = true;
      whole_ = floor(a_.value()).convert_to<int>();
      has_half_ = twice.convert_to<int>() % 2 == 1;
    }
  }

  Real at(Index n) const override {
    const Real v = to_real(n);
    if (half_integer_) {
      Real out = pow(v, whole_);
      if (has_half_) out *= sqrt(v);
      return out;
    }
    return pow(v, a_.value());
  }

  std::string name() const override { return "pow:a=" + a_.text(); }

  long double second_difference_estimate(Index n) const override {
    const long double x = to_ld(n);
    const long double l1 = std::log1p(1.0L / x);
    const long double l2 = std::log1p(2.0L / x);
    return std::pow(x, a_ld_) * (std::expm1(a_ld_ * l2) - 2.0L * std::expm1(a_ld_ * l1));
  }

  double frac_at(Index n) const override {
    const long double x = to_ld(n);
    if (a_ld_ * std::log2(x) < 20.0L) return fast_frac(std::pow(x, a_ld_));
    return frac_to_double(at(n));
  }

 private:
  RealExpr a_;
  long double a_ld_ = 1;
  bool half_integer_ = false;
  int whole_ = 0;
  bool has_half_ = false;
};

class NLogSequence final : public Sequence {
 public:
  Real at(Index n) const override {
    const Real v = to_real(n);
    return v * log(v);
  }
  std::string name() const override { return "nlog"; }

  long double second_difference_estimate(Index n) const override {
    const long double x = to_ld(n);
    return (x + 2) * std::log1p(2.0L / x) - 2 * (x + 1) * std::log1p(1.0L / x);
  }

  double frac_at(Index n) const override {
    const long double x = to_ld(n);
    if (x < 60000.0L) return fast_frac(x * std::log(x));
    return frac_to_double(at(n));
  }
};

class LogSequence final : public Sequence {
 public:
  Real at(Index n) const override { return log(to_real(n)); }
  std::string name() const override { return "log"; }

  long double second_difference_estimate(Index n) const override {
    const long double x1 = to_ld(n) + 1;
    return std::log1p(-1.0L / (x1 * x1));
  }

  double frac_at(Index n) const override {
    if (n < (Index(1) << 62)) return fast_frac(std::log(to_ld(n)));
    return frac_to_double(at(n));
  }
};

class LinearSequence final : public Sequence {
 public:
  explicit LinearSequence(RealExpr theta) : theta_(std::move(theta)) {
    theta_ld_ = theta_.value().convert_to<long double>();
  }
  Real at(Index n) const override { return theta_.value() * to_real(n); }
  std::string name() const override { return "linear:theta=" + theta_.text(); }
  long double second_difference_estimate(Index) const override { return 0.0L; }
  Real second_difference(Index) const override { return Real(0); }

  double frac_at(Index n) const override {
    const long double x = theta_ld_ * to_ld(n);
    if (std::fabs(x) < kFastMagnitude) return fast_frac(x);
    return frac_to_double(at(n));
  }

 private:
  RealExpr theta_;
  long double theta_ld_ = 0;
};

// x_n = theta*n + c*n(n-1)/2 with theta and c rounded to the 2^-128 grid, so
// fractional parts can be stepped exactly in wrapping 128-bit arithmetic.
class QuadraticSequence final : public Sequence {
 public:
  QuadraticSequence(RealExpr theta, RealExpr c) : theta_text_(theta.text()), c_text_(c.text()) {
    const Real scale = pow2(128);
    theta_int_ = floor_index(theta.value());
    theta_frac_ = to_u128(floor((theta.value() - to_real(theta_int_)) * scale));
    if (c.value() < 0 || c.value() >= 1) {
      throw std::invalid_argument("quadratic family requires 0 <= c < 1");
    }
    c_frac_ = to_u128(floor(c.value() * scale));
    theta_exact_ = to_real(theta_int_) + from_u128(theta_frac_) / scale;
    c_exact_ = from_u128(c_frac_) / scale;
  }

  Real at(Index n) const override {
    const Real v = to_real(n);
    return theta_exact_ * v + c_exact_ * (v * (v - 1) / 2);
  }
  std::string name() const override {
    return "quad:theta=" + theta_text_ + ",c=" + c_text_;
  }
  long double second_difference_estimate(Index) const override {
    return c_exact_.convert_to<long double>();
  }
  Real second_difference(Index) const override { return c_exact_; }
  Real first_difference(Index n) const override { return theta_exact_ + c_exact_ * to_real(n); }

  double frac_at(Index n) const override { return to_unit(phase(n)); }

  void fractional_parts(Index first, Index stride, std::span<double> out) const override {
    if (out.empty()) return;
    require_range(first, first + stride * static_cast<Index>(out.size() - 1));
    const u128 s = static_cast<u128>(stride);
    u128 value = phase(first);
    // step = phase(i + s) - phase(i) = theta*s + c*(s*i + s(s-1)/2)
    u128 step = theta_frac_ * s + c_frac_ * (s * static_cast<u128>(first) + triangular(stride));
    const u128 accel = c_frac_ * s * s;
    for (double& slot : out) {
      slot = to_unit(value);
      value += step;
      step += accel;
    }
  }

 private:
  static u128 to_u128(const Real& v) {
    const Real two64 = pow2(64);
    const Real hi = floor(v / two64);
    const Real lo = v - hi * two64;
    return (static_cast<u128>(hi.convert_to<unsigned long long>()) << 64) |
           lo.convert_to<unsigned long long>();
  }
  static Real from_u128(u128 v) {
    return Real(static_cast<unsigned long long>(v >> 64)) * pow2(64) +
           Real(static_cast<unsigned long long>(v));
  }
  static u128 triangular(Index n) {
    const u128 un = static_cast<u128>(n);
    return (n % 2 == 0) ? (un / 2) * (un - 1) : un * ((un - 1) / 2);
  }
  static double to_unit(u128 phase) {
    // Round the top 54 bits to 53 and keep the result below 1.
    const unsigned long long top = static_cast<unsigned long long>(phase >> 74);
    unsigned long long rounded = (top + 1) >> 1;
    if (rounded >= (1ULL << 53)) rounded = (1ULL << 53) - 1;
    return std::ldexp(static_cast<double>(rounded), -53);
  }
  u128 phase(Index n) const {
    if (n < 0) throw std::out_of_range("negative index");
    return theta_frac_ * static_cast<u128>(n) + c_frac_ * triangular(n);
  }

  std::string theta_text_;
  std::string c_text_;
  Index theta_int_ = 0;
  u128 theta_frac_ = 0;
  u128 c_frac_ = 0;
  Real theta_exact_ = 0;
  Real c_exact_ = 0;
};

class DataSequence final : public Sequence {
 public:
  DataSequence(std::vector<std::string> literals, Index start, std::string label)
      : start_(start), label_(std::move(label)) {
    if (literals.empty()) throw std::invalid_argument("sequence data is empty");
    if (start < 1) throw std::invalid_argument("start index must be >= 1");
    values_.reserve(literals.size());
    for (const auto& text : literals) {
      Real v;
      try {
        v = Real(text);
      } catch (const std::exception&) {
        throw std::invalid_argument("unparsable sequence value '" + text + "'");
      }
      if (!isfinite(v)) throw std::invalid_argument("non-finite sequence value '" + text + "'");
      values_.push_back(v);
    }
  }

  Real at(Index n) const override {
    if (!contains(n)) throw std::out_of_range("index " + to_string(n) + " outside the data");
    return values_[static_cast<std::size_t>(n - start_)];
  }
  Index first_index() const override { return start_; }
  std::optional<Index> last_index() const override {
    return start_ + static_cast<Index>(values_.size()) - 1;
  }
  std::string name() const override { return label_; }
  long double second_difference_estimate(Index n) const override {
    return second_difference(n).convert_to<long double>();
  }

 private:
  Index start_;
  std::string label_;
  std::vector<Real> values_;
};

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

RealSequence::RealSequence(Index start_index, std::vector<double> values)
    : start_index_(start_index), values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("RealSequence must be nonempty");
  if (start_index_ < 1) throw std::invalid_argument("start_index must be >= 1");
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("RealSequence values must be finite");
  }
}

double RealSequence::at(Index n) const {
  if (n < start_index_ || n > last_index()) {
    throw std::out_of_range("index " + to_string(n) + " outside the sequence");
  }
  return values_[static_cast<std::size_t>(n - start_index_)];
}

UnitSequence::UnitSequence(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_) {
    if (!(v >= 0.0 && v < 1.0)) throw std::invalid_argument("unit sequence values must lie in [0, 1)");
  }
}

// --- SequenceSpec -----------------------------------------------------------

SequenceSpec SequenceSpec::parse(std::string_view raw) {
  const std::string text = trim(raw);
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string rest = colon == std::string::npos ? std::string() : text.substr(colon + 1);

  auto params = [&]() {
    std::vector<std::pair<std::string, std::string>> out;
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("expected key=value in '" + text + "'");
      out.emplace_back(trim(item.substr(0, eq)), trim(item.substr(eq + 1)));
    }
    return out;
  };

  SequenceSpec spec;
  if (head == "pow" || head == "power") {
    spec.family = Family::power;
    bool have_a = false;
    for (const auto& [k, v] : params()) {
      if (k != "a") throw std::invalid_argument("unknown parameter '" + k + "' for pow");
      spec.exponent = RealExpr::parse(v);
      have_a = true;
    }
    if (!have_a) throw std::invalid_argument("pow requires a=<exponent>");
    if (!(spec.exponent.value() > 0)) throw std::invalid_argument("power family requires a > 0");
  } else if (head == "nlog" || head == "log") {
    if (!rest.empty()) throw std::invalid_argument("'" + head + "' takes no parameters");
    spec.family = head == "log" ? Family::log : Family::nlog;
  } else if (head == "linear" || head == "quad") {
    spec.family = head == "linear" ? Family::linear : Family::quadratic;
    bool have_theta = false;
    bool have_c = false;
    for (const auto& [k, v] : params()) {
      if (k == "theta") {
        spec.theta = RealExpr::parse(v);
        have_theta = true;
      } else if (k == "c" && spec.family == Family::quadratic) {
        spec.curvature = RealExpr::parse(v);
        have_c = true;
      } else {
        throw std::invalid_argument("unknown parameter '" + k + "' for " + head);
      }
    }
    if (!have_theta) throw std::invalid_argument(head + " requires theta=<real>");
    if (spec.family == Family::quadratic && !have_c) throw std::invalid_argument("quad requires c=<real>");
  } else if (head == "file") {
    if (rest.empty()) throw std::invalid_argument("file requires a path");
    spec.family = Family::file;
    spec.path = rest;
  } else if (head == "explicit") {
    spec.family = Family::explicit_values;
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) spec.literals.push_back(trim(item));
    if (spec.literals.empty()) throw std::invalid_argument("explicit requires values");
  } else {
    throw std::invalid_argument("unknown sequence family '" + head + "'");
  }
  return spec;
}

SequenceSpec SequenceSpec::power(double a) {
  return parse("pow:a=" + format_double(a));
}

SequenceSpec SequenceSpec::linear(std::string_view theta) {
  return parse("linear:theta=" + std::string(theta));
}

SequenceSpec SequenceSpec::quadratic(std::string_view theta, std::string_view c) {
  return parse("quad:theta=" + std::string(theta) + ",c=" + std::string(c));
}

SequenceSpec SequenceSpec::log() { return parse("log"); }
SequenceSpec SequenceSpec::nlog() { return parse("nlog"); }

SequenceSpec SequenceSpec::explicit_values(const std::vector<double>& values, Index start_index) {
  SequenceSpec spec;
  spec.family = Family::explicit_values;
  spec.start_index = start_index;
  for (double v : values) spec.literals.push_back(format_double(v));
  return spec;
}

SequenceSpec SequenceSpec::file(std::string path) {
  SequenceSpec spec;
  spec.family = Family::file;
  spec.path = std::move(path);
  return spec;
}

std::string SequenceSpec::to_string() const {
  switch (family) {
    case Family::power: return "pow:a=" + exponent.text();
    case Family::nlog: return "nlog";
    case Family::log: return "log";
    case Family::linear: return "linear:theta=" + theta.text();
    case Family::quadratic: return "quad:theta=" + theta.text() + ",c=" + curvature.text();
    case Family::file: return "file:" + path;
    case Family::explicit_values: {
      std::string out = "explicit:";
      for (std::size_t i = 0; i < literals.size(); ++i) {
        if (i) out += ',';
        out += literals[i];
      }
      return out;
    }
  }
  return "?";
}

// --- Sequence ----------------------------------------------------------------

Real Sequence::first_difference(Index n) const { return at(n + 1) - at(n); }

Real Sequence::second_difference(Index n) const {
  return at(n + 2) - 2 * at(n + 1) + at(n);
}

long double Sequence::second_difference_estimate(Index n) const {
  return second_difference(n).convert_to<long double>();
}

double Sequence::frac_at(Index n) const { return frac_to_double(at(n)); }

void Sequence::fractional_parts(Index first, Index stride, std::span<double> out) const {
  Index n = first;
  for (double& slot : out) {
    slot = frac_at(n);
    n += stride;
  }
}

bool Sequence::contains(Index n) const {
  if (n < first_index()) return false;
  const auto last = last_index();
  return !last || n <= *last;
}

void Sequence::require_range(Index from, Index to) const {
  if (from > to) throw std::invalid_argument("index range is empty");
  if (!contains(from) || !contains(to)) {
    throw std::out_of_range("index range [" + to_string(from) + ", " + to_string(to) +
                            "] outside the sequence " + name());
  }
}

std::vector<std::string> read_sequence_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open sequence file '" + path + "'");
  std::vector<std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::string value = trim(line);
    if (value.empty()) continue;
    char* end = nullptr;
    std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0') {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": unparsable value '" + value + "'");
    }
    out.push_back(std::move(value));
  }
  if (out.empty()) throw std::runtime_error("sequence file '" + path + "' has no values");
  return out;
}

std::shared_ptr<const Sequence> make_sequence(const SequenceSpec& spec) {
  switch (spec.family) {
    case Family::power: return std::make_shared<PowerSequence>(spec.exponent);
    case Family::nlog: return std::make_shared<NLogSequence>();
    case Family::log: return std::make_shared<LogSequence>();
    case Family::linear: return std::make_shared<LinearSequence>(spec.theta);
    case Family::quadratic: return std::make_shared<QuadraticSequence>(spec.theta, spec.curvature);
    case Family::file:
      return std::make_shared<DataSequence>(read_sequence_file(spec.path), spec.start_index,
                                            spec.to_string());
    case Family::explicit_values:
      return std::make_shared<DataSequence>(spec.literals, spec.start_index, spec.to_string());
  }
  throw std::invalid_argument("unknown family");
}

RealSequence generate(const Sequence& seq, Index from, Index to) {
  if (from < 1 || from > to) throw std::invalid_argument("invalid index range");
  seq.require_range(from, to);
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(to - from + 1));
  for (Index n = from; n <= to; ++n) values.push_back(seq.at(n).convert_to<double>());
  return RealSequence(from, std::move(values));
}

RealSequence generate(const SequenceSpec& spec, Index from, Index to) {
  return generate(*make_sequence(spec), from, to);
}

UnitSequence generate_fractional(const Sequence& seq, Index from, Index to) {
  if (from < 1 || from > to) throw std::invalid_argument("invalid index range");
  seq.require_range(from, to);
  std::vector<double> out(static_cast<std::size_t>(to - from + 1));
  seq.fractional_parts(from, 1, out);
  return UnitSequence(std::move(out));
}

RealSequence forward_differences(const RealSequence& x, int order) {
  if (order != 1 && order != 2) throw std::invalid_argument("difference order must be 1 or 2");
  if (x.size() < static_cast<std::size_t>(order) + 1) {
    throw std::invalid_argument("sequence too short for difference of order " + std::to_string(order));
  }
  std::vector<double> d(x.size() - 1);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) d[i] = x[i + 1] - x[i];
  RealSequence first(x.start_index(), std::move(d));
  return order == 1 ? first : forward_differences(first, 1);
}

UnitSequence fractional_parts(const RealSequence& x) {
  std::vector<double> out;
  out.reserve(x.size());
  for (double v : x.values()) out.push_back(clamp_unit(v - std::floor(v)));
  return UnitSequence(std::move(out));
}

// --- monotonicity ------------------------------------------------------------

namespace {

// Minimal K with max_{j>k} x_j <= K min_{j<=k} x_j for all k, or nullopt.
std::optional<double> weakly_decreasing_constant(std::span<const double> x, bool negate) {
  const std::size_t n = x.size();
  auto value = [&](std::size_t i) { return negate ? -x[i] : x[i]; };
  for (std::size_t i = 0; i < n; ++i) {
    if (value(i) < 0) return std::nullopt;
  }
  std::vector<double> suffix_max(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) suffix_max[i] = std::max(suffix_max[i + 1], value(i));
  double K = 1.0;
  double prefix_min = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < n; ++k) {
    prefix_min = std::min(prefix_min, value(k));
    const double later = suffix_max[k + 1];
    if (later == 0.0) continue;
    if (prefix_min == 0.0) return std::nullopt;
    K = std::max(K, later / prefix_min);
  }
  if (!std::isfinite(K)) return std::nullopt;
  return K;
}

}  // namespace

MonotonicityProfile monotonicity_profile(std::span<const double> x) {
  if (x.size() < 2) throw std::invalid_argument("monotonicity profile needs at least 2 values");
  if (auto K = weakly_decreasing_constant(x, false)) {
    return {MonotonicityKind::weakly_decreasing, K};
  }
  if (auto K = weakly_decreasing_constant(x, true)) {
    return {MonotonicityKind::weakly_increasing, K};
  }
  return {MonotonicityKind::neither, std::nullopt};
}

const char* to_string(MonotonicityKind kind) {
  switch (kind) {
    case MonotonicityKind::weakly_decreasing: return "weakly_decreasing";
    case MonotonicityKind::weakly_increasing: return "weakly_increasing";
    case MonotonicityKind::neither: return "neither";
  }
  return "?";
}

// --- hypothesis scan ---------------------------------------------------------

void require_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.1)) {
    throw std::invalid_argument("epsilon must lie in (0, 1/10)");
  }
}

std::optional<std::string> hypothesis_failure(const Real& d2, Index n, double epsilon) {
  const Real eps(epsilon);
  const Real nr = to_real(n);
  const Real lower = 1 / (pow(eps, 8) * nr * nr);
  const Real upper = pow(eps, 12);
  if (d2 < lower) {
    return "second difference " + d2.str(6) + " below 1/(eps^8 n^2) = " + lower.str(6) +
           " at n=" + to_string(n);
  }
  if (d2 >= upper) {
    return "second difference " + d2.str(6) + " not below eps^12 = " + upper.str(6) +
           " at n=" + to_string(n);
  }
  return std::nullopt;
}

HypothesisReport hypothesis_scan(const Sequence& seq, double epsilon, Index horizon) {
  require_epsilon(epsilon);
  const long double inv5 = std::pow(static_cast<long double>(epsilon), -5.0L);
  if (!(to_ld(horizon) > inv5)) {
    throw std::invalid_argument("horizon must exceed eps^-5");
  }
  const Index lower = static_cast<Index>(std::floor(inv5)) + 1;
  if (!seq.contains(horizon + 2) || !seq.contains(lower)) {
    throw std::out_of_range("scan range outside the sequence " + seq.name());
  }

  HypothesisReport report;
  report.epsilon = epsilon;
  report.horizon = horizon;
  report.negated = seq.second_difference(horizon) < 0;
  const long double sign = report.negated ? -1.0L : 1.0L;

  std::deque<HypothesisViolation> tail;
  std::optional<Index> last_violation;
  auto record = [&](Index n, std::string reason) {
    ++report.violation_count;
    last_violation = n;
    tail.push_back({n, std::move(reason)});
    if (tail.size() > 16) tail.pop_front();
  };

  const long double eps = epsilon;
  const long double eps8 = std::pow(eps, 8.0L);
  const long double eps12 = std::pow(eps, 12.0L);
  const Index dense_end = std::min(horizon, kDenseScanLimit);
  for (Index n = lower; n <= dense_end; ++n) {
    ++report.samples;
    const long double d2 = sign * seq.second_difference_estimate(n);
    const long double nn = to_ld(n);
    if (d2 < 1.0L / (eps8 * nn * nn)) {
      record(n, "second difference below 1/(eps^8 n^2)");
    } else if (d2 >= eps12) {
      record(n, "second difference not below eps^12");
    }
  }
  auto sparse_failure = [&](Index k) {
    ++report.samples;
    Real d2 = seq.second_difference(k);
    if (report.negated) d2 = -d2;
    return hypothesis_failure(d2, k, epsilon);
  };
  // Sampled past the dense range; the boundary after the last failing sample
  // is then located by bisection.
  Index passed_after = 0;  // 0: no passing sample since the last failure
  Index n = std::max(lower, dense_end + 1);
  while (n <= horizon) {
    if (auto why = sparse_failure(n)) {
      record(n, std::move(*why));
      passed_after = 0;
    } else if (last_violation && passed_after == 0) {
      passed_after = n;
    }
    if (n == horizon) break;
    const Index step = std::max<Index>(1, n / 1024);
    n = std::min(horizon, n + step);
  }
  if (last_violation && passed_after != 0 && *last_violation > dense_end) {
    Index bad = *last_violation, good = passed_after;
    while (good - bad > 1) {
      const Index mid = bad + (good - bad) / 2;
      if (auto why = sparse_failure(mid)) {
        record(mid, std::move(*why));
        bad = mid;
      } else {
        good = mid;
      }
    }
  }

  report.violations.assign(tail.begin(), tail.end());
  if (!last_violation) {
    report.n_epsilon = lower;
  } else if (*last_violation < horizon) {
    report.n_epsilon = std::max(lower, *last_violation);
  }
  return report;
}

HypothesisReport hypothesis_scan(const SequenceSpec& spec, double epsilon, Index horizon) {
  return hypothesis_scan(*make_sequence(spec), epsilon, horizon);
}

}  // namespace equidist
