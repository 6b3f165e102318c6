#include "equidist/weyl.hpp"

#include "equidist/compensated.hpp"
#include "equidist/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace equidist {

namespace {

constexpr long double kTwoPi = 2.0L * std::numbers::pi_v<long double>;

// Accumulates exp(2 pi i h u) for h = 1..h_max from fractional parts u.
class PhaseAccumulator {
 public:
  explicit PhaseAccumulator(std::int64_t h) : h_(h) {}

  void add(double u) {
    long double phase = static_cast<long double>(h_) * static_cast<long double>(u);
    phase -= std::floor(phase);
    re_ += std::cos(kTwoPi * phase);
    im_ += std::sin(kTwoPi * phase);
  }

  WeylPoint point(std::int64_t N) const {
    WeylPoint p;
    p.h = h_;
    p.N = N;
    const long double inv = 1.0L / static_cast<long double>(N);
    p.sum = {static_cast<double>(re_.value() * inv), static_cast<double>(im_.value() * inv)};
    p.magnitude = std::min(1.0, std::abs(p.sum));
    return p;
  }

 private:
  std::int64_t h_;
  CompensatedSum<long double> re_;
  CompensatedSum<long double> im_;
};

void require_h(std::int64_t h) {
  if (h == 0) throw std::invalid_argument("Weyl sums need h != 0");
}

}  // namespace

WeylPoint weyl_sum_fractional(const UnitSequence& u, std::int64_t h) {
  require_h(h);
  if (u.empty()) throw std::invalid_argument("Weyl sum of an empty sequence");
  PhaseAccumulator acc(h);
  for (double v : u.values()) acc.add(v);
  return acc.point(static_cast<std::int64_t>(u.size()));
}

WeylPoint weyl_sum(const RealSequence& x, std::int64_t h) {
  require_h(h);
  return weyl_sum_fractional(fractional_parts(x), h);
}

std::vector<WeylPoint> weyl_profile(const SequenceSpec& spec, std::int64_t h_max,
                                    const std::vector<std::int64_t>& n_grid, unsigned threads) {
  if (h_max < 1) throw std::invalid_argument("h_max must be >= 1");
  if (n_grid.empty()) throw std::invalid_argument("N grid is empty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 1 || (i > 0 && n_grid[i] <= n_grid[i - 1])) {
      throw std::invalid_argument("N grid must be positive and strictly increasing");
    }
  }
  const auto seq = make_sequence(spec);
  const UnitSequence u = generate_fractional(*seq, 1, n_grid.back());

  // positive[h-1][g] holds S_{n_grid[g]}(h)
  std::vector<std::vector<WeylPoint>> positive(static_cast<std::size_t>(h_max));
  parallel_for(positive.size(), threads, [&](std::size_t idx) {
    PhaseAccumulator acc(static_cast<std::int64_t>(idx) + 1);
    std::size_t g = 0;
    auto& rows = positive[idx];
    for (std::size_t k = 0; k < u.size(); ++k) {
      acc.add(u[k]);
      if (static_cast<std::int64_t>(k + 1) == n_grid[g]) {
        rows.push_back(acc.point(n_grid[g]));
        ++g;
      }
    }
  });

  std::vector<WeylPoint> out;
  out.reserve(2 * positive.size() * n_grid.size());
  for (std::int64_t h = h_max; h >= 1; --h) {
    for (const auto& p : positive[static_cast<std::size_t>(h - 1)]) {
      WeylPoint c = p;
      c.h = -h;
      c.sum = std::conj(p.sum);
      out.push_back(c);
    }
  }
  for (const auto& rows : positive) out.insert(out.end(), rows.begin(), rows.end());
  return out;
}

void write_weyl_csv(std::ostream& out, const std::vector<WeylPoint>& rows) {
  out << "h,N,re,im,magnitude\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%lld,%lld,%.17g,%.17g,%.17g\n", static_cast<long long>(r.h),
                  static_cast<long long>(r.N), r.sum.real(), r.sum.imag(), r.magnitude);
    out << buf;
  }
}

}  // namespace equidist
