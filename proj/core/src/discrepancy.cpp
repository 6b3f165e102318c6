#include "equidist/discrepancy.hpp"

#include <boost/sort/spreadsort/float_sort.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace equidist {

Interval::Interval(double a_, double b_) : a(a_), b(b_) {
  if (!(a >= 0.0 && a < b && b <= 1.0)) {
    throw std::invalid_argument("interval must satisfy 0 <= a < b <= 1");
  }
}

const char* to_string(DiscrepancyMethod method) {
  switch (method) {
    case DiscrepancyMethod::fast: return "fast";
    case DiscrepancyMethod::oracle: return "oracle";
    case DiscrepancyMethod::streamed: return "streamed";
  }
  return "?";
}

std::size_t count_in_interval(const UnitSequence& u, const Interval& interval) {
  return static_cast<std::size_t>(std::count_if(u.values().begin(), u.values().end(), [&](double v) {
    return v >= interval.a && v < interval.b;
  }));
}

double witness_deviation(std::span<const double> u, const Witness& w) {
  std::size_t count = 0;
  for (double v : u) {
    const bool left = w.include_a ? v >= w.a : v > w.a;
    const bool right = w.include_b ? v <= w.b : v < w.b;
    if (left && right) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(u.size()) - (w.b - w.a);
}

namespace {

void sort_points(std::vector<double>& v) { boost::sort::spreadsort::float_sort(v.begin(), v.end()); }

// Running extremes of g_i = i/m - u_(i) over points visited in sorted order.
// The maximum keeps the last occurrence and the minimum the first, so that
// duplicated values land on the outer copies and the witness counts exactly.
struct Extremes {
  double max_g = -std::numeric_limits<double>::infinity();
  double min_g = std::numeric_limits<double>::infinity();
  double max_u = 0;
  double min_u = 0;
  std::size_t max_rank = 0;
  std::size_t min_rank = 0;

  void visit(std::size_t rank, double u, double m) {
    const double g = static_cast<double>(rank) / m - u;
    if (g >= max_g) { max_g = g; max_u = u; max_rank = rank; }
    if (g < min_g) { min_g = g; min_u = u; min_rank = rank; }
  }

  DiscrepancyReport report(double m, DiscrepancyMethod method) const {
    DiscrepancyReport r;
    r.method = method;
    r.value = std::min(1.0, 1.0 / m + max_g - min_g);
    Witness w;
    if (min_rank <= max_rank) {
      w = {min_u, max_u, true, true};
    } else {
      w = {max_u, min_u, false, false};
    }
    r.witness = w;
    return r;
  }
};

}  // namespace

DiscrepancyReport extreme_discrepancy(std::span<const double> u) {
  if (u.empty()) throw std::invalid_argument("discrepancy of an empty set");
  std::vector<double> sorted(u.begin(), u.end());
  sort_points(sorted);
  const double m = static_cast<double>(sorted.size());
  Extremes ex;
  for (std::size_t i = 0; i < sorted.size(); ++i) ex.visit(i + 1, sorted[i], m);
  return ex.report(m, DiscrepancyMethod::fast);
}

DiscrepancyReport extreme_discrepancy(const UnitSequence& u) { return extreme_discrepancy(u.span()); }

DiscrepancyReport extreme_discrepancy_oracle(std::span<const double> u, std::size_t guard) {
  if (u.empty()) throw std::invalid_argument("discrepancy of an empty set");
  if (u.size() > guard) {
    throw std::length_error("oracle discrepancy refused: " + std::to_string(u.size()) +
                            " points exceeds the guard of " + std::to_string(guard));
  }
  std::vector<double> sorted(u.begin(), u.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> value;
  std::vector<std::size_t> below{0};  // below[i] = #points < value[i]
  for (double v : sorted) {
    if (value.empty() || v != value.back()) {
      value.push_back(v);
      below.push_back(below.back());
    }
    ++below.back();
  }
  const std::size_t d = value.size();
  const double m = static_cast<double>(u.size());

  DiscrepancyReport best;
  best.method = DiscrepancyMethod::oracle;
  best.value = -1;
  auto consider = [&](double deviation, const Witness& w) {
    if (std::fabs(deviation) > best.value) {
      best.value = std::fabs(deviation);
      best.witness = w;
    }
  };

  consider(0.0, Witness{0.0, 1.0, true, false});
  for (std::size_t i = 0; i < d; ++i) {
    // [0, v_i) and (v_i, 1)
    if (value[i] > 0) {
      consider(static_cast<double>(below[i]) / m - value[i], Witness{0.0, value[i], true, false});
    }
    consider(static_cast<double>(u.size() - below[i + 1]) / m - (1.0 - value[i]),
             Witness{value[i], 1.0, false, false});
    for (std::size_t j = i; j < d; ++j) {
      const double length = value[j] - value[i];
      // closed [v_i, v_j]: the limit of [v_i, v_j + 0+)
      consider(static_cast<double>(below[j + 1] - below[i]) / m - length,
               Witness{value[i], value[j], true, true});
      if (j > i) {
        // open (v_i, v_j): the limit of [v_i + 0+, v_j)
        consider(static_cast<double>(below[j] - below[i + 1]) / m - length,
                 Witness{value[i], value[j], false, false});
      }
    }
  }
  return best;
}

DiscrepancyReport extreme_discrepancy_oracle(const UnitSequence& u, std::size_t guard) {
  return extreme_discrepancy_oracle(u.span(), guard);
}

double star_discrepancy(std::span<const double> u) {
  if (u.empty()) throw std::invalid_argument("discrepancy of an empty set");
  std::vector<double> sorted(u.begin(), u.end());
  sort_points(sorted);
  const double m = static_cast<double>(sorted.size());
  double best = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double rank = static_cast<double>(i + 1);
    best = std::max({best, rank / m - sorted[i], sorted[i] - (rank - 1) / m});
  }
  return best;
}

double star_discrepancy(const UnitSequence& u) { return star_discrepancy(u.span()); }

DiscrepancyReport extreme_discrepancy_streamed(const PointSource& source, const StreamOptions& options) {
  if (options.memory_points == 0) throw std::invalid_argument("memory_points must be positive");
  if (options.bucket_bits == 0 || options.bucket_bits > 26) {
    throw std::invalid_argument("bucket_bits must lie in [1, 26]");
  }

  // First pass: keep everything if it fits, else fall back to a histogram.
  std::vector<double> held;
  std::vector<std::uint64_t> histogram;
  const std::size_t buckets = std::size_t{1} << options.bucket_bits;
  const double bucket_scale = static_cast<double>(buckets);
  auto bucket_of = [&](double v) {
    return std::min(buckets - 1, static_cast<std::size_t>(v * bucket_scale));
  };
  std::uint64_t total = 0;
  source([&](std::span<const double> block) {
    for (double v : block) {
      if (!(v >= 0.0 && v < 1.0)) throw std::invalid_argument("streamed point outside [0, 1)");
    }
    total += block.size();
    if (histogram.empty()) {
      if (held.size() + block.size() <= options.memory_points) {
        held.insert(held.end(), block.begin(), block.end());
        return;
      }
      histogram.assign(buckets, 0);
      for (double v : held) ++histogram[bucket_of(v)];
      held.clear();
      held.shrink_to_fit();
    }
    for (double v : block) ++histogram[bucket_of(v)];
  });
  if (total == 0) throw std::invalid_argument("discrepancy of an empty set");
  if (histogram.empty()) {
    auto report = extreme_discrepancy(held);
    report.method = DiscrepancyMethod::streamed;
    return report;
  }

  const double m = static_cast<double>(total);
  Extremes ex;
  std::uint64_t rank_before = 0;
  std::size_t lo = 0;
  while (lo < buckets) {
    std::size_t hi = lo;
    std::uint64_t group = 0;
    while (hi < buckets && (hi == lo || group + histogram[hi] <= options.memory_points)) {
      group += histogram[hi];
      ++hi;
    }
    if (group > 0) {
      std::vector<double> points;
      points.reserve(group);
      source([&](std::span<const double> block) {
        for (double v : block) {
          const std::size_t b = bucket_of(v);
          if (b >= lo && b < hi) points.push_back(v);
        }
      });
      if (points.size() != group) {
        throw std::logic_error("point source is not repeatable");
      }
      sort_points(points);
      for (std::size_t i = 0; i < points.size(); ++i) {
        ex.visit(static_cast<std::size_t>(rank_before + i + 1), points[i], m);
      }
      rank_before += group;
    }
    lo = hi;
  }
  return ex.report(m, DiscrepancyMethod::streamed);
}

PointSource sequence_points(const Sequence& seq, Index first, Index stride, std::size_t count) {
  if (count == 0) throw std::invalid_argument("empty point range");
  if (stride < 1) throw std::invalid_argument("stride must be positive");
  seq.require_range(first, first + stride * static_cast<Index>(count - 1));
  return [&seq, first, stride, count](const BlockSink& sink) {
    constexpr std::size_t kBlock = 1 << 16;
    std::vector<double> buffer(std::min(kBlock, count));
    std::size_t done = 0;
    while (done < count) {
      const std::size_t len = std::min(kBlock, count - done);
      std::span<double> out(buffer.data(), len);
      seq.fractional_parts(first + stride * static_cast<Index>(done), stride, out);
      sink(out);
      done += len;
    }
  };
}

}  // namespace equidist
