#pragma once

// Weyl exponential sums S_N(h) = (1/N) sum_k exp(2 pi i h x_k).

#include "equidist/seqlab.hpp"

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace equidist {

struct WeylPoint {
  std::int64_t h = 1;
  std::int64_t N = 1;
  std::complex<double> sum;
  double magnitude = 0;
};

/// Phases are reduced modulo one before exponentiating.
WeylPoint weyl_sum(const RealSequence& x, std::int64_t h);

/// Weyl sum from precomputed fractional parts {x_k}.
WeylPoint weyl_sum_fractional(const UnitSequence& u, std::int64_t h);

/// Rows for every 1 <= |h| <= h_max and N in n_grid, ordered by (h, N) with
/// h running -h_max..-1, 1..h_max. Rows for h and -h are conjugate.
std::vector<WeylPoint> weyl_profile(const SequenceSpec& spec, std::int64_t h_max,
                                    const std::vector<std::int64_t>& n_grid, unsigned threads = 1);

/// CSV with header "h,N,re,im,magnitude".
void write_weyl_csv(std::ostream& out, const std::vector<WeylPoint>& rows);

}  // namespace equidist
