#pragma once

#include <cmath>

namespace equidist {

/// Neumaier's variant of Kahan summation: the compensation also survives
/// addends larger than the running sum.
template <typename T>
class CompensatedSum {
 public:
  void add(T value) {
    const T t = sum_ + value;
    if (std::fabs(sum_) >= std::fabs(value)) {
      compensation_ += (sum_ - t) + value;
    } else {
      compensation_ += (value - t) + sum_;
    }
    sum_ = t;
  }

  CompensatedSum& operator+=(T value) {
    add(value);
    return *this;
  }

  T value() const { return sum_ + compensation_; }

 private:
  T sum_ = T(0);
  T compensation_ = T(0);
};

}  // namespace equidist
