#pragma once

#include <cmath>
#include <complex>

namespace torus {

// Neumaier-compensated accumulator. Results depend only on the order of
// additions, so a fixed combine order gives bit-reproducible sums.
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(double v) : sum_(v) {}

  CompensatedSum& operator+=(double v) {
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
    return *this;
  }

  CompensatedSum& operator+=(const CompensatedSum& other) {
    *this += other.sum_;
    *this += other.comp_;
    return *this;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class CompensatedComplexSum {
 public:
  CompensatedComplexSum& operator+=(std::complex<double> v) {
    re_ += v.real();
    im_ += v.imag();
    return *this;
  }
  CompensatedComplexSum& operator+=(const CompensatedComplexSum& other) {
    re_ += other.re_;
    im_ += other.im_;
    return *this;
  }
  std::complex<double> value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
};

}  // namespace torus
