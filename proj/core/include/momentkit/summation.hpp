#pragma once

#include <cmath>
#include <complex>

namespace momentkit {

// Neumaier's variant of Kahan summation. Also tracks sum |term| so callers can
// report the cancellation ratio.
class NeumaierSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
    abs_ += std::abs(x);
  }

  double value() const noexcept { return sum_ + comp_; }
  double abs_sum() const noexcept { return abs_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
  double abs_ = 0.0;
};

class ComplexNeumaierSum {
 public:
  void add(std::complex<double> z) noexcept {
    re_.add(z.real());
    im_.add(z.imag());
    abs_ += std::abs(z);
  }

  std::complex<double> value() const noexcept { return {re_.value(), im_.value()}; }
  double abs_sum() const noexcept { return abs_; }

 private:
  NeumaierSum re_;
  NeumaierSum im_;
  double abs_ = 0.0;
};

// sum |term| / |result|; +inf when the result vanishes but terms did not.
inline double cancellation_ratio(double abs_sum, double result) noexcept {
  if (abs_sum == 0.0) return 1.0;
  if (result == 0.0) return INFINITY;
  return abs_sum / std::abs(result);
}

}  // namespace momentkit
