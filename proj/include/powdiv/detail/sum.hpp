#pragma once

#include <cmath>

namespace powdiv::detail {

// Neumaier's variant of Kahan summation. Divergence sums can run over 1e6
// cells at 1e-5 tolerances, so naive accumulation is not good enough.
class CompensatedSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace powdiv::detail
