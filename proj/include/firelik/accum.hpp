#pragma once

#include <cmath>

namespace firelik {

/// Neumaier compensated accumulator; order-stable sums for the likelihood
/// reductions.
template <class Scalar>
class CompensatedSum {
  public:
    void add(Scalar x) {
        Scalar t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    Scalar value() const { return sum_ + comp_; }

  private:
    Scalar sum_ = Scalar(0);
    Scalar comp_ = Scalar(0);
};

}  // namespace firelik
