#pragma once

namespace kl {

/// Kahan compensated accumulator for long series sums.
struct Kahan {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    double y = x - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

}  // namespace kl
