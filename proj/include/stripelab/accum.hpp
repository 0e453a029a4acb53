#pragma once

namespace stripelab {

// Compensated accumulator. Keeps pair sums reproducible to well below the
// certificate tolerances regardless of summation order.
struct Kahan {
  long double sum = 0.0L;
  long double carry = 0.0L;

  void add(long double x) {
    long double y = x - carry;
    long double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }

  long double value() const { return sum; }
};

}  // namespace stripelab
