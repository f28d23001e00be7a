#pragma once

#include <cstddef>
#include <vector>

namespace cwvote::detail {

// Compensated (Kahan) accumulator. Magnetization-level sums have up to
// N + 1 positive terms; plain summation would lose digits against the
// 1e-12 oracle-equivalence tolerance at large N.
struct KahanSum {
  long double sum = 0.0L;
  long double carry = 0.0L;

  void add(long double x) {
    const long double y = x - carry;
    const long double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  long double value() const { return sum; }
};

// log C(N, k) for k = 0..N.
std::vector<long double> log_choose_row(int n);

// log C(n, k).
long double log_choose(int n, int k);

// log(sum exp(v)) anchored at the maximal term.
long double log_sum_exp(const std::vector<long double>& v);

// Standard normal quantile (Wichura's AS241 rational approximation,
// relative accuracy well below the 1e-9 contract). p in (0, 1).
double normal_quantile(double p);

// Standard normal CDF.
double normal_cdf(double x);

}  // namespace cwvote::detail
