#pragma once

// Shared test-only numerics: independent oracles and classical test
// statistics used by the unit and acceptance suites. Nothing here may call
// into the implementation paths it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace testsupport {

// ---------------------------------------------------------------------------
// Regularized incomplete gamma, for chi-square tail probabilities.

inline double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

inline double gamma_q_contfrac(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-15) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

// Q(a, x) = P(Gamma(a) > x).
inline double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::domain_error("gamma_q domain");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_contfrac(a, x);
}

// Survival function of chi-square with k degrees of freedom.
inline double chi2_sf(double x, double k) { return gamma_q(0.5 * k, 0.5 * x); }

// ---------------------------------------------------------------------------
// Kolmogorov-Smirnov against a given CDF.

inline double ks_statistic(std::vector<double> sample,
                           const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max(d, (static_cast<double>(i) + 1.0) / n - f);
    d = std::max(d, f - static_cast<double>(i) / n);
  }
  return d;
}

// Asymptotic Kolmogorov p-value with Stephens' small-sample correction.
inline double ks_p_value(double d, std::size_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  double p = 0.0;
  for (int j = 1; j <= 101; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    p += (j % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(p, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Gibbs enumeration helpers (independent of the library's level sums).

// Legendre transform sup_t { x t - cgf(t) } by grid search with refinement.
inline double legendre_sup_oracle(const std::function<double(double)>& cgf,
                                  double x, double t_lo = -30.0,
                                  double t_hi = 30.0) {
  double lo = t_lo, hi = t_hi;
  double best_t = 0.0;
  for (int round = 0; round < 5; ++round) {
    const int points = 2001;
    double best = -1e300;
    for (int i = 0; i < points; ++i) {
      const double t = lo + (hi - lo) * i / (points - 1);
      const double v = x * t - cgf(t);
      if (v > best) {
        best = v;
        best_t = t;
      }
    }
    const double step = (hi - lo) / (points - 1);
    lo = best_t - 2.0 * step;
    hi = best_t + 2.0 * step;
  }
  return x * best_t - cgf(best_t);
}

// Democracy deficit E[S_bar - sum w chi]^2 by full enumeration over the
// product configuration space. sizes small (sum <= ~20).
inline double deficit_enumeration(const std::vector<int>& sizes,
                                  const std::vector<double>& betas,
                                  const std::vector<double>& weights) {
  const int m = static_cast<int>(sizes.size());
  int total = 0;
  for (int s : sizes) total += s;
  if (total > 24) throw std::domain_error("enumeration too large");

  long double z = 0.0L, acc = 0.0L;
  const std::uint64_t count = 1ULL << total;
  for (std::uint64_t config = 0; config < count; ++config) {
    long double log_w = 0.0L;
    long double s_bar = 0.0L;
    long double council = 0.0L;
    int offset = 0;
    for (int g = 0; g < m; ++g) {
      int margin = 0;
      for (int i = 0; i < sizes[g]; ++i) {
        margin += ((config >> (offset + i)) & 1ULL) ? 1 : -1;
      }
      offset += sizes[g];
      log_w += static_cast<long double>(betas[g]) * margin * margin /
               (2.0L * sizes[g]);
      s_bar += margin;
      council += weights[g] * (margin > 0 ? 1.0L : -1.0L);
    }
    const long double w = std::exp(log_w);
    const long double dev = s_bar - council;
    z += w;
    acc += dev * dev * w;
  }
  return static_cast<double>(acc / z);
}

// Centered finite difference.
inline double centered_diff(const std::function<double(double)>& f, double x,
                            double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Simple percentile (nearest-rank on a copy).
inline double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2]
                    : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace testsupport
