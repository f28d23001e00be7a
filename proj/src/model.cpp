#include "cwvote/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cwvote/detail/numeric.hpp"

namespace cwvote {

namespace {

void check_population(int n) {
  if (n < 2) {
    throw Error(ErrorKind::InvalidPopulation,
                "population size must be at least 2, got " + std::to_string(n));
  }
}

void check_finite_beta(double beta) {
  if (!std::isfinite(beta)) {
    throw Error(ErrorKind::Precondition, "coupling must be finite");
  }
}

// Gibbs log-weight of magnetization level k: ln C(N,k) + beta s_k^2 / (2N).
std::vector<long double> level_log_weights(int n, long double beta) {
  std::vector<long double> lw = detail::log_choose_row(n);
  for (int k = 0; k <= n; ++k) {
    const long double s = 2.0L * k - n;
    lw[static_cast<std::size_t>(k)] += beta * s * s / (2.0L * n);
  }
  return lw;
}

struct LevelMoments {
  long double log_z;
  long double es2;
  long double es4;
  long double eabs1;
  long double eabs3;
};

LevelMoments level_moments(int n, double beta) {
  const std::vector<long double> lw = level_log_weights(n, beta);
  const long double m = *std::max_element(lw.begin(), lw.end());
  detail::KahanSum z, s2, s4, a1, a3;
  for (int k = 0; k <= n; ++k) {
    const long double w = std::exp(lw[static_cast<std::size_t>(k)] - m);
    const long double s = std::fabs(2.0L * k - n);
    z.add(w);
    s2.add(s * s * w);
    s4.add(s * s * s * s * w);
    a1.add(s * w);
    a3.add(s * s * s * w);
  }
  const long double zv = z.value();
  return LevelMoments{m + std::log(zv), s2.value() / zv, s4.value() / zv,
                      a1.value() / zv, a3.value() / zv};
}

long double theta_of(int n, const std::vector<long double>& log_choose,
                     long double beta) {
  long double m = -std::numeric_limits<long double>::infinity();
  std::vector<long double> lw(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    const long double s = 2.0L * k - n;
    lw[static_cast<std::size_t>(k)] =
        log_choose[static_cast<std::size_t>(k)] + beta * s * s / (2.0L * n);
    m = std::max(m, lw[static_cast<std::size_t>(k)]);
  }
  detail::KahanSum z, s2;
  for (int k = 0; k <= n; ++k) {
    const long double w = std::exp(lw[static_cast<std::size_t>(k)] - m);
    const long double s = 2.0L * k - n;
    z.add(w);
    s2.add(s * s * w);
  }
  return s2.value() / z.value();
}

}  // namespace

GroupSpec::GroupSpec(int population, double coupling)
    : N(population), beta(coupling) {
  check_population(population);
  check_finite_beta(coupling);
}

double MagnetizationPmf::log_prob_s2(int s_abs) const {
  const int k = (N + s_abs) / 2;
  const double lp = log_probs[static_cast<std::size_t>(k)];
  // S^2 aggregates +-s except at s = 0.
  return s_abs == 0 ? lp : lp + std::log(2.0);
}

KappaInfo kappa_info(int population) {
  check_population(population);
  const bool even = population % 2 == 0;
  const int half = even ? population / 2 : (population + 1) / 2;
  const long double lc = detail::log_choose(population, half);
  long double card = std::exp(lc);
  if (lc < 62.0L * 0.6931471805599453L) card = std::round(card);
  return KappaInfo{even ? 0 : 1, static_cast<double>(card)};
}

double log_partition(int population, double beta) {
  check_population(population);
  check_finite_beta(beta);
  return static_cast<double>(
      detail::log_sum_exp(level_log_weights(population, beta)));
}

MagnetizationPmf magnetization_pmf(int population, double beta) {
  check_population(population);
  check_finite_beta(beta);
  const std::vector<long double> lw = level_log_weights(population, beta);
  const long double log_z = detail::log_sum_exp(lw);

  MagnetizationPmf pmf;
  pmf.N = population;
  pmf.log_probs.resize(lw.size());
  pmf.probs.resize(lw.size());
  detail::KahanSum total;
  for (std::size_t k = 0; k < lw.size(); ++k) {
    pmf.log_probs[k] = static_cast<double>(lw[k] - log_z);
    total.add(std::exp(lw[k] - log_z));
  }
  // Renormalize the linear probabilities so they sum to 1 exactly up to
  // the final rounding.
  const long double norm = total.value();
  for (std::size_t k = 0; k < lw.size(); ++k) {
    pmf.probs[k] = static_cast<double>(std::exp(lw[k] - log_z) / norm);
  }
  return pmf;
}

double moment_s2(int population, ExtendedCoupling beta) {
  check_population(population);
  if (beta.is_neg_infinity()) return kappa_info(population).kappa;
  if (beta.is_pos_infinity()) {
    return static_cast<double>(population) * population;
  }
  const LevelMoments m = level_moments(population, beta.value());
  const double lo = kappa_info(population).kappa;
  const double hi = static_cast<double>(population) * population;
  return std::clamp(static_cast<double>(m.es2), lo, hi);
}

double var_s2(int population, double beta) {
  check_population(population);
  check_finite_beta(beta);
  // Centered pass avoids the cancellation of E S^4 - (E S^2)^2.
  const std::vector<long double> lw = level_log_weights(population, beta);
  const long double m = *std::max_element(lw.begin(), lw.end());
  detail::KahanSum z, s2;
  for (int k = 0; k <= population; ++k) {
    const long double w = std::exp(lw[static_cast<std::size_t>(k)] - m);
    const long double s = 2.0L * k - population;
    z.add(w);
    s2.add(s * s * w);
  }
  const long double mean = s2.value() / z.value();
  detail::KahanSum var;
  for (int k = 0; k <= population; ++k) {
    const long double w = std::exp(lw[static_cast<std::size_t>(k)] - m);
    const long double s = 2.0L * k - population;
    const long double d = s * s - mean;
    var.add(d * d * w);
  }
  return static_cast<double>(var.value() / z.value());
}

double abs_moment(int population, ExtendedCoupling beta, int order) {
  check_population(population);
  if (order != 1 && order != 3) {
    throw Error(ErrorKind::UnsupportedOrder,
                "absolute moment order must be 1 or 3, got " +
                    std::to_string(order));
  }
  if (beta.is_pos_infinity()) {
    return std::pow(static_cast<double>(population), order);
  }
  if (beta.is_neg_infinity()) {
    return std::pow(static_cast<double>(kappa_info(population).kappa), order);
  }
  const LevelMoments m = level_moments(population, beta.value());
  return static_cast<double>(order == 1 ? m.eabs1 : m.eabs3);
}

ExtendedCoupling theta_inverse(int population, double target_second_moment) {
  check_population(population);
  const double t = target_second_moment;
  const double kappa = kappa_info(population).kappa;
  const double n_sq = static_cast<double>(population) * population;
  if (!(t >= kappa) || !(t <= n_sq)) {
    throw Error(ErrorKind::OutOfRange,
                "target second moment " + std::to_string(t) +
                    " outside [" + std::to_string(kappa) + ", " +
                    std::to_string(n_sq) + "] for N = " +
                    std::to_string(population));
  }
  if (t == kappa) return ExtendedCoupling::neg_infinity();
  if (t == n_sq) return ExtendedCoupling::pos_infinity();

  const std::vector<long double> log_choose = detail::log_choose_row(population);
  const auto theta = [&](long double b) {
    return theta_of(population, log_choose, b);
  };
  const long double target = t;

  // Bracket by doubling from [-1, 1]; theta is strictly increasing with the
  // target strictly inside its range, so both loops terminate.
  long double lo = -1.0L, hi = 1.0L;
  for (int guard = 0; theta(lo) > target; ++guard) {
    lo *= 2.0L;
    if (guard > 2000) throw Error(ErrorKind::OutOfRange, "bracketing failed");
  }
  for (int guard = 0; theta(hi) < target; ++guard) {
    hi *= 2.0L;
    if (guard > 2000) throw Error(ErrorKind::OutOfRange, "bracketing failed");
  }

  // Bisection to the bracket-width tolerance. No residual-based early stop:
  // near saturation theta is so flat that a theta-space cutoff would leave
  // errors in beta many orders above the round-trip contract.
  for (int iter = 0; iter < 200; ++iter) {
    const long double mid = 0.5L * (lo + hi);
    const long double width_tol =
        1e-12L * std::max(1.0L, std::fabs(mid));
    if (hi - lo <= width_tol) break;
    if (theta(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return ExtendedCoupling::finite(static_cast<double>(0.5L * (lo + hi)));
}

}  // namespace cwvote
