#include "cwvote/estimator.hpp"

#include <cmath>
#include <string>

#include "cwvote/detail/numeric.hpp"

namespace cwvote {

namespace {

// Achievability of n*T: every per-draw value of S^2 is 4m^2 (N even) or an
// odd square, i.e. 1 mod 8 (N odd). The residue-class and range check below
// is what file-rounded summaries can support; exact subset feasibility is
// not decided. Tolerance is relative to n*T so full-precision JSON survives.
void check_achievable(int population, double T, long n) {
  const long double v = static_cast<long double>(T) * n;
  const long double tol = 1e-9L * std::max(1.0L, std::fabs(v));
  long double residue;
  if (population % 2 == 0) {
    residue = std::fabs(v / 4.0L - std::round(v / 4.0L)) * 4.0L;
  } else {
    residue = std::fabs((v - n) / 8.0L - std::round((v - n) / 8.0L)) * 8.0L;
  }
  if (residue > tol) {
    throw Error(ErrorKind::OutOfRange,
                "statistic T = " + std::to_string(T) +
                    " is not achievable as a mean of " + std::to_string(n) +
                    " squared margins for N = " + std::to_string(population));
  }
}

double snap(double value, double target, double tol) {
  return std::fabs(value - target) <= tol ? target : value;
}

}  // namespace

const char* classification_name(Classification c) {
  switch (c) {
    case Classification::NegInfinite: return "neg-infinite";
    case Classification::NegativeFinite: return "negative-finite";
    case Classification::NonNegativeFinite: return "non-negative-finite";
    case Classification::PosInfinite: return "pos-infinite";
  }
  return "unknown";
}

SufficientSummary::SufficientSummary(std::vector<Group> groups_in, long n_in)
    : groups(std::move(groups_in)), n(n_in) {
  if (n < 1) {
    throw Error(ErrorKind::Shape, "sample size must be at least 1");
  }
  if (groups.empty()) {
    throw Error(ErrorKind::Shape, "summary must contain at least one group");
  }
  for (std::size_t i = 0; i < groups.size(); ++i) {
    Group& g = groups[i];
    const double kappa = kappa_info(g.N).kappa;  // validates N
    const double n_sq = static_cast<double>(g.N) * g.N;
    g.T = snap(g.T, kappa, 1e-9);
    g.T = snap(g.T, n_sq, 1e-9 * n_sq);
    if (!(g.T >= kappa) || !(g.T <= n_sq)) {
      throw Error(ErrorKind::OutOfRange,
                  "group " + std::to_string(i + 1) + ": T = " +
                      std::to_string(g.T) + " outside [" +
                      std::to_string(kappa) + ", " + std::to_string(n_sq) + "]");
    }
    check_achievable(g.N, g.T, n);
  }
}

Classification classify_estimate(int population, double T) {
  const double kappa = kappa_info(population).kappa;
  const double n_sq = static_cast<double>(population) * population;
  if (!(T >= kappa) || !(T <= n_sq)) {
    throw Error(ErrorKind::OutOfRange,
                "T = " + std::to_string(T) + " outside [" +
                    std::to_string(kappa) + ", " + std::to_string(n_sq) + "]");
  }
  if (T == kappa) return Classification::NegInfinite;
  if (T < population) return Classification::NegativeFinite;
  if (T < n_sq) return Classification::NonNegativeFinite;
  return Classification::PosInfinite;
}

SufficientSummary statistic_t(const VoteMatrix& observations,
                              const std::vector<int>& sizes) {
  if (observations.rows < 1) {
    throw Error(ErrorKind::Shape, "need at least one observation");
  }
  if (sizes.empty()) {
    throw Error(ErrorKind::Shape, "need at least one group size");
  }
  std::size_t total = 0;
  for (int s : sizes) {
    if (s < 2) {
      throw Error(ErrorKind::InvalidPopulation,
                  "group size must be at least 2, got " + std::to_string(s));
    }
    total += static_cast<std::size_t>(s);
  }
  if (observations.cols != total) {
    throw Error(ErrorKind::Shape,
                "observation matrix has " + std::to_string(observations.cols) +
                    " columns, group sizes sum to " + std::to_string(total));
  }

  std::vector<long long> sums(sizes.size(), 0);
  for (std::size_t t = 0; t < observations.rows; ++t) {
    std::size_t col = 0;
    for (std::size_t lambda = 0; lambda < sizes.size(); ++lambda) {
      long long margin = 0;
      for (int i = 0; i < sizes[lambda]; ++i, ++col) {
        const std::int8_t x = observations.at(t, col);
        if (x != 1 && x != -1) {
          throw Error(ErrorKind::MalformedData,
                      "vote entry must be -1 or 1 at row " +
                          std::to_string(t + 1) + ", column " +
                          std::to_string(col + 1),
                      t + 1, col + 1);
        }
        margin += x;
      }
      sums[lambda] += margin * margin;
    }
  }

  std::vector<SufficientSummary::Group> groups(sizes.size());
  for (std::size_t lambda = 0; lambda < sizes.size(); ++lambda) {
    groups[lambda].N = sizes[lambda];
    groups[lambda].T = static_cast<double>(
        static_cast<long double>(sums[lambda]) /
        static_cast<long double>(observations.rows));
  }
  return SufficientSummary(std::move(groups),
                           static_cast<long>(observations.rows));
}

double log_likelihood(const std::vector<GroupSpec>& model,
                      const SufficientSummary& summary) {
  if (model.size() != summary.groups.size()) {
    throw Error(ErrorKind::Shape,
                "model has " + std::to_string(model.size()) +
                    " groups, summary has " +
                    std::to_string(summary.groups.size()));
  }
  long double value = 0.0L;
  for (std::size_t lambda = 0; lambda < model.size(); ++lambda) {
    const GroupSpec& g = model[lambda];
    if (g.N != summary.groups[lambda].N) {
      throw Error(ErrorKind::Shape,
                  "group " + std::to_string(lambda + 1) +
                      ": model N = " + std::to_string(g.N) +
                      " but summary N = " +
                      std::to_string(summary.groups[lambda].N));
    }
    value -= static_cast<long double>(summary.n) * log_partition(g.N, g.beta);
    value += 0.5L * summary.n * (static_cast<long double>(g.beta) / g.N) *
             summary.groups[lambda].T;
  }
  return static_cast<double>(value);
}

double asymptotic_variance(int population, double beta) {
  const double n_sq = static_cast<double>(population) * population;
  return 4.0 * n_sq / var_s2(population, beta);
}

GroupEstimate mle_estimate(int population, double T, long n, double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw Error(ErrorKind::Precondition,
                "confidence level must lie in (0, 1), got " +
                    std::to_string(level));
  }
  if (n < 1) {
    throw Error(ErrorKind::Shape, "sample size must be at least 1");
  }
  const Classification cls = classify_estimate(population, T);

  GroupEstimate est;
  est.N = population;
  est.T = T;
  est.classification = cls;
  switch (cls) {
    case Classification::NegInfinite:
      est.beta_hat = ExtendedCoupling::neg_infinity();
      return est;
    case Classification::PosInfinite:
      est.beta_hat = ExtendedCoupling::pos_infinity();
      return est;
    default:
      break;
  }
  est.beta_hat = theta_inverse(population, T);
  const double beta = est.beta_hat.value();
  const double se = std::sqrt(asymptotic_variance(population, beta) /
                              static_cast<double>(n));
  const double z = detail::normal_quantile(0.5 * (1.0 + level));
  est.std_error = se;
  est.ci = std::make_pair(beta - z * se, beta + z * se);
  return est;
}

EstimateReport multi_group_estimate(const SufficientSummary& summary,
                                    double level) {
  EstimateReport report;
  report.n = summary.n;
  report.level = level;
  report.per_group.reserve(summary.groups.size());
  for (std::size_t lambda = 0; lambda < summary.groups.size(); ++lambda) {
    const auto& g = summary.groups[lambda];
    try {
      report.per_group.push_back(mle_estimate(g.N, g.T, summary.n, level));
    } catch (const Error& e) {
      throw Error(e.kind(), "group " + std::to_string(lambda + 1) + ": " +
                                e.what());
    }
  }
  return report;
}

}  // namespace cwvote
