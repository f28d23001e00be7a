#include "cwvote/voting.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace cwvote {

namespace {

struct GroupLaw {
  double es2;
  double eabs;
  double p_zero;
};

GroupLaw group_law(const GroupSpec& g) {
  GroupLaw law;
  law.es2 = moment_s2(g.N, ExtendedCoupling::finite(g.beta));
  law.eabs = abs_moment(g.N, ExtendedCoupling::finite(g.beta), 1);
  law.p_zero =
      g.N % 2 == 0 ? magnetization_pmf(g.N, g.beta).probs[g.N / 2] : 0.0;
  return law;
}

}  // namespace

std::vector<int> council_votes(const std::vector<int>& magnetizations) {
  std::vector<int> votes(magnetizations.size());
  for (std::size_t i = 0; i < magnetizations.size(); ++i) {
    votes[i] = magnetizations[i] > 0 ? 1 : -1;
  }
  return votes;
}

WeightReport optimal_weights(const std::vector<GroupSpec>& model) {
  if (model.empty()) {
    throw Error(ErrorKind::Shape, "model must contain at least one group");
  }
  std::vector<double> weights(model.size());
  WeightReport report;
  report.per_group.reserve(model.size());
  for (std::size_t lambda = 0; lambda < model.size(); ++lambda) {
    const GroupSpec& g = model[lambda];
    if (g.beta < 0.0) {
      throw Error(ErrorKind::Precondition,
                  "optimal weights require beta >= 0; group " +
                      std::to_string(lambda + 1) + " has beta = " +
                      std::to_string(g.beta));
    }
    weights[lambda] = abs_moment(g.N, ExtendedCoupling::finite(g.beta), 1);
    report.per_group.push_back(
        WeightEntry{g.N, weights[lambda], WeightSource::Exact, std::nullopt});
  }
  report.deficit = democracy_deficit(model, weights);
  return report;
}

double democracy_deficit(const std::vector<GroupSpec>& model,
                         const std::vector<double>& weights) {
  if (model.size() != weights.size()) {
    throw Error(ErrorKind::Shape,
                "weight count " + std::to_string(weights.size()) +
                    " does not match group count " +
                    std::to_string(model.size()));
  }
  // Direct terms plus the chi-chi cross term; groups are independent,
  // E S = 0 by symmetry, E S chi = E|S|, and E chi = -P(S = 0).
  double direct = 0.0;
  double cross_sum = 0.0;    // sum of w_l * P(S_l = 0)
  double cross_sq_sum = 0.0; // sum of (w_l * P(S_l = 0))^2
  for (std::size_t lambda = 0; lambda < model.size(); ++lambda) {
    const GroupLaw law = group_law(model[lambda]);
    const double w = weights[lambda];
    direct += law.es2 - 2.0 * w * law.eabs + w * w;
    const double wp = w * law.p_zero;
    cross_sum += wp;
    cross_sq_sum += wp * wp;
  }
  return direct + (cross_sum * cross_sum - cross_sq_sum);
}

WeightEntry estimate_weights(int population, ExtendedCoupling beta_hat,
                             long n) {
  if (n < 1) {
    throw Error(ErrorKind::Shape, "sample size must be at least 1");
  }
  WeightEntry entry;
  entry.N = population;
  entry.source = WeightSource::Estimated;
  entry.w = abs_moment(population, beta_hat, 1);
  if (beta_hat.is_finite()) {
    entry.upsilon_sq = weight_variance(population, beta_hat.value());
  }
  return entry;
}

double weight_variance(int population, double beta) {
  const ExtendedCoupling b = ExtendedCoupling::finite(beta);
  const double eabs3 = abs_moment(population, b, 3);
  const double eabs1 = abs_moment(population, b, 1);
  const double es2 = moment_s2(population, b);
  const double num = eabs3 - eabs1 * es2;
  return num * num / var_s2(population, beta);
}

double rate_h(const RateContext& ctx, double y) {
  if (!std::isfinite(y)) {
    return std::numeric_limits<double>::infinity();
  }
  const double kappa = kappa_info(ctx.N).kappa;
  if (y < kappa || y > static_cast<double>(ctx.N)) {
    return std::numeric_limits<double>::infinity();
  }
  if (y == kappa) return rate_j(ctx, ExtendedCoupling::neg_infinity());
  if (y == static_cast<double>(ctx.N)) {
    return rate_j(ctx, ExtendedCoupling::pos_infinity());
  }
  // beta -> E_beta|S| is strictly increasing; invert it by the same
  // bracket-doubling bisection used for theta.
  const auto eabs = [&](long double b) {
    return static_cast<long double>(
        abs_moment(ctx.N, ExtendedCoupling::finite(static_cast<double>(b)), 1));
  };
  const long double target = y;
  long double lo = -1.0L, hi = 1.0L;
  for (int guard = 0; eabs(lo) > target; ++guard) {
    lo *= 2.0L;
    if (guard > 2000) throw Error(ErrorKind::OutOfRange, "bracketing failed");
  }
  for (int guard = 0; eabs(hi) < target; ++guard) {
    hi *= 2.0L;
    if (guard > 2000) throw Error(ErrorKind::OutOfRange, "bracketing failed");
  }
  for (int iter = 0; iter < 200; ++iter) {
    const long double mid = 0.5L * (lo + hi);
    if (hi - lo <= 1e-12L * std::max(1.0L, std::fabs(mid))) break;
    if (eabs(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double beta_at_y = static_cast<double>(0.5L * (lo + hi));
  return rate_j(ctx, ExtendedCoupling::finite(beta_at_y));
}

}  // namespace cwvote
