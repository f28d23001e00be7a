#pragma once

#include <optional>
#include <vector>

#include "cwvote/extended_coupling.hpp"
#include "cwvote/ldp.hpp"
#include "cwvote/model.hpp"

namespace cwvote {

enum class WeightSource { Exact, Estimated };

struct WeightEntry {
  int N;
  double w;
  WeightSource source;
  std::optional<double> upsilon_sq;  // delta-method variance, finite beta_hat only
};

struct WeightReport {
  std::vector<WeightEntry> per_group;
  std::optional<double> deficit;  // democracy deficit at these weights
};

// chi_lambda = +1 if s_lambda > 0, else -1 (ties at zero vote no).
std::vector<int> council_votes(const std::vector<int>& magnetizations);

// w_lambda = E_{beta,N} |S_lambda|; requires all beta >= 0. The report's
// deficit is evaluated at these weights.
WeightReport optimal_weights(const std::vector<GroupSpec>& model);

// E[ S_bar - sum w_lambda chi_lambda ]^2, exactly from the per-group laws:
//   sum_l (E S_l^2 - 2 w_l E|S_l| + w_l^2)
// + sum_{l != m} w_l w_m P(S_l = 0) P(S_m = 0).
double democracy_deficit(const std::vector<GroupSpec>& model,
                         const std::vector<double>& weights);

// Plug-in weight w_hat = E_{beta_hat,N}|S| with boundary values N at +inf and
// kappa at -inf; upsilon^2 attached for finite beta_hat.
WeightEntry estimate_weights(int population, ExtendedCoupling beta_hat, long n);

// upsilon^2 = (E|S|^3 - E|S| E S^2)^2 / V_{beta,N} S^2.
double weight_variance(int population, double beta);

// Rate function of the weight estimator:
// H(y) = J(inverse of beta -> E_beta|S| at y); +infinity outside [kappa, N].
double rate_h(const RateContext& ctx, double y);

}  // namespace cwvote
