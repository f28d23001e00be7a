#pragma once

#include <vector>

#include "cwvote/extended_coupling.hpp"
#include "cwvote/model.hpp"

namespace cwvote {

// Sampling measure for the large-deviation quantities: a group at its true
// (finite) coupling with the magnetization law cached. Immutable; share
// freely across threads.
struct RateContext {
  int N;
  double beta;
  MagnetizationPmf pmf;

  static RateContext create(int population, double beta);
};

enum class TailBoundKind { AtypicalT, AtypicalBetaHat, ClosedSetK };

struct TailBound {
  TailBoundKind kind;
  double delta;      // rate constant (inf of the relevant rate function)
  double prefactor;  // 2^M
  long n;
  double bound;      // prefactor * exp(-delta * n)
};

// Cumulant generating function Lambda_{S^2}(t) = ln E exp(t S^2).
double cgf_s2(const RateContext& ctx, double t);

// Entropy (Legendre transform) Lambda*_{S^2}(x): finite on [kappa^2, N^2]
// with the discrete boundary values -ln P(S^2 = kappa^2) and -ln P(S^2 = N^2),
// +infinity outside. Interior values solve Lambda'(t*) = x by bracket-doubling
// bisection (|Lambda'(t) - x| < 1e-10 or bracket width below 1e-12*max(1,|t|)).
double entropy_s2(const RateContext& ctx, double x);

// delta = min{Lambda*_{S^2}(N), Lambda*_{S^2}(N^2)}; requires beta > 0.
double delta_atypical(const RateContext& ctx);

// delta_bar = sum of per-group delta_atypical; requires all beta > 0.
double delta_bar(const std::vector<GroupSpec>& model);

// Rate function J(y) = Lambda*_{S^2}(theta_N(y)); boundary values at +-inf
// use the probability mass at S^2 = N^2 resp. kappa^2.
double rate_j(const RateContext& ctx, ExtendedCoupling y);

// Multivariate rate: sum of per-group J evaluated coordinate-wise.
double rate_j_multi(const std::vector<RateContext>& contexts,
                    const std::vector<ExtendedCoupling>& y);

// Closed interval in extended couplings, used to assemble the sets K.
struct ExtendedInterval {
  ExtendedCoupling lo;
  ExtendedCoupling hi;
};

// P{T not in [N, N^2)} <= 2 exp(-delta n).
TailBound tail_bound_atypical_t(const RateContext& ctx, long n);

// P{beta_hat not in [0, inf)^M} <= 2^M exp(-delta_bar n).
TailBound tail_bound_atypical_beta(const std::vector<GroupSpec>& model, long n);

// P{beta_hat in K} <= 2 exp(-n inf_K J) for K a finite union of closed
// intervals excluding the true coupling; the infimum is attained at the
// interval endpoint nearest beta on each side (monotone wings of J).
TailBound tail_bound_set(const RateContext& ctx, long n,
                         const std::vector<ExtendedInterval>& K);

}  // namespace cwvote
