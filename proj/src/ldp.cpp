#include "cwvote/ldp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cwvote/detail/numeric.hpp"

namespace cwvote {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ln E exp(t S^2) and its t-derivative E[S^2 e^{tS^2}]/E[e^{tS^2}],
// max-anchored over the support of the cached law.
struct CgfEval {
  long double value;
  long double derivative;
};

CgfEval cgf_eval(const RateContext& ctx, long double t) {
  const int n = ctx.N;
  long double m = -std::numeric_limits<long double>::infinity();
  std::vector<long double> le(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    const long double s = 2.0L * k - n;
    le[static_cast<std::size_t>(k)] =
        static_cast<long double>(ctx.pmf.log_probs[static_cast<std::size_t>(k)]) +
        t * s * s;
    m = std::max(m, le[static_cast<std::size_t>(k)]);
  }
  detail::KahanSum z, s2;
  for (int k = 0; k <= n; ++k) {
    const long double w = std::exp(le[static_cast<std::size_t>(k)] - m);
    const long double s = 2.0L * k - n;
    z.add(w);
    s2.add(s * s * w);
  }
  return CgfEval{m + std::log(z.value()), s2.value() / z.value()};
}

double entropy_interior(const RateContext& ctx, double x) {
  // Solve Lambda'(t*) = x; Lambda' is strictly increasing from kappa^2 to N^2.
  const long double target = x;
  long double lo = -1.0L, hi = 1.0L;
  for (int guard = 0; cgf_eval(ctx, lo).derivative > target; ++guard) {
    lo *= 2.0L;
    if (guard > 2000) throw Error(ErrorKind::OutOfRange, "bracketing failed");
  }
  for (int guard = 0; cgf_eval(ctx, hi).derivative < target; ++guard) {
    hi *= 2.0L;
    if (guard > 2000) throw Error(ErrorKind::OutOfRange, "bracketing failed");
  }
  long double t_star = 0.5L * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    t_star = 0.5L * (lo + hi);
    const CgfEval e = cgf_eval(ctx, t_star);
    // The Legendre value is stationary in t at the optimum, so an x-space
    // residual stop costs only second-order error in the value.
    if (std::fabs(e.derivative - target) < 1e-10L) break;
    if (hi - lo <= 1e-12L * std::max(1.0L, std::fabs(t_star))) break;
    if (e.derivative < target) {
      lo = t_star;
    } else {
      hi = t_star;
    }
  }
  const CgfEval e = cgf_eval(ctx, t_star);
  return static_cast<double>(target * t_star - e.value);
}

}  // namespace

RateContext RateContext::create(int population, double beta) {
  if (!std::isfinite(beta)) {
    throw Error(ErrorKind::Precondition, "rate context requires finite beta");
  }
  return RateContext{population, beta, magnetization_pmf(population, beta)};
}

double cgf_s2(const RateContext& ctx, double t) {
  if (!std::isfinite(t)) {
    throw Error(ErrorKind::Precondition, "transform variable must be finite");
  }
  if (t == 0.0) return 0.0;
  return static_cast<double>(cgf_eval(ctx, t).value);
}

double entropy_s2(const RateContext& ctx, double x) {
  if (!std::isfinite(x)) {
    throw Error(ErrorKind::Precondition, "entropy argument must be finite");
  }
  const double kappa = kappa_info(ctx.N).kappa;
  const double kappa_sq = kappa * kappa;
  const double n_sq = static_cast<double>(ctx.N) * ctx.N;
  if (x < kappa_sq || x > n_sq) return kInf;
  if (x == kappa_sq) return -ctx.pmf.log_prob_s2(static_cast<int>(kappa));
  if (x == n_sq) return -ctx.pmf.log_prob_s2(ctx.N);
  return entropy_interior(ctx, x);
}

double delta_atypical(const RateContext& ctx) {
  if (!(ctx.beta > 0.0)) {
    throw Error(ErrorKind::Precondition,
                "atypicality rate requires beta > 0, got " +
                    std::to_string(ctx.beta));
  }
  const double at_n = entropy_s2(ctx, static_cast<double>(ctx.N));
  const double at_n_sq =
      entropy_s2(ctx, static_cast<double>(ctx.N) * ctx.N);
  return std::min(at_n, at_n_sq);
}

double delta_bar(const std::vector<GroupSpec>& model) {
  if (model.empty()) {
    throw Error(ErrorKind::Shape, "model must contain at least one group");
  }
  double total = 0.0;
  for (const GroupSpec& g : model) {
    total += delta_atypical(RateContext::create(g.N, g.beta));
  }
  return total;
}

double rate_j(const RateContext& ctx, ExtendedCoupling y) {
  if (y.is_neg_infinity()) {
    return -ctx.pmf.log_prob_s2(kappa_info(ctx.N).kappa);
  }
  if (y.is_pos_infinity()) {
    return -ctx.pmf.log_prob_s2(ctx.N);
  }
  // theta_N is injective, so the infimum over {x : theta^{-1}(x) = y} is the
  // entropy at the single point theta_N(y).
  return entropy_s2(ctx, moment_s2(ctx.N, y));
}

double rate_j_multi(const std::vector<RateContext>& contexts,
                    const std::vector<ExtendedCoupling>& y) {
  if (contexts.size() != y.size()) {
    throw Error(ErrorKind::Shape,
                "rate argument count does not match group count");
  }
  double total = 0.0;
  for (std::size_t lambda = 0; lambda < contexts.size(); ++lambda) {
    total += rate_j(contexts[lambda], y[lambda]);
  }
  return total;
}

TailBound tail_bound_atypical_t(const RateContext& ctx, long n) {
  if (n < 0) throw Error(ErrorKind::Shape, "sample size must be nonnegative");
  const double delta = delta_atypical(ctx);
  return TailBound{TailBoundKind::AtypicalT, delta, 2.0, n,
                   2.0 * std::exp(-delta * static_cast<double>(n))};
}

TailBound tail_bound_atypical_beta(const std::vector<GroupSpec>& model,
                                   long n) {
  if (n < 0) throw Error(ErrorKind::Shape, "sample size must be nonnegative");
  const double delta = delta_bar(model);
  const double prefactor = std::pow(2.0, static_cast<double>(model.size()));
  return TailBound{TailBoundKind::AtypicalBetaHat, delta, prefactor, n,
                   prefactor * std::exp(-delta * static_cast<double>(n))};
}

TailBound tail_bound_set(const RateContext& ctx, long n,
                         const std::vector<ExtendedInterval>& K) {
  if (n < 0) throw Error(ErrorKind::Shape, "sample size must be nonnegative");
  if (K.empty()) {
    throw Error(ErrorKind::InvalidSet, "set K must be nonempty");
  }
  const ExtendedCoupling beta = ExtendedCoupling::finite(ctx.beta);
  double inf_rate = kInf;
  for (const ExtendedInterval& iv : K) {
    if (!(iv.lo <= iv.hi)) {
      throw Error(ErrorKind::InvalidSet, "interval with lo > hi in K");
    }
    if (iv.lo <= beta && beta <= iv.hi) {
      throw Error(ErrorKind::InvalidSet,
                  "K contains the true coupling; the bound would be vacuous");
    }
    // J decreases toward beta from the left and increases away on the right,
    // so the infimum over the interval sits at the endpoint nearest beta.
    const ExtendedCoupling nearest = (iv.hi < beta) ? iv.hi : iv.lo;
    inf_rate = std::min(inf_rate, rate_j(ctx, nearest));
  }
  return TailBound{TailBoundKind::ClosedSetK, inf_rate, 2.0, n,
                   2.0 * std::exp(-inf_rate * static_cast<double>(n))};
}

}  // namespace cwvote
