#pragma once

#include <vector>

#include "cwvote/errors.hpp"
#include "cwvote/extended_coupling.hpp"

namespace cwvote {

// One voting group: population size N and coupling beta. N = 1 is rejected
// (S^2 is then constant and beta unidentifiable); infinite couplings live in
// ExtendedCoupling only.
struct GroupSpec {
  int N;
  double beta;

  GroupSpec(int population, double coupling);
};

// Minimum achievable |S| and the number of configurations attaining it.
struct KappaInfo {
  int kappa;                  // 0 for even N, 1 for odd N
  double upsilon_cardinality; // C(N, N/2) resp. C(N, (N+1)/2); exact below 2^63
};

// Exact law of the voting margin S on its N + 1 achievable values
// s_k = 2k - N, k = 0..N. log_probs stay finite even where probs underflow.
struct MagnetizationPmf {
  int N = 0;
  std::vector<double> probs;      // index k -> P(S = 2k - N)
  std::vector<double> log_probs;  // index k -> ln P(S = 2k - N)

  int support(int k) const { return 2 * k - N; }

  // ln P(S^2 = s^2) for an achievable s >= 0 (aggregates +-s).
  double log_prob_s2(int s_abs) const;
};

KappaInfo kappa_info(int population);

// ln Z_{beta,N}, aggregated over the N + 1 magnetization levels with
// binomial log-weights and a max-anchored log-sum-exp.
double log_partition(int population, double beta);

MagnetizationPmf magnetization_pmf(int population, double beta);

// theta_N(beta) = E_{beta,N} S^2, extended by kappa at -inf and N^2 at +inf.
double moment_s2(int population, ExtendedCoupling beta);

// V_{beta,N} S^2 = E S^4 - (E S^2)^2, computed centered; strictly positive.
double var_s2(int population, double beta);

// E_{beta,N} |S|^order for order in {1, 3}; N^order at +inf, kappa^order at -inf.
double abs_moment(int population, ExtendedCoupling beta, int order);

// Inverse of theta_N on [kappa, N^2]: kappa -> -inf, N^2 -> +inf, otherwise
// the unique finite coupling, by bracket-doubling bisection from [-1, 1] down
// to bracket width 1e-12 * max(1, |beta|).
ExtendedCoupling theta_inverse(int population, double target_second_moment);

}  // namespace cwvote
