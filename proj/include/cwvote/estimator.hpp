#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cwvote/extended_coupling.hpp"
#include "cwvote/model.hpp"

namespace cwvote {

// Raw sample of voting configurations: n observations (rows) of the
// concatenated +-1 votes of all groups, group-major column order.
struct VoteMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::int8_t> entries;  // row-major, each entry -1 or +1

  std::int8_t at(std::size_t r, std::size_t c) const {
    return entries[r * cols + c];
  }
};

// Per-group realized statistic T (mean of S^2 over the sample) together with
// the sample size n. This is the entire data interface of inference.
struct SufficientSummary {
  struct Group {
    int N;
    double T;
  };

  std::vector<Group> groups;
  long n = 0;

  // Validates n >= 1, T in [kappa, N^2] (snapping file-rounded values within
  // 1e-9 of the edges), and the achievability lattice of n*T.
  SufficientSummary(std::vector<Group> groups, long n);
};

enum class Classification {
  NegInfinite,       // T = kappa
  NegativeFinite,    // kappa < T < N
  NonNegativeFinite, // N <= T < N^2
  PosInfinite,       // T = N^2
};

const char* classification_name(Classification c);

// Classification of the MLE from the realized statistic alone.
Classification classify_estimate(int population, double T);

struct GroupEstimate {
  int N;
  double T;
  ExtendedCoupling beta_hat;
  Classification classification;
  std::optional<double> std_error;              // only for finite beta_hat
  std::optional<std::pair<double, double>> ci;  // only for finite beta_hat
};

struct EstimateReport {
  std::vector<GroupEstimate> per_group;
  long n = 0;
  double level = 0.0;
};

// T_lambda = (1/n) sum_t (sum_i x_{lambda i}^{(t)})^2, group blocks in
// declared order. Entries are validated to be +-1 (malformed-data error with
// 1-based row/column on violation).
SufficientSummary statistic_t(const VoteMatrix& observations,
                              const std::vector<int>& sizes);

// -n sum_lambda ln Z_{beta,N} + (n/2) sum_lambda (beta_lambda/N_lambda) T_lambda.
double log_likelihood(const std::vector<GroupSpec>& model,
                      const SufficientSummary& summary);

// Sigma_ll = 4 N^2 / V_{beta,N} S^2.
double asymptotic_variance(int population, double beta);

// MLE for one group with Wald interval at the given confidence level.
GroupEstimate mle_estimate(int population, double T, long n, double level);

// Group-wise MLE; report ordering matches input ordering.
EstimateReport multi_group_estimate(const SufficientSummary& summary,
                                    double level);

}  // namespace cwvote
