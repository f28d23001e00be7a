#pragma once

namespace cwvote::oracle {

// Exact sums over all 2^N voting configurations. Reference implementation
// for tests and debugging only; never on the estimation path.
struct OracleMoments {
  double log_z;
  double es2;
  double es4;
  double eabs_s;
  double eabs_s3;
};

// Full enumeration of Omega_N; 2 <= N <= 16 (hard cap).
OracleMoments brute_force_moments(int population, double beta);

}  // namespace cwvote::oracle
