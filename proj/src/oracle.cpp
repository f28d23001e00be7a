#include "cwvote/oracle.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <string>

#include "cwvote/detail/numeric.hpp"
#include "cwvote/errors.hpp"

namespace cwvote::oracle {

OracleMoments brute_force_moments(int population, double beta) {
  if (population < 2) {
    throw Error(ErrorKind::InvalidPopulation,
                "population size must be at least 2, got " +
                    std::to_string(population));
  }
  if (population > 16) {
    throw Error(ErrorKind::EnumerationCap,
                "brute force enumeration capped at N = 16, got " +
                    std::to_string(population));
  }

  const int n = population;
  // Anchor the Gibbs weights at the largest exponent so the sums stay in
  // range for any beta.
  const long double max_s_sq =
      beta > 0.0 ? static_cast<long double>(n) * n : (n % 2 == 0 ? 0.0L : 1.0L);
  const long double anchor = static_cast<long double>(beta) * max_s_sq /
                             (2.0L * n);

  detail::KahanSum z, s2, s4, a1, a3;
  const std::uint32_t count = 1u << n;
  for (std::uint32_t config = 0; config < count; ++config) {
    const int ones = std::popcount(config);
    const long double s = 2.0L * ones - n;
    const long double w =
        std::exp(static_cast<long double>(beta) * s * s / (2.0L * n) - anchor);
    const long double abs_s = std::fabs(s);
    z.add(w);
    s2.add(s * s * w);
    s4.add(s * s * s * s * w);
    a1.add(abs_s * w);
    a3.add(abs_s * abs_s * abs_s * w);
  }
  const long double zv = z.value();
  OracleMoments m;
  m.log_z = static_cast<double>(anchor + std::log(zv));
  m.es2 = static_cast<double>(s2.value() / zv);
  m.es4 = static_cast<double>(s4.value() / zv);
  m.eabs_s = static_cast<double>(a1.value() / zv);
  m.eabs_s3 = static_cast<double>(a3.value() / zv);
  return m;
}

}  // namespace cwvote::oracle
