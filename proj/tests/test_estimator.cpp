#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cwvote/detail/numeric.hpp"
#include "cwvote/estimator.hpp"
#include "support.hpp"

using namespace cwvote;

namespace {

const double kE = std::numbers::e;

VoteMatrix make_matrix(std::size_t rows, std::size_t cols,
                       std::vector<std::int8_t> entries) {
  VoteMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.entries = std::move(entries);
  return m;
}

}  // namespace

TEST_CASE("sufficient statistic from raw votes") {
  const SufficientSummary unanimous =
      statistic_t(make_matrix(1, 3, {1, 1, 1}), {3});
  CHECK(unanimous.n == 1);
  CHECK(unanimous.groups[0].T == doctest::Approx(9.0));

  const SufficientSummary two_obs =
      statistic_t(make_matrix(2, 2, {1, -1, 1, 1}), {2});
  CHECK(two_obs.groups[0].T == doctest::Approx(2.0));

  const SufficientSummary two_groups =
      statistic_t(make_matrix(1, 5, {1, 1, 1, -1, -1}), {2, 3});
  CHECK(two_groups.groups[0].T == doctest::Approx(4.0));
  CHECK(two_groups.groups[1].T == doctest::Approx(1.0));

  SUBCASE("malformed entries carry their location") {
    try {
      statistic_t(make_matrix(2, 2, {1, 1, 1, 0}), {2});
      FAIL("expected malformed-data error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::MalformedData);
      CHECK(e.row() == 2);
      CHECK(e.col() == 2);
    }
  }

  SUBCASE("column mismatch is a shape error") {
    try {
      statistic_t(make_matrix(1, 3, {1, 1, 1}), {2, 3});
      FAIL("expected shape error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Shape);
    }
  }
}

TEST_CASE("summary validation") {
  SUBCASE("achievable summaries pass") {
    CHECK_NOTHROW(SufficientSummary({{4, 2.0}}, 2));
    CHECK_NOTHROW(SufficientSummary({{3, 9.0}}, 1));
    CHECK_NOTHROW(SufficientSummary({{3, 5.0}}, 2));  // (1 + 9) / 2
  }
  SUBCASE("unachievable values are rejected") {
    CHECK_THROWS_AS(SufficientSummary({{3, 5.0}}, 1), Error);   // odd square only
    CHECK_THROWS_AS(SufficientSummary({{2, 2.0000001}}, 1), Error);
    CHECK_THROWS_AS(SufficientSummary({{4, 17.0}}, 1), Error);  // above N^2
    CHECK_THROWS_AS(SufficientSummary({{5, 0.5}}, 1), Error);   // below kappa
  }
  SUBCASE("file-rounded boundary values snap") {
    const SufficientSummary s({{4, 16.0 - 1e-11}}, 1);
    CHECK(s.groups[0].T == 16.0);
  }
}

TEST_CASE("log likelihood") {
  // At beta = 0 the likelihood is -n (sum N) ln 2 regardless of the data.
  const SufficientSummary summary({{2, 2.0}, {3, 5.0}}, 2);
  const std::vector<GroupSpec> flat = {{2, 0.0}, {3, 0.0}};
  CHECK(log_likelihood(flat, summary) ==
        doctest::Approx(-2.0 * 5.0 * std::log(2.0)).epsilon(1e-13));

  // -n ln Z + (n/2)(beta/N) T at N=2, beta=1, T=2, n=2.
  const SufficientSummary single({{2, 2.0}}, 2);
  const std::vector<GroupSpec> one = {{2, 1.0}};
  CHECK(log_likelihood(one, single) ==
        doctest::Approx(1.0 - 2.0 * std::log(2.0 * kE + 2.0)).epsilon(1e-13));

  SUBCASE("depends on the data only through (T, n)") {
    // Two different raw samples with the same statistic.
    const SufficientSummary a =
        statistic_t(make_matrix(2, 2, {1, -1, 1, 1}), {2});
    const SufficientSummary b =
        statistic_t(make_matrix(2, 2, {-1, -1, -1, 1}), {2});
    REQUIRE(a.groups[0].T == b.groups[0].T);
    for (double beta : {-1.0, 0.0, 0.3, 2.0}) {
      const std::vector<GroupSpec> model = {{2, beta}};
      CHECK(log_likelihood(model, a) == log_likelihood(model, b));
    }
  }

  SUBCASE("shape errors") {
    CHECK_THROWS_AS(log_likelihood({{2, 0.0}}, summary), Error);
    CHECK_THROWS_AS(log_likelihood({{2, 0.0}, {4, 0.0}}, summary), Error);
  }
}

TEST_CASE("asymptotic variance") {
  CHECK(asymptotic_variance(2, 0.0) == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(asymptotic_variance(3, 0.0) == doctest::Approx(3.0).epsilon(1e-13));
  for (int n : {2, 6, 15}) {
    for (double beta : {-2.0, 0.0, 1.5}) {
      CHECK(asymptotic_variance(n, beta) > 0.0);
    }
  }
}

TEST_CASE("single group MLE") {
  const GroupEstimate null_est = mle_estimate(5, 5.0, 100, 0.95);
  CHECK(null_est.beta_hat.is_finite());
  CHECK(null_est.beta_hat.value() == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(null_est.classification == Classification::NonNegativeFinite);
  REQUIRE(null_est.std_error.has_value());
  REQUIRE(null_est.ci.has_value());
  CHECK(null_est.ci->first < 0.0);
  CHECK(null_est.ci->second > 0.0);

  const GroupEstimate infinite = mle_estimate(4, 16.0, 10, 0.95);
  CHECK(infinite.classification == Classification::PosInfinite);
  CHECK(infinite.beta_hat.is_pos_infinity());
  CHECK_FALSE(infinite.std_error.has_value());
  CHECK_FALSE(infinite.ci.has_value());

  const GroupEstimate negative = mle_estimate(4, 2.0, 10, 0.95);
  CHECK(negative.classification == Classification::NegativeFinite);
  CHECK(negative.beta_hat.value() < 0.0);

  const GroupEstimate neg_inf = mle_estimate(4, 0.0, 10, 0.95);
  CHECK(neg_inf.classification == Classification::NegInfinite);
  CHECK(neg_inf.beta_hat.is_neg_infinity());

  CHECK_THROWS_AS(mle_estimate(4, 16.5, 10, 0.95), Error);
  CHECK_THROWS_AS(mle_estimate(4, 2.0, 10, 1.5), Error);

  SUBCASE("optimality: the fitted coupling reproduces T") {
    for (int n : {3, 8}) {
      for (double T : {2.5, 6.0, 8.2}) {
        if (T < kappa_info(n).kappa || T >= n * n) continue;
        const GroupEstimate est = mle_estimate(n, T, 50, 0.9);
        REQUIRE(est.beta_hat.is_finite());
        CHECK(std::fabs(moment_s2(n, est.beta_hat) - T) <= 1e-9);
      }
    }
  }

  SUBCASE("stationarity of the log likelihood at the estimate") {
    const int n_pop = 6;
    const double T = 8.5;
    const long n_obs = 40;
    const GroupEstimate est = mle_estimate(n_pop, T, n_obs, 0.95);
    REQUIRE(est.beta_hat.is_finite());
    const SufficientSummary summary({{n_pop, T}}, n_obs);
    const double slope = testsupport::centered_diff(
        [&](double b) {
          return log_likelihood({GroupSpec(n_pop, b)}, summary);
        },
        est.beta_hat.value(), 1e-5);
    CHECK(std::fabs(slope) <= 1e-5 * static_cast<double>(n_obs));
  }

  SUBCASE("monotone data map") {
    std::vector<double> values;
    for (double T : {0.0, 2.0, 4.0, 6.0, 10.0, 14.0, 16.0}) {
      values.push_back(mle_estimate(4, T, 8, 0.95).beta_hat.as_double());
    }
    for (std::size_t i = 1; i < values.size(); ++i) {
      CHECK(values[i] > values[i - 1]);
    }
  }

  SUBCASE("classification partitions the statistic range") {
    const int n = 4;
    CHECK(classify_estimate(n, 0.0) == Classification::NegInfinite);
    CHECK(classify_estimate(n, 0.5) == Classification::NegativeFinite);
    CHECK(classify_estimate(n, 3.9999) == Classification::NegativeFinite);
    CHECK(classify_estimate(n, 4.0) == Classification::NonNegativeFinite);
    CHECK(classify_estimate(n, 15.9999) == Classification::NonNegativeFinite);
    CHECK(classify_estimate(n, 16.0) == Classification::PosInfinite);
  }
}

TEST_CASE("multi group estimation") {
  const SufficientSummary both_null({{5, 5.0}, {5, 5.0}}, 100);
  const EstimateReport report = multi_group_estimate(both_null, 0.95);
  REQUIRE(report.per_group.size() == 2);
  CHECK(report.per_group[0].beta_hat.value() ==
        doctest::Approx(0.0).epsilon(1e-10));
  CHECK(report.per_group[1].beta_hat.value() ==
        doctest::Approx(0.0).epsilon(1e-10));

  const SufficientSummary mixed({{4, 16.0}, {3, 3.0}}, 4);
  const EstimateReport mixed_report = multi_group_estimate(mixed, 0.95);
  CHECK(mixed_report.per_group[0].classification ==
        Classification::PosInfinite);
  CHECK(mixed_report.per_group[1].beta_hat.value() ==
        doctest::Approx(0.0).epsilon(1e-10));

  CHECK_THROWS_AS(SufficientSummary({}, 3), Error);
}

TEST_CASE("normal quantile meets its accuracy contract") {
  CHECK(std::fabs(detail::normal_quantile(0.975) - 1.959963984540054) <= 1e-9);
  CHECK(std::fabs(detail::normal_quantile(0.995) - 2.5758293035489004) <= 1e-9);
  CHECK(detail::normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(detail::normal_quantile(0.025) ==
        doctest::Approx(-1.959963984540054).epsilon(1e-10));
  // Round trip through the CDF over a wide range.
  for (double p = 0.0005; p < 1.0; p += 0.0207) {
    CHECK(std::fabs(detail::normal_cdf(detail::normal_quantile(p)) - p) <=
          1e-9);
  }
  CHECK_THROWS(detail::normal_quantile(0.0));
  CHECK_THROWS(detail::normal_quantile(1.0));
}
