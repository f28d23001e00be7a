#include <doctest.h>

#include <cmath>

#include "cwvote/voting.hpp"
#include "support.hpp"

using namespace cwvote;

TEST_CASE("council votes follow the sign of the margin") {
  CHECK(council_votes({3, -1}) == std::vector<int>{1, -1});
  CHECK(council_votes({0}) == std::vector<int>{-1});
  CHECK(council_votes({-5, 5, 0}) == std::vector<int>{-1, 1, -1});
}

TEST_CASE("optimal weights") {
  const WeightReport single = optimal_weights({{2, 0.0}});
  CHECK(single.per_group[0].w == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(single.per_group[0].source == WeightSource::Exact);
  REQUIRE(single.deficit.has_value());

  SUBCASE("cohesion raises the weight among equal sizes") {
    const WeightReport pair = optimal_weights({{6, 0.3}, {6, 1.1}});
    CHECK(pair.per_group[0].w < pair.per_group[1].w);
  }

  SUBCASE("saturates at N for strong coupling") {
    const WeightReport strong = optimal_weights({{9, 100.0}});
    CHECK(std::fabs(strong.per_group[0].w - 9.0) <= 1e-6);
  }

  SUBCASE("negative couplings are rejected") {
    CHECK_THROWS_AS(optimal_weights({{4, -0.2}}), Error);
  }

  SUBCASE("E|S| is strictly increasing in beta") {
    for (int n : {3, 6, 10}) {
      double prev = -1.0;
      for (double beta = -4.0; beta <= 4.0 + 1e-9; beta += 0.25) {
        const double value =
            abs_moment(n, ExtendedCoupling::finite(beta), 1);
        CHECK(value > prev);
        prev = value;
      }
    }
  }
}

TEST_CASE("democracy deficit") {
  // With all weights zero the deficit is E S_bar^2 = sum of second moments.
  const std::vector<GroupSpec> model = {{3, 0.4}, {4, 0.9}};
  const double expected = moment_s2(3, ExtendedCoupling::finite(0.4)) +
                          moment_s2(4, ExtendedCoupling::finite(0.9));
  CHECK(democracy_deficit(model, {0.0, 0.0}) ==
        doctest::Approx(expected).epsilon(1e-13));

  CHECK(democracy_deficit({{3, 0.0}}, {1.5}) ==
        doctest::Approx(0.75).epsilon(1e-13));

  CHECK_THROWS_AS(democracy_deficit(model, {1.0}), Error);

  SUBCASE("matches full enumeration for small systems") {
    const struct {
      std::vector<int> sizes;
      std::vector<double> betas;
      std::vector<double> weights;
    } cases[] = {
        {{3}, {0.7}, {1.2}},
        {{4}, {0.3}, {2.0}},
        {{3, 5}, {0.5, 1.0}, {1.1, 2.3}},
        {{4, 6}, {0.8, 0.2}, {2.2, 1.7}},
        {{5, 4}, {0.0, 1.5}, {1.9, 3.0}},
    };
    for (const auto& c : cases) {
      std::vector<GroupSpec> groups;
      for (std::size_t i = 0; i < c.sizes.size(); ++i) {
        groups.emplace_back(c.sizes[i], c.betas[i]);
      }
      const double exact =
          testsupport::deficit_enumeration(c.sizes, c.betas, c.weights);
      CHECK(democracy_deficit(groups, c.weights) ==
            doctest::Approx(exact).epsilon(1e-12));
    }
  }

  SUBCASE("grid minimizer sits at E|S| for an odd group") {
    const std::vector<GroupSpec> one = {{3, 0.0}};
    const double opt = abs_moment(3, ExtendedCoupling::finite(0.0), 1);
    double best_w = -1.0, best_v = 1e300;
    for (double w = 0.0; w <= 3.0; w += 0.001) {
      const double v = democracy_deficit(one, {w});
      if (v < best_v) {
        best_v = v;
        best_w = w;
      }
    }
    CHECK(std::fabs(best_w - opt) <= 0.0011);
  }

  SUBCASE("zero gradient at the optimal weights for odd sizes") {
    const std::vector<GroupSpec> model_odd = {{3, 0.6}, {5, 1.0}, {7, 0.2}};
    const WeightReport report = optimal_weights(model_odd);
    std::vector<double> w;
    for (const auto& e : report.per_group) w.push_back(e.w);
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double slope = testsupport::centered_diff(
          [&](double wi) {
            std::vector<double> probe = w;
            probe[i] = wi;
            return democracy_deficit(model_odd, probe);
          },
          w[i], 1e-4);
      CHECK(std::fabs(slope) <= 1e-8);
    }
  }
}

TEST_CASE("plug-in weight estimates") {
  const WeightEntry saturated =
      estimate_weights(7, ExtendedCoupling::pos_infinity(), 100);
  CHECK(saturated.w == 7.0);
  CHECK(saturated.source == WeightSource::Estimated);
  CHECK_FALSE(saturated.upsilon_sq.has_value());

  const WeightEntry fair = estimate_weights(2, ExtendedCoupling::finite(0.0), 100);
  CHECK(fair.w == doctest::Approx(1.0).epsilon(1e-13));
  REQUIRE(fair.upsilon_sq.has_value());

  const WeightEntry balanced =
      estimate_weights(4, ExtendedCoupling::neg_infinity(), 100);
  CHECK(balanced.w == 0.0);
}

TEST_CASE("weight estimator variance") {
  CHECK(weight_variance(2, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(weight_variance(3, 0.0) == doctest::Approx(0.75).epsilon(1e-12));
  for (int n : {2, 5, 8}) {
    for (double beta : {-1.0, 0.0, 1.3}) {
      CHECK(weight_variance(n, beta) >= 0.0);
    }
  }
}

TEST_CASE("rate function of the weight estimator") {
  const RateContext ctx = RateContext::create(5, 0.8);
  const double w = abs_moment(5, ExtendedCoupling::finite(0.8), 1);
  CHECK(std::fabs(rate_h(ctx, w)) <= 1e-9);
  CHECK(rate_h(ctx, 5.0) ==
        doctest::Approx(rate_j(ctx, ExtendedCoupling::pos_infinity()))
            .epsilon(1e-10));
  CHECK(std::isinf(rate_h(ctx, 6.0)));
  CHECK(std::isinf(rate_h(ctx, 0.5)));

  // Positive away from the optimum, decreasing toward it.
  const double left = rate_h(ctx, w - 0.8);
  const double closer = rate_h(ctx, w - 0.4);
  CHECK(left > closer);
  CHECK(closer > 0.0);
}
