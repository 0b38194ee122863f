#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pandora/errors.hpp"
#include "pandora/rng.hpp"
#include "pandora/scoring.hpp"

using namespace pandora;

namespace {

LabeledForecast random_instance(Rng& rng, std::size_t k) {
  std::vector<double> w(k);
  for (auto& x : w) x = rng.uniform(0.05, 1.0);
  return LabeledForecast(Forecast::from_weights(w), rng.below(k));
}

}  // namespace

TEST(PairwiseLoss, KnownValues) {
  const AlphaParam one(1.0), two(2.0);
  EXPECT_DOUBLE_EQ(pairwise_loss(one, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(pairwise_loss(one, 0.5), 2.0);
  EXPECT_DOUBLE_EQ(pairwise_loss(one, 2.0), 0.25);
  EXPECT_DOUBLE_EQ(pairwise_loss(two, 0.5), 2.125);
  EXPECT_DOUBLE_EQ(pairwise_loss(two, 2.0), 0.125);
}

TEST(PairwiseLoss, ContinuousAtOne) {
  for (double a : {0.3, 1.0, 4.0}) {
    const AlphaParam alpha(a);
    EXPECT_NEAR(pairwise_loss(alpha, 1.0 - 1e-9), pairwise_loss(alpha, 1.0 + 1e-9), 1e-7);
  }
}

TEST(PairwiseLoss, ZeroLimit) {
  const AlphaParam z = AlphaParam::zero_limit();
  EXPECT_DOUBLE_EQ(pairwise_loss(z, 0.5), 1.0 - std::log(0.5));
  EXPECT_DOUBLE_EQ(pairwise_loss(z, 4.0), 0.25);
  EXPECT_DOUBLE_EQ(pairwise_loss(z, 1.0), 1.0);
  for (double r : {0.01, 0.3, 0.9, 1.5, 7.0}) {
    EXPECT_NEAR(pairwise_loss(AlphaParam(1e-7), r), pairwise_loss(z, r), 1e-5) << r;
  }
}

TEST(PairwiseLoss, InfinityLimit) {
  const AlphaParam inf = AlphaParam::infinity_limit();
  EXPECT_EQ(pairwise_loss(inf, 0.5), 2.0);
  EXPECT_EQ(pairwise_loss(inf, 1.0), 1.0);
  EXPECT_EQ(pairwise_loss(inf, 2.0), 0.0);
  EXPECT_NEAR(pairwise_loss(AlphaParam(1e5), 0.5), 2.0, 1e-4);
  EXPECT_NEAR(pairwise_loss(AlphaParam(1e5), 2.0), 0.0, 1e-12);
}

TEST(PairwiseLoss, LargeAlphaStaysFinite) {
  const AlphaParam big(5000.0);
  EXPECT_TRUE(std::isfinite(pairwise_loss(big, 0.9)));
  EXPECT_EQ(pairwise_loss(big, 3.0), 0.0);
}

TEST(PairwiseLoss, DecreasingInRatio) {
  for (double a : {0.5, 1.0, 3.0}) {
    const AlphaParam alpha(a);
    double prev = pairwise_loss(alpha, 1e-6);
    for (double r = 0.01; r < 10.0; r *= 1.3) {
      const double cur = pairwise_loss(alpha, r);
      EXPECT_LT(cur, prev);
      prev = cur;
    }
  }
}

TEST(PairwiseLoss, RejectsNonPositiveRatio) {
  EXPECT_THROW(pairwise_loss(AlphaParam(1.0), -0.1), DomainError);
  EXPECT_THROW(pairwise_loss(AlphaParam(1.0), 0.0), DomainError);
}

TEST(BAlpha, KnownValues) {
  EXPECT_DOUBLE_EQ(b_alpha(1.0), 1.0 / 6.0);
  EXPECT_DOUBLE_EQ(b_alpha(2.0), 4.0 / 15.0);
  EXPECT_NEAR(b_alpha(1e9), 0.5, 1e-8);
}

TEST(AlphaParam, ParseAndValidate) {
  EXPECT_EQ(AlphaParam::parse("inf").kind(), AlphaParam::Kind::kInfinityLimit);
  EXPECT_EQ(AlphaParam::parse("infinity").kind(), AlphaParam::Kind::kInfinityLimit);
  EXPECT_EQ(AlphaParam::parse("0").kind(), AlphaParam::Kind::kZeroLimit);
  EXPECT_DOUBLE_EQ(AlphaParam::parse("2.5").value(), 2.5);
  EXPECT_THROW(AlphaParam::parse("abc"), ConfigError);
  EXPECT_THROW(AlphaParam::parse("-1"), ConfigError);
  EXPECT_THROW(AlphaParam(-1.0), DomainError);
  EXPECT_THROW(AlphaParam(std::numeric_limits<double>::quiet_NaN()), DomainError);
}

TEST(PairwiseGradient, MatchesFiniteDifference) {
  for (double a : {0.5, 1.0, 3.0}) {
    const AlphaParam alpha(a);
    // delta = z_true - z_distractor, so d/dz_distractor = -d/d(delta).
    auto loss = [&](double delta) { return pairwise_loss(alpha, std::exp(delta)); };
    for (double delta : {-2.5, -1.0, -0.2, 0.2, 1.0, 2.5}) {
      const double fd = -oracle::central_difference(loss, delta, 1e-6);
      EXPECT_NEAR(pairwise_gradient(a, delta), fd, 1e-6 * std::abs(fd)) << a << " " << delta;
    }
  }
}

TEST(PairwiseGradient, Profile) {
  EXPECT_DOUBLE_EQ(pairwise_gradient(1.0, 0.0), 2.0);
  EXPECT_DOUBLE_EQ(pairwise_gradient(2.0, -1.0), 3.0 * std::exp(-2.0));
  EXPECT_DOUBLE_EQ(pairwise_gradient(2.0, 1.0), 3.0 * std::exp(-3.0));
}

TEST(PandoraRegret, OneHotIsZero) {
  EXPECT_NEAR(pandora_regret(LabeledForecast(Forecast({1.0, 0.0}), 0)), 0.0, 1e-9);
  EXPECT_NEAR(pandora_regret(LabeledForecast(Forecast({0.0, 0.0, 1.0}), 2)), 0.0, 1e-9);
}

TEST(PandoraRegret, UniformForecast) {
  // Every ratio is 1, so each pair contributes L_1(1) = 1.
  for (std::size_t k : {2, 3, 7}) {
    EXPECT_NEAR(pandora_regret(LabeledForecast(Forecast::uniform(k), 0)), 1.0 / 3.0, 1e-15);
  }
}

TEST(PandoraRegret, ZeroMassOnTruthIsLargeButFinite) {
  const double s = pandora_regret(LabeledForecast(Forecast({0.0, 1.0}), 0));
  EXPECT_TRUE(std::isfinite(s));
  EXPECT_NEAR(s, 1.0, 1e-6);  // (1 + 2) / 3 at r -> 0
}

TEST(BetaScore, UniformCostIdentityAtAlphaOne) {
  Rng rng(7);
  for (int t = 0; t < 200; ++t) {
    const std::size_t k = 2 + rng.below(6);
    const LabeledForecast lf = random_instance(rng, k);
    const double raw = raw_expected_cost(lf, AlphaParam(1.0), BaseCosts::unit(k));
    const double affine = (1.0 + static_cast<double>(k - 1) * pandora_regret(lf)) / 2.0;
    EXPECT_NEAR(raw, affine, 1e-12 * affine);
  }
}

TEST(BetaScore, RawCostMatchesQuadrature) {
  Rng rng(11);
  for (double a : {0.5, 1.0, 2.0, 5.0}) {
    for (int t = 0; t < 5; ++t) {
      const std::size_t k = 2 + rng.below(4);
      const LabeledForecast lf = random_instance(rng, k);
      std::vector<double> base(k);
      for (auto& c : base) c = rng.uniform(0.5, 3.0);
      const std::vector<double> p(lf.forecast.probs().begin(), lf.forecast.probs().end());
      const double expected = oracle::beta_raw_cost(p, lf.true_class, base, a);
      EXPECT_NEAR(raw_expected_cost(lf, AlphaParam(a), BaseCosts(base)), expected, 1e-8 * expected) << a;
    }
  }
}

TEST(BetaScore, LinearInCosts) {
  Rng rng(3);
  const LabeledForecast lf = random_instance(rng, 4);
  const BaseCosts c({1.0, 2.0, 3.0, 4.0}), c3({3.0, 6.0, 9.0, 12.0});
  const AlphaParam a(2.0);
  EXPECT_NEAR(beta_score(lf, a, c3), 3.0 * beta_score(lf, a, c), 1e-12);
}

TEST(BetaScore, InfinityLimitIsRankCount) {
  // Unit costs: each distractor ranked above the truth costs 2, ties cost 1.
  const LabeledForecast lf(Forecast({0.5, 0.2, 0.2, 0.1}), 1);
  EXPECT_DOUBLE_EQ(beta_score(lf, AlphaParam::infinity_limit(), BaseCosts::unit(4)), 2.0 + 1.0);
  EXPECT_DOUBLE_EQ(raw_expected_cost(lf, AlphaParam::infinity_limit(), BaseCosts::unit(4)), 1.0 + 1.0 + 0.5);
}

TEST(BetaScore, ZeroLimitRawCostUnsupported) {
  const LabeledForecast lf(Forecast({0.5, 0.5}), 0);
  EXPECT_NO_THROW(beta_score(lf, AlphaParam::zero_limit(), BaseCosts::unit(2)));
  EXPECT_THROW(raw_expected_cost(lf, AlphaParam::zero_limit(), BaseCosts::unit(2)), UnsupportedError);
}

TEST(BetaScore, DimensionMismatch) {
  const LabeledForecast lf(Forecast({0.5, 0.5}), 0);
  EXPECT_THROW(beta_score(lf, AlphaParam(1.0), BaseCosts::unit(3)), ConfigError);
}

TEST(BaseCosts, RejectsNonPositive) {
  EXPECT_THROW(BaseCosts({1.0, 0.0}), DomainError);
  EXPECT_THROW(BaseCosts({1.0, -2.0}), DomainError);
  EXPECT_THROW(BaseCosts({1.0, std::numeric_limits<double>::infinity()}), DomainError);
}

TEST(Forecast, Validation) {
  EXPECT_THROW(Forecast({1.0}), DomainError);
  EXPECT_THROW(Forecast({0.6, 0.6}), DomainError);
  EXPECT_THROW(Forecast({-0.1, 1.1}), DomainError);
  EXPECT_NO_THROW(Forecast({0.5, 0.5 + 1e-10}));
  EXPECT_THROW(LabeledForecast(Forecast({0.5, 0.5}), 2), DomainError);
  EXPECT_EQ(Forecast({0.4, 0.4, 0.2}).argmax(), 0u);
  EXPECT_DOUBLE_EQ(Forecast({1.0, 0.0}).clamped(1), kProbabilityFloor);
}

TEST(TieSplit, Values) {
  EXPECT_EQ(tie_split(2.0, 1.0), 1.0);
  EXPECT_EQ(tie_split(1.0, 1.0), 0.5);
  EXPECT_EQ(tie_split(1.0, 2.0), 0.0);
}
