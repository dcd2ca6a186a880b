#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <variant>

#include "generators.hpp"
#include "mablab/errors.hpp"
#include "mablab/sampling.hpp"

namespace mablab {
namespace {

using testing::for_all;
using testing::Gen;

History history_with_means(std::initializer_list<double> means) {
  History h(means.size());
  std::size_t k = 0;
  for (double m : means) h.record(k++, m);
  return h;
}

History random_history(Gen& g, std::size_t num_arms, bool bernoulli = false) {
  History h(num_arms);
  const std::size_t steps = g.index(num_arms, 40);
  for (std::size_t t = 0; t < steps; ++t) {
    const std::size_t arm = t < num_arms ? t : g.index(0, num_arms - 1);
    h.record(arm, bernoulli ? static_cast<double>(g.coin()) : g.uniform(-2.0, 2.0));
  }
  return h;
}

const SeedStream kSeeds(4);

TEST(Sampling, GreedyOneHotOnArgmax) {
  const auto p = sampling_probabilities({sampling::Greedy{}}, history_with_means({0.2, 0.9, 0.1}),
                                        kSeeds);
  EXPECT_EQ(p, (std::vector<double>{0.0, 1.0, 0.0}));
}

TEST(Sampling, EpsGreedySplitsEpsilon) {
  const auto p = sampling_probabilities({sampling::EpsGreedy{0.3}},
                                        history_with_means({0.2, 0.9, 0.1}), kSeeds);
  EXPECT_NEAR(p[0], 0.15, 1e-15);
  EXPECT_NEAR(p[1], 0.7, 1e-15);
  EXPECT_NEAR(p[2], 0.15, 1e-15);
}

TEST(Sampling, UcbBonusValue) {
  EXPECT_NEAR(ucb_bonus(0.1, 4), 1.07296, 1e-4);
  EXPECT_NEAR(ucb_bonus(0.1, 4), 1.0729830131446736, 1e-14);
}

TEST(Sampling, LilUcbBonusValue) {
  const sampling::LilUcb p{0.01, 1.0, 0.005, 1.0};
  EXPECT_NEAR(lil_ucb_bonus(p, 100), 0.81702, 1e-4);
  EXPECT_NEAR(lil_ucb_bonus(p, 100), 0.81702277085438857, 1e-13);
}

TEST(Sampling, LilUcbBonusClampsSmallCounts) {
  const sampling::LilUcb p{0.01, 1.0, 0.005, 1.0};
  EXPECT_NEAR(lil_ucb_bonus(p, 1), 7.1972626205569883, 1e-12);
  EXPECT_TRUE(std::isfinite(lil_ucb_bonus(p, 2)));
  for (std::size_t n = 3; n < 500; ++n) {
    EXPECT_LT(lil_ucb_bonus(p, n), lil_ucb_bonus(p, n - 1)) << n;
  }
}

TEST(Sampling, UcbPicksLargestIndex) {
  History h(2);
  h.record(0, 1.0);
  h.record(1, 0.0);
  h.record(0, 1.0);
  h.record(0, 1.0);  // arm 1: mean 1, N 3; arm 2: mean 0, N 1
  const auto p = sampling_probabilities({sampling::Ucb{0.1}}, h, kSeeds);
  const double i0 = 1.0 + ucb_bonus(0.1, 3);
  const double i1 = 0.0 + ucb_bonus(0.1, 1);
  EXPECT_EQ(p[0], i0 >= i1 ? 1.0 : 0.0);
}

TEST(Sampling, TiesGoToLowestIndex) {
  EXPECT_EQ(argmax_lowest(std::vector<double>{1.0, 3.0, 3.0}), 1u);
  const auto p = sampling_probabilities({sampling::Greedy{}}, history_with_means({0.5, 0.5}), kSeeds);
  EXPECT_EQ(p[0], 1.0);
}

TEST(Sampling, WarmupIsOneHotOnT) {
  History h(3);
  h.record(0, 5.0);
  const auto p = sampling_probabilities({sampling::Greedy{}, true}, h, kSeeds);
  EXPECT_EQ(p, (std::vector<double>{0.0, 1.0, 0.0}));
}

TEST(Sampling, WithoutWarmupUnsampledArmsComeFirst) {
  History h(3);
  h.record(0, 5.0);
  const auto p = sampling_probabilities({sampling::Ucb{0.1}, false}, h, kSeeds);
  EXPECT_EQ(p, (std::vector<double>{0.0, 1.0, 0.0}));
}

TEST(Sampling, ProbabilitiesSumToOneProperty) {
  for_all(1000, 41, [](Gen& g, std::size_t) {
    const std::size_t num_arms = g.index(1, 6);
    const bool bernoulli = g.coin();
    const History h = random_history(g, num_arms, bernoulli);
    const SeedStream seeds(g.seed());
    const SamplingRuleSpec specs[] = {
        {sampling::RoundRobin{}},       {sampling::UniformRandom{}},
        {sampling::Greedy{}},           {sampling::EpsGreedy{g.uniform(0.0, 1.0)}},
        {sampling::Ucb{0.1}},           {sampling::LilUcb{}},
        {sampling::ThompsonGaussian{}}, {sampling::ThompsonBetaBernoulli{2, 1}},
        {sampling::ArgminMean{}},
    };
    for (const auto& spec : specs) {
      if (!bernoulli && std::holds_alternative<sampling::ThompsonBetaBernoulli>(spec.rule)) continue;
      SamplingDecision d;
      sampling_decision(spec, h, seeds, d);
      const double total = std::accumulate(d.probabilities.begin(), d.probabilities.end(), 0.0);
      ASSERT_NEAR(total, 1.0, 1e-12) << rule_name(spec);
      std::vector<double> widths(num_arms, 0.0);
      for (const auto& seg : d.layout) widths[seg.arm] += seg.width;
      for (std::size_t k = 0; k < num_arms; ++k) {
        ASSERT_GE(d.probabilities[k], 0.0);
        ASSERT_NEAR(widths[k], d.probabilities[k], 1e-12) << rule_name(spec);
      }
      ASSERT_LT(select_arm(d, g.open_unit()), num_arms);
    }
  });
}

TEST(Sampling, IndexRulesIgnoreCommonShiftProperty) {
  for_all(500, 42, [](Gen& g, std::size_t) {
    const std::size_t num_arms = g.index(2, 5);
    const History h = random_history(g, num_arms);
    const double shift = g.uniform(-10.0, 10.0);
    History shifted(num_arms);
    for (std::size_t t = 0; t < h.time(); ++t) {
      shifted.record(h.actions()[t], h.rewards()[t] + shift);
    }
    for (const SamplingRuleSpec& spec :
         {SamplingRuleSpec{sampling::Greedy{}}, SamplingRuleSpec{sampling::Ucb{0.2}},
          SamplingRuleSpec{sampling::LilUcb{}}}) {
      const auto a = sampling_probabilities(spec, h, kSeeds);
      const auto b = sampling_probabilities(spec, shifted, kSeeds);
      ASSERT_EQ(std::max_element(a.begin(), a.end()) - a.begin(),
                std::max_element(b.begin(), b.end()) - b.begin())
          << rule_name(spec);
    }
  });
}

// Past eps = (K-1)/K the greedy arm is the least likely one, so raising its
// rewards lowers its probability.
TEST(Sampling, EpsGreedyInvertsBeyondThreshold) {
  History h(3);
  h.record(0, 1.0);
  h.record(1, 0.0);
  h.record(2, 0.0);
  SamplingDecision d;
  sampling_decision({sampling::EpsGreedy{0.9}}, h, kSeeds, d);
  EXPECT_NEAR(d.probabilities[0], 0.1, 1e-15);
  EXPECT_NEAR(d.probabilities[1], 0.45, 1e-15);
  sampling_decision({sampling::EpsGreedy{2.0 / 3.0}}, h, kSeeds, d);
  EXPECT_NEAR(d.probabilities[0], d.probabilities[1], 1e-15);
}

// The eps-greedy layout keeps an arm's selection region when it becomes the
// argmax, so raising its rewards can only add pulls.
TEST(Sampling, EpsGreedyLayoutIsNested) {
  for_all(500, 43, [](Gen& g, std::size_t) {
    const std::size_t num_arms = g.index(2, 6);
    const double k_arms = static_cast<double>(num_arms);
    const double eps = g.uniform(0.0, (k_arms - 1.0) / k_arms);
    const SamplingRuleSpec spec{sampling::EpsGreedy{eps}};
    std::vector<double> low(num_arms);
    for (auto& m : low) m = g.uniform(0.0, 1.0);
    const std::size_t k = g.index(0, num_arms - 1);
    std::vector<double> high = low;
    high[k] = 5.0;
    auto hist = [&](const std::vector<double>& means) {
      History h(num_arms);
      for (std::size_t j = 0; j < num_arms; ++j) h.record(j, means[j]);
      return h;
    };
    SamplingDecision before;
    SamplingDecision after;
    sampling_decision(spec, hist(low), kSeeds, before);
    sampling_decision(spec, hist(high), kSeeds, after);
    for (int i = 0; i < 50; ++i) {
      const double w = g.open_unit();
      if (select_arm(before, w) == k) {
        ASSERT_EQ(select_arm(after, w), k);
      }
    }
  });
}

TEST(Sampling, SelectArmRejectsBadProbabilities) {
  SamplingDecision d{{0.5, 0.4}, {{0, 0.5}, {1, 0.4}}};
  EXPECT_THROW(select_arm(d, 0.3), ConsistencyError);
  d = {{1.0 + 1e-9, 0.0}, {{0, 1.0}}};
  EXPECT_THROW(select_arm(d, 0.3), ConsistencyError);
  d = {{1.0, 0.0}, {{0, 1.0}}};
  EXPECT_EQ(select_arm(d, 0.999), 0u);
}

TEST(Sampling, ValidateNamesTheField) {
  try {
    validate(SamplingRuleSpec{sampling::Ucb{1.5}}, 2);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.path(), "sampling.delta");
  }
  EXPECT_THROW(validate(SamplingRuleSpec{sampling::EpsGreedy{-0.1}}, 2), ConfigError);
  EXPECT_THROW(validate(SamplingRuleSpec{sampling::LilUcb{0.0, 1.0, 0.1, 1.0}}, 2), ConfigError);
  EXPECT_THROW(validate(SamplingRuleSpec{sampling::ThompsonGaussian{{0.0}, 1.0, 1.0}}, 2),
               ConfigError);
  EXPECT_THROW(validate(SamplingRuleSpec{sampling::ThompsonGaussian{{}, 0.0, 1.0}}, 2),
               ConfigError);
}

TEST(PosteriorSample, GaussianMedianIsPosteriorMean) {
  const double mu0 = 0.3, sd0 = 2.0, sigma = 1.5, sum = 4.2;
  const double n = 5.0;
  const auto prior = gaussian_prior(mu0, sd0, sigma);
  const auto draw =
      posterior_sample_expfamily(GaussianConjugate{sigma}, prior, sum / (sigma * sigma), n, 0.5);
  const double expected = (mu0 / (sd0 * sd0) + sum / (sigma * sigma)) / (1 / (sd0 * sd0) + n / (sigma * sigma));
  EXPECT_NEAR(draw.mean, expected, 1e-14);
}

TEST(PosteriorSample, GaussianMatchesThompsonFormula) {
  const double mu0 = -0.5, sd0 = 1.0, sigma = 1.0, sum = 2.0, n = 3.0, u = 0.8;
  const auto draw = posterior_sample_expfamily(GaussianConjugate{sigma},
                                               gaussian_prior(mu0, sd0, sigma), sum, n, u);
  const double precision = 1.0 + n;
  EXPECT_NEAR(draw.mean, (mu0 + sum) / precision + normal_quantile(u) / std::sqrt(precision),
              1e-14);
}

TEST(PosteriorSample, BetaUniformPriorReturnsU) {
  for (double u : {0.1, 0.37, 0.5, 0.9}) {
    EXPECT_NEAR(posterior_sample_expfamily(BetaConjugate{}, beta_prior(1, 1), 0, 0, u).mean, u,
                1e-14);
  }
}

TEST(PosteriorSample, BetaMatchesReferenceQuantiles) {
  // Beta(1,1) prior after 2 successes in 6 pulls is Beta(3,5).
  EXPECT_NEAR(posterior_sample_expfamily(BetaConjugate{}, beta_prior(1, 1), 2, 6, 0.3).mean,
              0.27633969390490676, 1e-12);
  EXPECT_NEAR(posterior_sample_expfamily(BetaConjugate{}, beta_prior(1.5, 2.5), 0, 0, 0.9).mean,
              0.68471032160800926, 1e-12);
}

TEST(PosteriorSample, MonotoneInSufficientStatisticProperty) {
  for_all(1000, 44, [](Gen& g, std::size_t) {
    const double u = g.open_unit();
    const std::size_t n = g.index(0, 30);
    // Gaussian: any real sum.
    double prev = -INFINITY;
    for (int i = 0; i <= 10; ++i) {
      const double s = -10.0 + 2.0 * i;
      const double eta =
          posterior_sample_expfamily(GaussianConjugate{1.0}, gaussian_prior(0, 1, 1), s, n, u).eta;
      ASSERT_GE(eta, prev);
      prev = eta;
    }
    // Beta: successes 0..n.
    prev = -INFINITY;
    for (std::size_t s = 0; s <= n; ++s) {
      const double eta = posterior_sample_expfamily(BetaConjugate{}, beta_prior(1, 1),
                                                    static_cast<double>(s), static_cast<double>(n), u)
                             .eta;
      ASSERT_GE(eta, prev);
      prev = eta;
    }
  });
}

TEST(PosteriorSample, CustomFamily) {
  CustomConjugate exponential_rate{
      [](double u, double tau, double n) { return -std::log1p(-u) * n / (tau + 1.0); },
      [](double eta) { return 1.0 / eta; }};
  const auto draw = posterior_sample_expfamily(exponential_rate, {1.0, 1.0}, 1.0, 1.0, 0.5);
  EXPECT_NEAR(draw.eta, std::log(2.0) * 2.0 / 3.0, 1e-15);
  EXPECT_THROW(posterior_sample_expfamily(CustomConjugate{}, {1.0, 1.0}, 0.0, 0.0, 0.5),
               UnsupportedFamilyError);
}

TEST(PosteriorSample, RejectsBadUniform) {
  EXPECT_THROW(posterior_sample_expfamily(BetaConjugate{}, beta_prior(1, 1), 0, 0, 1.0),
               DomainError);
}

}  // namespace
}  // namespace mablab
