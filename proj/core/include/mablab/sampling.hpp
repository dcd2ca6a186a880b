#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mablab/history.hpp"
#include "mablab/table.hpp"

namespace mablab {

namespace sampling {

/// Pull arms 1, 2, ..., K, 1, 2, ... regardless of data.
struct RoundRobin {};
/// Nonadaptive: every arm with probability 1/K.
struct UniformRandom {};
struct Greedy {};
struct EpsGreedy {
  double epsilon = 0.1;
};
/// Index mu_hat + sqrt(2 log(1/delta) / N).
struct Ucb {
  double delta = 0.1;
};
struct LilUcb {
  double epsilon = 0.01;
  double beta = 1.0;
  double delta = 0.005;
  double sigma = 1.0;
};
/// Gaussian arms with known noise sd and independent N(mu_{k,0}, prior_sd^2)
/// priors. Empty prior_means means a zero prior mean for every arm.
struct ThompsonGaussian {
  std::vector<double> prior_means;
  double prior_sd = 1.0;
  double noise_sd = 1.0;
};
/// Bernoulli arms with Beta(n0, m0) priors, integer parameters.
struct ThompsonBetaBernoulli {
  unsigned prior_successes = 1;
  unsigned prior_failures = 1;
};
/// Pulls the arm with the smallest sample mean. Pessimistic by
/// construction; exists so the monotonicity certifier has something to reject.
struct ArgminMean {};

}  // namespace sampling

struct SamplingRuleSpec {
  using Rule = std::variant<sampling::RoundRobin, sampling::UniformRandom, sampling::Greedy,
                            sampling::EpsGreedy, sampling::Ucb, sampling::LilUcb,
                            sampling::ThompsonGaussian, sampling::ThompsonBetaBernoulli,
                            sampling::ArgminMean>;

  Rule rule;
  /// Pull each arm once, in index order, before the adaptive phase.
  bool warmup = true;
};

/// A piece of the partition of (0,1) that maps W_{t-1} to an arm.
struct Segment {
  std::size_t arm;
  double width;
};

/// nu_t together with the layout used to turn W_{t-1} into A_t. The widths
/// of each arm's segments add up to its probability.
struct SamplingDecision {
  std::vector<double> probabilities;
  std::vector<Segment> layout;
};

/// Throws ConfigError naming the bad parameter.
void validate(const SamplingRuleSpec& spec, std::size_t num_arms);
std::string rule_name(const SamplingRuleSpec& spec);
bool is_adaptive(const SamplingRuleSpec& spec);

/// nu_t(. | D_{t-1}) for step t = history.time() + 1. Auxiliary uniforms are
/// read from `seeds` at time t - 1, slot kSamplingSlotBase and up.
void sampling_decision(const SamplingRuleSpec& spec, const History& history,
                       const SeedStream& seeds, SamplingDecision& out);

std::vector<double> sampling_probabilities(const SamplingRuleSpec& spec, const History& history,
                                           const SeedStream& seeds);

/// The arm whose segment contains w. Throws ConsistencyError when the
/// probabilities do not sum to 1 within 1e-12.
std::size_t select_arm(const SamplingDecision& decision, double w);

double ucb_bonus(double delta, std::size_t n);
/// u^lil(n); the inner logarithm's argument is clamped to at least e.
double lil_ucb_bonus(const sampling::LilUcb& params, std::size_t n);

/// First index of the maximum. Ties go to the lowest index.
std::size_t argmax_lowest(std::span<const double> scores);

// Conjugate posterior sampling for one-dimensional exponential families,
// p_eta(x) = exp(eta T(x) - A(eta)), prior ∝ exp(tau eta - n0 A(eta)).

struct ExpFamilyPrior {
  double tau = 0.0;
  double n0 = 0.0;
};

/// Gaussian data with known sd, parameterised so that eta is the mean and
/// T(x) = x / sd^2.
struct GaussianConjugate {
  double noise_sd = 1.0;
};
/// Bernoulli data, eta = logit(p), T(x) = x.
struct BetaConjugate {};
/// Any other family: F^{-1}(u | tau, n) in eta, and the map eta -> mean.
struct CustomConjugate {
  std::function<double(double u, double tau, double n)> inverse_posterior_cdf;
  std::function<double(double eta)> mean_of;
};

using ConjugateFamily = std::variant<GaussianConjugate, BetaConjugate, CustomConjugate>;

struct PosteriorDraw {
  double eta;
  double mean;
};

/// N(mu0, sd0^2) prior on the mean of N(., noise_sd^2) data.
ExpFamilyPrior gaussian_prior(double mu0, double prior_sd, double noise_sd);
/// Beta(a, b) prior.
ExpFamilyPrior beta_prior(double a, double b);

/// eta = F^{-1}(u | tau + S^T, n0 + N). `suff_stat_sum` is S^T = sum T(Y).
/// Throws UnsupportedFamilyError for a CustomConjugate without an inverse.
PosteriorDraw posterior_sample_expfamily(const ConjugateFamily& family, ExpFamilyPrior prior,
                                         double suff_stat_sum, double count, double u);

}  // namespace mablab
