#include "mablab/sampling.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "mablab/detail/overloaded.hpp"
#include "mablab/distributions.hpp"
#include "mablab/errors.hpp"

namespace mablab {
namespace {

using detail::Overloaded;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSumTolerance = 1e-12;

void one_hot(std::size_t num_arms, std::size_t arm, SamplingDecision& out) {
  out.probabilities.assign(num_arms, 0.0);
  out.probabilities[arm] = 1.0;
  out.layout.assign(1, Segment{arm, 1.0});
}

void cumulative_layout(SamplingDecision& out) {
  out.layout.clear();
  for (std::size_t k = 0; k < out.probabilities.size(); ++k) {
    if (out.probabilities[k] > 0.0) {
      out.layout.push_back(Segment{k, out.probabilities[k]});
    }
  }
}

// Index scores for the argmax rules; unsampled arms score +inf so they are
// explored first when warmup is off.
template <class Bonus>
std::vector<double> index_scores(const History& history, Bonus bonus) {
  std::vector<double> scores(history.num_arms());
  for (std::size_t k = 0; k < scores.size(); ++k) {
    const std::size_t n = history.count(k);
    scores[k] = n == 0 ? kInf : history.sum(k) / static_cast<double>(n) + bonus(n);
  }
  return scores;
}

std::size_t successes(const History& history, std::size_t arm) {
  const double s = history.sum(arm);
  const double rounded = std::round(s);
  if (std::fabs(s - rounded) > 1e-9 || rounded < 0.0) {
    throw DomainError("Beta-Bernoulli Thompson sampling needs 0/1 rewards");
  }
  return static_cast<std::size_t>(rounded);
}

double neg_log_sum(const SeedStream& seeds, std::uint64_t t, std::uint32_t slot,
                   std::size_t terms) {
  double total = 0.0;
  for (std::size_t i = 0; i < terms; ++i) {
    total -= std::log(seeds.uniform(t, slot, static_cast<std::uint32_t>(i)));
  }
  return total;
}

void require(bool ok, const std::string& path, const std::string& message) {
  if (!ok) {
    throw ConfigError(path, message);
  }
}

}  // namespace

void validate(const SamplingRuleSpec& spec, std::size_t num_arms) {
  std::visit(
      Overloaded{
          [](const sampling::RoundRobin&) {},
          [](const sampling::UniformRandom&) {},
          [](const sampling::Greedy&) {},
          [](const sampling::ArgminMean&) {},
          [](const sampling::EpsGreedy& r) {
            require(r.epsilon >= 0.0 && r.epsilon <= 1.0, "sampling.epsilon", "must lie in [0,1]");
          },
          [](const sampling::Ucb& r) {
            require(r.delta > 0.0 && r.delta < 1.0, "sampling.delta", "must lie in (0,1)");
          },
          [](const sampling::LilUcb& r) {
            require(r.epsilon > 0.0, "sampling.epsilon", "must be > 0");
            require(r.beta > 0.0, "sampling.beta", "must be > 0");
            require(r.delta > 0.0 && r.delta < 1.0, "sampling.delta", "must lie in (0,1)");
            require(r.sigma > 0.0, "sampling.sigma", "must be > 0");
          },
          [num_arms](const sampling::ThompsonGaussian& r) {
            require(r.prior_sd > 0.0, "sampling.prior_sd", "must be > 0");
            require(r.noise_sd > 0.0, "sampling.noise_sd", "must be > 0");
            require(r.prior_means.empty() || r.prior_means.size() == num_arms,
                    "sampling.prior_means", "needs one entry per arm");
          },
          [](const sampling::ThompsonBetaBernoulli&) {},
      },
      spec.rule);
}

std::string rule_name(const SamplingRuleSpec& spec) {
  return std::visit(Overloaded{
                        [](const sampling::RoundRobin&) { return "round-robin"; },
                        [](const sampling::UniformRandom&) { return "uniform-random"; },
                        [](const sampling::Greedy&) { return "greedy"; },
                        [](const sampling::EpsGreedy&) { return "eps-greedy"; },
                        [](const sampling::Ucb&) { return "ucb"; },
                        [](const sampling::LilUcb&) { return "lil-ucb"; },
                        [](const sampling::ThompsonGaussian&) { return "thompson-gaussian"; },
                        [](const sampling::ThompsonBetaBernoulli&) { return "thompson-beta"; },
                        [](const sampling::ArgminMean&) { return "argmin-mean"; },
                    },
                    spec.rule);
}

bool is_adaptive(const SamplingRuleSpec& spec) {
  return !std::holds_alternative<sampling::RoundRobin>(spec.rule) &&
         !std::holds_alternative<sampling::UniformRandom>(spec.rule);
}

double ucb_bonus(double delta, std::size_t n) {
  return std::sqrt(2.0 * std::log(1.0 / delta) / static_cast<double>(n));
}

double lil_ucb_bonus(const sampling::LilUcb& p, std::size_t n) {
  const double nn = static_cast<double>(n);
  const double inner = std::max((1.0 + p.epsilon) * nn, std::numbers::e);
  return (1.0 + p.beta) * (1.0 + std::sqrt(p.epsilon)) *
         std::sqrt(2.0 * p.sigma * p.sigma * (1.0 + p.epsilon) * std::log(std::log(inner) / p.delta) /
                   nn);
}

std::size_t argmax_lowest(std::span<const double> scores) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < scores.size(); ++k) {
    if (scores[k] > scores[best]) {
      best = k;
    }
  }
  return best;
}

void sampling_decision(const SamplingRuleSpec& spec, const History& history,
                       const SeedStream& seeds, SamplingDecision& out) {
  const std::size_t num_arms = history.num_arms();
  const std::size_t t = history.time() + 1;
  const std::uint64_t aux_time = t - 1;

  if (spec.warmup && is_adaptive(spec) && t <= num_arms) {
    one_hot(num_arms, t - 1, out);
    return;
  }

  std::visit(
      Overloaded{
          [&](const sampling::RoundRobin&) { one_hot(num_arms, (t - 1) % num_arms, out); },
          [&](const sampling::UniformRandom&) {
            out.probabilities.assign(num_arms, 1.0 / static_cast<double>(num_arms));
            cumulative_layout(out);
          },
          [&](const sampling::Greedy&) {
            const auto scores = index_scores(history, [](std::size_t) { return 0.0; });
            one_hot(num_arms, argmax_lowest(scores), out);
          },
          [&](const sampling::ArgminMean&) {
            auto scores = index_scores(history, [](std::size_t) { return 0.0; });
            for (double& s : scores) {
              s = -s;
            }
            one_hot(num_arms, argmax_lowest(scores), out);
          },
          [&](const sampling::EpsGreedy& r) {
            const auto scores = index_scores(history, [](std::size_t) { return 0.0; });
            const std::size_t best = argmax_lowest(scores);
            if (num_arms == 1) {
              one_hot(num_arms, 0, out);
              return;
            }
            const double explore = r.epsilon / static_cast<double>(num_arms - 1);
            out.probabilities.assign(num_arms, explore);
            out.probabilities[best] = 1.0 - r.epsilon;
            const double pooled = 1.0 - static_cast<double>(num_arms) * explore;
            if (pooled < 0.0) {
              cumulative_layout(out);
              return;
            }
            // One exploration segment per arm in index order, then the pooled
            // exploitation segment. A change of argmax only reassigns the pool.
            out.layout.clear();
            for (std::size_t k = 0; k < num_arms; ++k) {
              if (explore > 0.0) {
                out.layout.push_back(Segment{k, explore});
              }
            }
            if (pooled > 0.0) {
              out.layout.push_back(Segment{best, pooled});
            }
          },
          [&](const sampling::Ucb& r) {
            const auto scores =
                index_scores(history, [&](std::size_t n) { return ucb_bonus(r.delta, n); });
            one_hot(num_arms, argmax_lowest(scores), out);
          },
          [&](const sampling::LilUcb& r) {
            const auto scores =
                index_scores(history, [&](std::size_t n) { return lil_ucb_bonus(r, n); });
            one_hot(num_arms, argmax_lowest(scores), out);
          },
          [&](const sampling::ThompsonGaussian& r) {
            const double prior_precision = 1.0 / (r.prior_sd * r.prior_sd);
            const double noise_var = r.noise_sd * r.noise_sd;
            std::vector<double> draws(num_arms);
            for (std::size_t j = 0; j < num_arms; ++j) {
              const double prior_mean = r.prior_means.empty() ? 0.0 : r.prior_means[j];
              const double n = static_cast<double>(history.count(j));
              const double precision = prior_precision + n / noise_var;
              const double post_mean =
                  (prior_mean * prior_precision + history.sum(j) / noise_var) / precision;
              const double post_sd = 1.0 / std::sqrt(precision);
              const double z = normal_quantile(seeds.uniform(
                  aux_time, SeedStream::kSamplingSlotBase + static_cast<std::uint32_t>(j)));
              draws[j] = post_mean + post_sd * z;
            }
            one_hot(num_arms, argmax_lowest(draws), out);
          },
          [&](const sampling::ThompsonBetaBernoulli& r) {
            std::vector<double> draws(num_arms);
            for (std::size_t j = 0; j < num_arms; ++j) {
              const std::size_t s = successes(history, j);
              const std::size_t n = history.count(j);
              const auto slot = SeedStream::kSamplingSlotBase + 2 * static_cast<std::uint32_t>(j);
              const double a = neg_log_sum(seeds, aux_time, slot, r.prior_successes + s);
              const double b = neg_log_sum(seeds, aux_time, slot + 1, r.prior_failures + (n - s));
              draws[j] = a + b > 0.0 ? a / (a + b) : 0.5;
            }
            one_hot(num_arms, argmax_lowest(draws), out);
          },
      },
      spec.rule);
}

std::vector<double> sampling_probabilities(const SamplingRuleSpec& spec, const History& history,
                                           const SeedStream& seeds) {
  SamplingDecision decision;
  sampling_decision(spec, history, seeds, decision);
  return std::move(decision.probabilities);
}

std::size_t select_arm(const SamplingDecision& decision, double w) {
  double prob_total = 0.0;
  for (double p : decision.probabilities) {
    if (!(p >= 0.0)) {
      throw ConsistencyError("sampling probability is negative or NaN");
    }
    prob_total += p;
  }
  if (std::fabs(prob_total - 1.0) > kSumTolerance) {
    throw ConsistencyError("sampling probabilities sum to " + std::to_string(prob_total));
  }
  if (decision.layout.empty()) {
    throw ConsistencyError("empty selection layout");
  }
  double upper = 0.0;
  for (const Segment& seg : decision.layout) {
    upper += seg.width;
    if (w < upper) {
      return seg.arm;
    }
  }
  // Rounding left w just past the last boundary.
  return decision.layout.back().arm;
}

ExpFamilyPrior gaussian_prior(double mu0, double prior_sd, double noise_sd) {
  if (!(prior_sd > 0.0) || !(noise_sd > 0.0)) {
    throw DomainError("gaussian_prior: standard deviations must be > 0");
  }
  const double prior_var = prior_sd * prior_sd;
  return {mu0 / prior_var, noise_sd * noise_sd / prior_var};
}

ExpFamilyPrior beta_prior(double a, double b) {
  if (!(a >= 0.0) || !(b >= 0.0)) {
    throw DomainError("beta_prior: parameters must be >= 0");
  }
  return {a, a + b};
}

PosteriorDraw posterior_sample_expfamily(const ConjugateFamily& family, ExpFamilyPrior prior,
                                         double suff_stat_sum, double count, double u) {
  if (!(u > 0.0 && u < 1.0)) {
    throw DomainError("posterior_sample_expfamily: u must lie in (0,1)");
  }
  const double tau = prior.tau + suff_stat_sum;
  const double n = prior.n0 + count;
  return std::visit(
      Overloaded{
          [&](const GaussianConjugate& g) -> PosteriorDraw {
            if (!(n > 0.0)) {
              throw DomainError("Gaussian posterior needs n0 + N > 0");
            }
            const double var = g.noise_sd * g.noise_sd;
            const double eta = tau * var / n + g.noise_sd / std::sqrt(n) * normal_quantile(u);
            return {eta, eta};
          },
          [&](const BetaConjugate&) -> PosteriorDraw {
            const double a = tau;
            const double b = n - tau;
            if (!(a > 0.0) || !(b > 0.0)) {
              throw DomainError("Beta posterior needs positive parameters");
            }
            const double p = boost::math::ibeta_inv(a, b, u);
            return {std::log(p) - std::log1p(-p), p};
          },
          [&](const CustomConjugate& c) -> PosteriorDraw {
            if (!c.inverse_posterior_cdf) {
              throw UnsupportedFamilyError("custom family needs an inverse posterior CDF");
            }
            const double eta = c.inverse_posterior_cdf(u, tau, n);
            return {eta, c.mean_of ? c.mean_of(eta) : eta};
          },
      },
      family);
}

}  // namespace mablab
