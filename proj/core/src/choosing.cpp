#include "mablab/choosing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mablab/detail/overloaded.hpp"
#include "mablab/errors.hpp"
#include "mablab/sampling.hpp"

namespace mablab {
namespace {

using detail::Overloaded;

void require(bool ok, const std::string& path, const std::string& message) {
  if (!ok) {
    throw ConfigError(path, message);
  }
}

std::vector<double> means_of(const History& history) {
  std::vector<double> means(history.num_arms());
  for (std::size_t k = 0; k < means.size(); ++k) {
    means[k] = history.sample_mean(k);
  }
  return means;
}

// The rank distribution p is written as a mixture over m of "uniform over the
// top m arms" with weight m (p_m - p_{m+1}). One uniform picks m; per-arm
// keys then pick inside the top m. Raising an arm's mean can only keep it in
// the top m, so a chosen arm stays chosen.
std::size_t choose_by_rank(const choosing::RankProbability& rule, const History& history,
                           const SeedStream& seeds) {
  const auto ranking = rank_by_mean(history);
  const std::size_t num_arms = ranking.size();
  const std::uint64_t t = history.time();
  const double u = seeds.uniform(t, SeedStream::kChoosingSlot, 0);

  std::size_t top = num_arms;
  double upper = 0.0;
  for (std::size_t m = 1; m <= num_arms; ++m) {
    const double next = m < num_arms ? rule.weights[m] : 0.0;
    const double mass = static_cast<double>(m) * (rule.weights[m - 1] - next);
    if (mass <= 0.0) {
      continue;
    }
    upper += mass;
    top = m;
    if (u < upper) {
      break;
    }
  }

  std::size_t best = ranking[0];
  double best_key = -1.0;
  for (std::size_t r = 0; r < top; ++r) {
    const std::size_t arm = ranking[r];
    const double key = seeds.uniform(t, SeedStream::kChoosingSlot, 1 + static_cast<std::uint32_t>(arm));
    if (key > best_key) {
      best_key = key;
      best = arm;
    }
  }
  return best;
}

}  // namespace

void validate(const ChoosingRuleSpec& spec, std::size_t num_arms) {
  std::visit(Overloaded{
                 [&](const choosing::FixedArm& r) {
                   require(r.arm < num_arms, "choosing.arm", "refers to an arm beyond K");
                 },
                 [](const choosing::ArgmaxMean&) {},
                 [&](const choosing::RankProbability& r) {
                   require(r.weights.size() == num_arms, "choosing.weights",
                           "needs one weight per arm");
                   double total = 0.0;
                   for (std::size_t i = 0; i < r.weights.size(); ++i) {
                     require(r.weights[i] >= 0.0, "choosing.weights", "must be non-negative");
                     require(i == 0 || r.weights[i] <= r.weights[i - 1], "choosing.weights",
                             "must be non-increasing");
                     total += r.weights[i];
                   }
                   require(std::fabs(total - 1.0) <= 1e-12, "choosing.weights", "must sum to 1");
                 },
                 [](const choosing::ArgmaxCount&) {},
                 [](const choosing::ArgmaxLastObservation&) {},
             },
             spec.rule);
}

std::string rule_name(const ChoosingRuleSpec& spec) {
  return std::visit(Overloaded{
                        [](const choosing::FixedArm&) { return "fixed-arm"; },
                        [](const choosing::ArgmaxMean&) { return "argmax-mean"; },
                        [](const choosing::RankProbability&) { return "rank-probability"; },
                        [](const choosing::ArgmaxCount&) { return "argmax-count"; },
                        [](const choosing::ArgmaxLastObservation&) {
                          return "argmax-last-observation";
                        },
                    },
                    spec.rule);
}

std::vector<std::size_t> rank_by_mean(const History& history) {
  const auto means = means_of(history);
  std::vector<std::size_t> order(means.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return means[a] > means[b]; });
  return order;
}

std::size_t choose(const ChoosingRuleSpec& spec, const History& history, const SeedStream& seeds) {
  return std::visit(
      Overloaded{
          [](const choosing::FixedArm& r) { return r.arm; },
          [&](const choosing::ArgmaxMean&) { return argmax_lowest(means_of(history)); },
          [&](const choosing::RankProbability& r) { return choose_by_rank(r, history, seeds); },
          [&](const choosing::ArgmaxCount&) {
            std::vector<double> counts(history.counts().begin(), history.counts().end());
            return argmax_lowest(counts);
          },
          [&](const choosing::ArgmaxLastObservation&) {
            std::vector<double> last(history.num_arms());
            for (std::size_t k = 0; k < last.size(); ++k) {
              const auto obs = history.last_observation(k);
              if (!obs) {
                throw UndefinedMeanError("arm " + std::to_string(k + 1) + " has no observations");
              }
              last[k] = *obs;
            }
            return argmax_lowest(last);
          },
      },
      spec.rule);
}

}  // namespace mablab
