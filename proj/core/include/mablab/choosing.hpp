#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "mablab/history.hpp"
#include "mablab/table.hpp"

namespace mablab {

namespace choosing {

struct FixedArm {
  std::size_t arm = 0;
};
struct ArgmaxMean {};
/// Report the arm ranked r-th by sample mean with probability weights[r-1].
/// Weights must be non-increasing and sum to one.
struct RankProbability {
  std::vector<double> weights;
};
struct ArgmaxCount {};
/// Arm with the largest most-recent observation.
struct ArgmaxLastObservation {};

}  // namespace choosing

struct ChoosingRuleSpec {
  using Rule = std::variant<choosing::FixedArm, choosing::ArgmaxMean, choosing::RankProbability,
                            choosing::ArgmaxCount, choosing::ArgmaxLastObservation>;
  Rule rule;
};

void validate(const ChoosingRuleSpec& spec, std::size_t num_arms);
std::string rule_name(const ChoosingRuleSpec& spec);

/// kappa from the stopped history. Randomized rules read the choosing slot
/// of `seeds` at t = history.time(). Mean-based rules throw
/// UndefinedMeanError when some arm was never pulled.
std::size_t choose(const ChoosingRuleSpec& spec, const History& history, const SeedStream& seeds);

/// Arms ordered by sample mean, largest first; ties keep index order.
std::vector<std::size_t> rank_by_mean(const History& history);

}  // namespace mablab
