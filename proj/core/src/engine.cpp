#include "mablab/engine.hpp"

#include "mablab/errors.hpp"

namespace mablab {

void validate(const StrategySpec& strategy, std::size_t num_arms) {
  if (num_arms == 0) {
    throw ConfigError("arms", "at least one arm is required");
  }
  validate(strategy.sampling, num_arms);
  validate(strategy.stopping, num_arms);
  validate(strategy.choosing, num_arms);
}

Trace run_strategy(const StrategySpec& strategy, const CounterfactualTable& table,
                   const SeedStream& seeds, std::size_t cap) {
  if (cap == 0) {
    throw DomainError("run_strategy: cap must be >= 1");
  }
  const std::size_t num_arms = table.num_arms();
  Trace trace{History(num_arms), std::nullopt, std::nullopt};
  History& history = trace.history;
  SamplingDecision decision;

  for (std::size_t t = 1; t <= cap; ++t) {
    sampling_decision(strategy.sampling, history, seeds, decision);
    const std::size_t arm =
        select_arm(decision, seeds.uniform(t - 1, SeedStream::kSelectionSlot));
    history.record(arm, table.cell(history.count(arm) + 1, arm));
    if (should_stop(strategy.stopping, history)) {
      trace.stop_time = t;
      trace.chosen = choose(strategy.choosing, history, seeds);
      break;
    }
  }
  return trace;
}

}  // namespace mablab
