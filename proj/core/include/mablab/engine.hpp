#pragma once

#include <cstddef>

#include "mablab/choosing.hpp"
#include "mablab/history.hpp"
#include "mablab/sampling.hpp"
#include "mablab/stopping.hpp"
#include "mablab/table.hpp"

namespace mablab {

/// A data-collecting strategy: how to sample, when to stop, what to report.
struct StrategySpec {
  SamplingRuleSpec sampling;
  StoppingRuleSpec stopping;
  ChoosingRuleSpec choosing;
};

/// Throws ConfigError if any rule is invalid for K arms.
void validate(const StrategySpec& strategy, std::size_t num_arms);

/// Runs the protocol: at step t compute nu_t from D_{t-1}, pick A_t with
/// W_{t-1} = seeds.uniform(t - 1, 0), read Y_t = table.cell(N_{A_t}(t), A_t),
/// then ask the stopping rule. Stops at the first t where the rule fires;
/// if that has not happened after `cap` steps the trace is censored.
///
/// Pure: the trace depends only on (strategy, table, seeds, cap).
Trace run_strategy(const StrategySpec& strategy, const CounterfactualTable& table,
                   const SeedStream& seeds, std::size_t cap);

}  // namespace mablab
