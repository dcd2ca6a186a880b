#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mablab/distributions.hpp"
#include "mablab/engine.hpp"

namespace mablab {

/// Replay one strategy on a base table while a single cell X*_{row,arm}
/// takes each value of `grid`; everything else, including the seed stream,
/// stays fixed.
struct PerturbationSweep {
  StrategySpec strategy;
  std::vector<ArmSpec> arms;
  /// Seeds both the base table and the seed stream.
  std::uint64_t seed = 0;
  std::size_t cap = 1000;
  /// 1-based row (the row-th pull of the arm).
  std::uint64_t row = 1;
  std::size_t arm = 0;
  std::vector<double> grid;
};

/// Strictly increasing grid of at least two values, inside the support
/// hull of a bounded arm. Throws DomainError otherwise.
void validate(const PerturbationSweep& sweep);

struct ReplayPoint {
  double value;
  Trace trace;
};

/// One trace per grid value, in grid order. Accepts any non-empty grid,
/// repeated or unsorted values included.
std::vector<ReplayPoint> replay_with_perturbation(const PerturbationSweep& sweep);

/// Which monotone quantity is checked.
enum class Clause {
  /// N_k(t) at every fixed t.
  kSamplingCount,
  /// The stopping time.
  kStoppingTime,
  /// 1(kappa = k).
  kChoosingIndicator,
  /// 1(kappa = k) / N_k(T).
  kStrategyRatio,
};

enum class Direction {
  kConstant,
  kNonDecreasing,
  kNonIncreasing,
  kViolated,
  /// Some replay was censored.
  kInconclusive,
};

std::string to_string(Clause clause);
std::string to_string(Direction direction);

/// The direction an optimistic (or monotonically increasing) rule shows
/// for this clause.
Direction optimistic_direction(Clause clause);

/// True when `found` is consistent with `required` (constant always is).
bool satisfies(Direction found, Direction required);

/// Two neighbouring grid values whose replayed quantities break the
/// clause's optimistic direction.
struct Witness {
  double lower_value;
  double upper_value;
  double lower_quantity;
  double upper_quantity;
  /// Time t for the sampling clause.
  std::optional<std::size_t> time;
};

/// Empirical: certified on the finite grid only.
struct MonotonicityVerdict {
  Clause clause;
  Direction direction;
  std::optional<Witness> witness;

  bool passes() const { return satisfies(direction, optimistic_direction(clause)); }
};

MonotonicityVerdict monotonicity_verdict(const PerturbationSweep& sweep, Clause clause);

/// Verdict over replays already computed; `points` must be sorted by value.
MonotonicityVerdict monotonicity_verdict(std::span<const ReplayPoint> points, std::size_t arm,
                                         Clause clause);

/// Step-by-step inequalities behind the lil'UCB monotonicity argument,
/// checked on every neighbouring pair of the grid with the larger cell
/// value playing D*'. Under kappa = k: T' <= T, kappa' = k, and
/// N_k(T) >= N'_k(T'). Pairs with kappa != k hold vacuously.
struct LemmaProbe {
  bool stop_not_later = true;
  bool choice_preserved = true;
  bool count_not_larger = true;
  bool inconclusive = false;
  std::size_t pairs_checked = 0;

  bool all_hold() const { return !inconclusive && stop_not_later && choice_preserved && count_not_larger; }
};

LemmaProbe lil_ucb_lemma_probe(const PerturbationSweep& sweep);
LemmaProbe lil_ucb_lemma_probe(std::span<const ReplayPoint> points, std::size_t arm);

/// Arm quantiles at 0.05, 0.25, 0.5, 0.75, 0.95 plus `base_value`, sorted
/// and de-duplicated.
std::vector<double> quantile_grid(const ArmSpec& arm, double base_value);

/// A randomized sweep: the base seed comes from `sweep_seed`, the cell is
/// drawn uniformly from the cells the base run actually visited, and the
/// grid is quantile_grid around the cell's value.
PerturbationSweep random_sweep(const StrategySpec& strategy, const std::vector<ArmSpec>& arms,
                               std::size_t cap, std::uint64_t sweep_seed);

}  // namespace mablab
