#include "mablab/counterfactual.hpp"

#include <algorithm>
#include <cmath>

#include "mablab/errors.hpp"
#include "mablab/philox.hpp"

namespace mablab {
namespace {

std::vector<std::size_t> prefix_counts(const History& history, std::size_t arm) {
  std::vector<std::size_t> counts(history.time() + 1, 0);
  for (std::size_t t = 1; t <= history.time(); ++t) {
    counts[t] = counts[t - 1] + (history.actions()[t - 1] == arm ? 1 : 0);
  }
  return counts;
}

double clause_quantity(const Trace& trace, std::size_t arm, Clause clause) {
  switch (clause) {
    case Clause::kStoppingTime:
      return static_cast<double>(*trace.stop_time);
    case Clause::kChoosingIndicator:
      return trace.chosen == arm ? 1.0 : 0.0;
    case Clause::kStrategyRatio:
      return trace.chosen == arm ? 1.0 / static_cast<double>(trace.history.count(arm)) : 0.0;
    case Clause::kSamplingCount:
      break;
  }
  throw DomainError("sampling clause is evaluated per time step");
}

// Tracks which directions the adjacent comparisons have shown, and keeps
// the first comparison that goes against the optimistic direction.
struct DirectionTally {
  bool increase = false;
  bool decrease = false;
  std::optional<Witness> witness;

  void observe(Direction optimistic, const ReplayPoint& lo, const ReplayPoint& hi, double q_lo,
               double q_hi, std::optional<std::size_t> time) {
    if (q_hi > q_lo) {
      increase = true;
    } else if (q_hi < q_lo) {
      decrease = true;
    } else {
      return;
    }
    const bool against = optimistic == Direction::kNonDecreasing ? q_hi < q_lo : q_hi > q_lo;
    if (against && !witness) {
      witness = Witness{lo.value, hi.value, q_lo, q_hi, time};
    }
  }

  Direction direction() const {
    if (increase && decrease) return Direction::kViolated;
    if (increase) return Direction::kNonDecreasing;
    if (decrease) return Direction::kNonIncreasing;
    return Direction::kConstant;
  }
};

}  // namespace

void validate(const PerturbationSweep& sweep) {
  if (sweep.arm >= sweep.arms.size()) {
    throw DomainError("sweep arm out of range");
  }
  if (sweep.row == 0) {
    throw DomainError("sweep row is 1-based");
  }
  if (sweep.grid.size() < 2) {
    throw DomainError("sweep grid needs at least two values");
  }
  for (std::size_t i = 1; i < sweep.grid.size(); ++i) {
    if (!(sweep.grid[i] > sweep.grid[i - 1])) {
      throw DomainError("sweep grid must be strictly increasing");
    }
  }
  const ArmSpec& arm = sweep.arms[sweep.arm];
  if (arm.bounded() &&
      (sweep.grid.front() < arm.support_lo() || sweep.grid.back() > arm.support_hi())) {
    throw DomainError("sweep grid leaves the support of a bounded arm");
  }
}

std::vector<ReplayPoint> replay_with_perturbation(const PerturbationSweep& sweep) {
  if (sweep.grid.empty()) {
    throw DomainError("replay needs at least one grid value");
  }
  const CounterfactualTable base(sweep.seed, sweep.arms);
  const SeedStream seeds(sweep.seed);
  std::vector<ReplayPoint> points;
  points.reserve(sweep.grid.size());
  for (double value : sweep.grid) {
    const auto table = base.with_override(sweep.row, sweep.arm, value);
    points.push_back({value, run_strategy(sweep.strategy, table, seeds, sweep.cap)});
  }
  return points;
}

std::string to_string(Clause clause) {
  switch (clause) {
    case Clause::kSamplingCount: return "sampling-count";
    case Clause::kStoppingTime: return "stopping-time";
    case Clause::kChoosingIndicator: return "choosing-indicator";
    case Clause::kStrategyRatio: return "strategy-ratio";
  }
  return "unknown";
}

std::string to_string(Direction direction) {
  switch (direction) {
    case Direction::kConstant: return "constant";
    case Direction::kNonDecreasing: return "non-decreasing";
    case Direction::kNonIncreasing: return "non-increasing";
    case Direction::kViolated: return "violated";
    case Direction::kInconclusive: return "inconclusive";
  }
  return "unknown";
}

Direction optimistic_direction(Clause clause) {
  return clause == Clause::kStoppingTime ? Direction::kNonIncreasing : Direction::kNonDecreasing;
}

bool satisfies(Direction found, Direction required) {
  return found == Direction::kConstant || found == required;
}

MonotonicityVerdict monotonicity_verdict(const PerturbationSweep& sweep, Clause clause) {
  validate(sweep);
  const auto points = replay_with_perturbation(sweep);
  return monotonicity_verdict(points, sweep.arm, clause);
}

MonotonicityVerdict monotonicity_verdict(std::span<const ReplayPoint> points, std::size_t arm,
                                         Clause clause) {
  MonotonicityVerdict verdict{clause, Direction::kInconclusive, std::nullopt};
  if (std::any_of(points.begin(), points.end(),
                  [](const ReplayPoint& p) { return p.trace.censored(); })) {
    return verdict;
  }
  const Direction optimistic = optimistic_direction(clause);
  DirectionTally tally;

  if (clause == Clause::kSamplingCount) {
    std::vector<std::vector<std::size_t>> counts;
    std::size_t horizon = std::numeric_limits<std::size_t>::max();
    for (const ReplayPoint& p : points) {
      counts.push_back(prefix_counts(p.trace.history, arm));
      horizon = std::min(horizon, p.trace.history.time());
    }
    for (std::size_t t = 1; t <= horizon; ++t) {
      for (std::size_t g = 1; g < points.size(); ++g) {
        tally.observe(optimistic, points[g - 1], points[g], static_cast<double>(counts[g - 1][t]),
                      static_cast<double>(counts[g][t]), t);
      }
    }
  } else {
    for (std::size_t g = 1; g < points.size(); ++g) {
      tally.observe(optimistic, points[g - 1], points[g],
                    clause_quantity(points[g - 1].trace, arm, clause),
                    clause_quantity(points[g].trace, arm, clause), std::nullopt);
    }
  }
  verdict.direction = tally.direction();
  verdict.witness = tally.witness;
  return verdict;
}

LemmaProbe lil_ucb_lemma_probe(const PerturbationSweep& sweep) {
  const auto points = replay_with_perturbation(sweep);
  return lil_ucb_lemma_probe(points, sweep.arm);
}

LemmaProbe lil_ucb_lemma_probe(std::span<const ReplayPoint> points, std::size_t arm) {
  LemmaProbe probe;
  for (const ReplayPoint& p : points) {
    if (p.trace.censored()) {
      probe.inconclusive = true;
      return probe;
    }
  }
  for (std::size_t g = 1; g < points.size(); ++g) {
    const bool ascending = points[g - 1].value <= points[g].value;
    const Trace& low = ascending ? points[g - 1].trace : points[g].trace;
    const Trace& high = ascending ? points[g].trace : points[g - 1].trace;
    ++probe.pairs_checked;
    if (low.chosen != arm) {
      continue;
    }
    probe.stop_not_later = probe.stop_not_later && *high.stop_time <= *low.stop_time;
    probe.choice_preserved = probe.choice_preserved && high.chosen == arm;
    if (high.chosen == arm) {
      probe.count_not_larger =
          probe.count_not_larger && high.history.count(arm) <= low.history.count(arm);
    }
  }
  return probe;
}

std::vector<double> quantile_grid(const ArmSpec& arm, double base_value) {
  std::vector<double> grid{base_value};
  for (double q : {0.05, 0.25, 0.5, 0.75, 0.95}) {
    grid.push_back(inverse_cdf(arm, q));
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

PerturbationSweep random_sweep(const StrategySpec& strategy, const std::vector<ArmSpec>& arms,
                               std::size_t cap, std::uint64_t sweep_seed) {
  PerturbationSweep sweep{strategy, arms, derive_seed(sweep_seed, 0), cap, 1, 0, {}};
  const CounterfactualTable table(sweep.seed, arms);
  const Trace base = run_strategy(strategy, table, SeedStream(sweep.seed), cap);
  const std::size_t length = base.history.time();
  if (length == 0) {
    throw DomainError("base run visited no cells");
  }
  const double u = keyed_uniform(sweep_seed, KeyDomain::kSweep, 0, 0, 0);
  const std::size_t t = std::min(length, static_cast<std::size_t>(u * static_cast<double>(length)) + 1);
  sweep.arm = base.history.actions()[t - 1];
  sweep.row = base.history.count_at(sweep.arm, t);
  sweep.grid = quantile_grid(arms[sweep.arm], table.cell(sweep.row, sweep.arm));
  return sweep;
}

}  // namespace mablab
