#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mablab/counterfactual.hpp"

namespace mablab {

/// A rule with a declared optimism class, packaged with a concrete
/// environment so it can be swept.
struct RuleSet {
  std::string name;
  std::string description;
  StrategySpec strategy;
  std::vector<ArmSpec> arms;
  std::size_t cap;
  Clause clause;
  bool lemma_probe = false;
  /// The rule is expected to break the clause (the pessimistic fixture).
  bool expect_rejection = false;
};

std::vector<RuleSet> certification_rule_sets();

/// Throws ConfigError for an unknown name.
RuleSet find_rule_set(const std::string& name);

struct SweepOutcome {
  std::size_t index;
  std::uint64_t seed;
  std::uint64_t row;
  std::size_t arm;
  std::vector<double> grid;
  MonotonicityVerdict verdict;
  std::optional<LemmaProbe> probe;

  bool inconclusive() const;
  bool passed() const;
};

struct CertificationReport {
  std::string rule_set;
  Clause clause;
  bool expect_rejection;
  std::vector<SweepOutcome> sweeps;

  std::size_t passed() const;
  std::size_t failed() const;
  std::size_t inconclusive() const;
  /// First failing sweep carrying a witness.
  const SweepOutcome* rejection() const;
  /// Every sweep conclusive and passing, or, for a pessimistic fixture, at
  /// least one sweep rejected with a witness.
  bool meets_expectation() const;
};

/// Sweep r uses the seed derive_seed(master_seed, r, 1). Results are in
/// sweep order whatever the thread count.
CertificationReport certify(const RuleSet& rule_set, std::size_t sweeps,
                            std::uint64_t master_seed, unsigned threads = 1);

/// One row per sweep.
void write_verdict_csv(std::ostream& out, const CertificationReport& report);

}  // namespace mablab
