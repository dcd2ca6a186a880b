#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "mablab/distributions.hpp"

namespace mablab {

/// The counterfactual N x K table of arm draws X*_{i,k}.
///
/// Cells are never stored: cell(i, k) is inverse_cdf(arms[k], U) with U keyed
/// by (master_seed, i, k). Rows are 1-based (row i is the i-th pull of the
/// arm), arms are 0-based. Copies are cheap; overrides are per instance.
class CounterfactualTable {
 public:
  CounterfactualTable(std::uint64_t master_seed, std::vector<ArmSpec> arms);

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::size_t num_arms() const noexcept { return arms_->size(); }
  const ArmSpec& arm(std::size_t k) const;
  std::span<const ArmSpec> arms() const noexcept { return *arms_; }

  /// Throws DomainError when k >= K or row is 0 or beyond 2^32 - 1.
  double cell(std::uint64_t row, std::size_t k) const;

  /// The keyed uniform behind a non-overridden cell.
  double cell_uniform(std::uint64_t row, std::size_t k) const;

  /// Copy of this table with cell(row, k) pinned to `value`.
  [[nodiscard]] CounterfactualTable with_override(std::uint64_t row, std::size_t k,
                                                  double value) const;

  bool overridden(std::uint64_t row, std::size_t k) const;
  std::size_t override_count() const noexcept { return overrides_.size(); }

 private:
  void check_cell(std::uint64_t row, std::size_t k) const;

  std::uint64_t master_seed_;
  std::shared_ptr<const std::vector<ArmSpec>> arms_;
  std::map<std::pair<std::uint64_t, std::size_t>, double> overrides_;
};

/// Seed stream W_0, W_1, ... plus auxiliary uniforms for randomized rules.
///
/// uniform(t, 0) is W_t, the multinomial seed consumed at step t + 1. Slots
/// >= 1 feed Thompson draws and randomized choosing; `sub` indexes several
/// uniforms within one slot. Independent of every table cell.
class SeedStream {
 public:
  static constexpr std::uint32_t kSelectionSlot = 0;
  static constexpr std::uint32_t kChoosingSlot = 1;
  static constexpr std::uint32_t kSamplingSlotBase = 2;

  explicit SeedStream(std::uint64_t master_seed) noexcept : master_seed_(master_seed) {}

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  double uniform(std::uint64_t t, std::uint32_t slot, std::uint32_t sub = 0) const;

 private:
  std::uint64_t master_seed_;
};

}  // namespace mablab
