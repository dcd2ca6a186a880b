#include "mablab/table.hpp"

#include <limits>
#include <string>

#include "mablab/errors.hpp"
#include "mablab/philox.hpp"

namespace mablab {
namespace {
constexpr std::uint64_t kMaxIndex = std::numeric_limits<std::uint32_t>::max();
}

CounterfactualTable::CounterfactualTable(std::uint64_t master_seed, std::vector<ArmSpec> arms)
    : master_seed_(master_seed),
      arms_(std::make_shared<const std::vector<ArmSpec>>(std::move(arms))) {
  if (arms_->empty()) {
    throw DomainError("counterfactual table needs at least one arm");
  }
}

const ArmSpec& CounterfactualTable::arm(std::size_t k) const {
  if (k >= arms_->size()) {
    throw DomainError("arm index " + std::to_string(k) + " out of range");
  }
  return (*arms_)[k];
}

void CounterfactualTable::check_cell(std::uint64_t row, std::size_t k) const {
  if (k >= arms_->size()) {
    throw DomainError("arm index " + std::to_string(k) + " out of range");
  }
  if (row == 0 || row > kMaxIndex) {
    throw DomainError("table row " + std::to_string(row) + " out of range");
  }
}

double CounterfactualTable::cell_uniform(std::uint64_t row, std::size_t k) const {
  check_cell(row, k);
  return keyed_uniform(master_seed_, KeyDomain::kTableCell, static_cast<std::uint32_t>(row),
                       static_cast<std::uint32_t>(k), 0);
}

double CounterfactualTable::cell(std::uint64_t row, std::size_t k) const {
  check_cell(row, k);
  if (!overrides_.empty()) {
    if (auto it = overrides_.find({row, k}); it != overrides_.end()) {
      return it->second;
    }
  }
  return inverse_cdf((*arms_)[k], keyed_uniform(master_seed_, KeyDomain::kTableCell,
                                                static_cast<std::uint32_t>(row),
                                                static_cast<std::uint32_t>(k), 0));
}

CounterfactualTable CounterfactualTable::with_override(std::uint64_t row, std::size_t k,
                                                       double value) const {
  check_cell(row, k);
  CounterfactualTable copy = *this;
  copy.overrides_[{row, k}] = value;
  return copy;
}

bool CounterfactualTable::overridden(std::uint64_t row, std::size_t k) const {
  return overrides_.contains({row, k});
}

double SeedStream::uniform(std::uint64_t t, std::uint32_t slot, std::uint32_t sub) const {
  if (t > kMaxIndex) {
    throw DomainError("seed stream time " + std::to_string(t) + " out of range");
  }
  return keyed_uniform(master_seed_, KeyDomain::kSeedStream, static_cast<std::uint32_t>(t), slot,
                       sub);
}

}  // namespace mablab
