#include "mablab/history.hpp"

#include <algorithm>
#include <string>

#include "mablab/errors.hpp"

namespace mablab {

History::History(std::size_t num_arms)
    : counts_(num_arms, 0), sums_(num_arms, 0.0), last_(num_arms, 0.0) {
  if (num_arms == 0) {
    throw DomainError("history needs at least one arm");
  }
}

double History::sample_mean(std::size_t arm) const {
  const std::size_t n = count(arm);
  if (n == 0) {
    throw UndefinedMeanError("arm " + std::to_string(arm + 1) + " has no observations");
  }
  return sums_[arm] / static_cast<double>(n);
}

bool History::all_sampled() const noexcept {
  return std::none_of(counts_.begin(), counts_.end(), [](std::size_t n) { return n == 0; });
}

std::optional<double> History::last_observation(std::size_t arm) const {
  if (count(arm) == 0) {
    return std::nullopt;
  }
  return last_[arm];
}

std::size_t History::count_at(std::size_t arm, std::size_t t) const {
  if (arm >= num_arms()) {
    throw DomainError("arm index out of range");
  }
  if (t > time()) {
    throw DomainError("count_at: t beyond the recorded history");
  }
  return static_cast<std::size_t>(
      std::count(actions_.begin(), actions_.begin() + static_cast<std::ptrdiff_t>(t), arm));
}

void History::record(std::size_t arm, double reward) {
  if (arm >= num_arms()) {
    throw DomainError("arm index out of range");
  }
  ++counts_[arm];
  sums_[arm] += reward;
  last_[arm] = reward;
  actions_.push_back(arm);
  rewards_.push_back(reward);
}

}  // namespace mablab
