#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace mablab {

/// Data collected so far, D_t = {A_1, Y_1, ..., A_t, Y_t}, with running
/// per-arm counts N_k(t) and sums S_k(t). Arms are 0-based.
class History {
 public:
  explicit History(std::size_t num_arms);

  std::size_t num_arms() const noexcept { return counts_.size(); }
  /// Number of completed rounds t.
  std::size_t time() const noexcept { return actions_.size(); }

  std::size_t count(std::size_t arm) const { return counts_.at(arm); }
  double sum(std::size_t arm) const { return sums_.at(arm); }
  std::span<const std::size_t> counts() const noexcept { return counts_; }
  std::span<const double> sums() const noexcept { return sums_; }

  /// S_k(t) / N_k(t); throws UndefinedMeanError when N_k(t) = 0.
  double sample_mean(std::size_t arm) const;
  bool all_sampled() const noexcept;

  /// Most recent reward from `arm`, if any.
  std::optional<double> last_observation(std::size_t arm) const;

  std::span<const std::size_t> actions() const noexcept { return actions_; }
  std::span<const double> rewards() const noexcept { return rewards_; }

  /// N_k(t) for an earlier t <= time(); linear in t.
  std::size_t count_at(std::size_t arm, std::size_t t) const;

  void record(std::size_t arm, double reward);

  friend bool operator==(const History&, const History&) = default;

 private:
  std::vector<std::size_t> counts_;
  std::vector<double> sums_;
  std::vector<double> last_;
  std::vector<std::size_t> actions_;
  std::vector<double> rewards_;
};

/// One experiment: the history up to the stopping time, the stopping time
/// itself and the chosen arm. A censored trace hit the step cap before the
/// stopping rule fired; it has no stopping time and no chosen arm.
struct Trace {
  History history;
  std::optional<std::size_t> stop_time;
  std::optional<std::size_t> chosen;

  bool censored() const noexcept { return !stop_time.has_value(); }

  friend bool operator==(const Trace&, const Trace&) = default;
};

}  // namespace mablab
