#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mablab/distributions.hpp"
#include "mablab/engine.hpp"
#include "mablab/history.hpp"

namespace mablab {

/// What one repetition contributes to the estimators. S_k is carried as
/// mean * N so that a record rebuilt from the raw CSV is identical to the
/// one built from the trace.
struct RunRecord {
  bool censored = false;
  /// Stopping time, or the number of steps executed when censored.
  std::size_t stop_time = 0;
  std::vector<std::size_t> counts;
  /// NaN where the count is zero.
  std::vector<double> means;
  std::optional<std::size_t> chosen;

  double sum(std::size_t arm) const;
  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

RunRecord record_of(const Trace& trace);

/// mu_hat_k(t) = S_k(t) / N_k(t) for t <= the trace length. Throws
/// UndefinedMeanError when N_k(t) = 0.
double sample_mean(const Trace& trace, std::size_t arm, std::size_t t);

struct WaldResidual {
  /// Mean of S_k(T) - mu_k N_k(T) over uncensored repetitions.
  double residual;
  double std_err;
  std::size_t reps;
};

struct CovarianceCheck {
  /// mean(mu_hat_k(T) - mu_k)
  double lhs;
  /// -Cov(mu_hat_k(T), N_k(T)) / mean(N_k(T)), unbiased covariance.
  double rhs;
  double discrepancy;
  /// Standard error of lhs - rhs from per-repetition paired terms.
  double std_err;
  std::size_t reps;
};

struct ArmBias {
  std::size_t arm;
  double mu;
  double bias;
  double std_err;
  double mean_count;
  /// Uncensored repetitions with N_k(T) >= 1 (the bias sample).
  std::size_t reps_used;
  /// Uncensored repetitions with N_k(T) = 0.
  std::size_t reps_unsampled;
  WaldResidual wald;
  /// Absent when some uncensored repetition never sampled the arm.
  std::optional<CovarianceCheck> covariance;
};

struct ConditionalBias {
  std::size_t arm;
  double bias;
  std::size_t reps;
  double probability;
};

struct ChosenBias {
  double bias;
  double std_err;
  std::size_t reps;
  std::vector<ConditionalBias> conditional;

  /// sum_k bias_k P(kappa = k) minus the unconditional bias.
  double recomposition_error() const;
};

struct BiasReport {
  std::size_t reps;
  std::size_t censored_reps;
  std::vector<ArmBias> arms;
  std::optional<ChosenBias> chosen;
};

/// Sample standard deviation over sqrt(n); NaN for n < 2.
double mc_std_err(std::span<const double> values);

WaldResidual wald_residual(std::span<const RunRecord> records, std::size_t arm, double mu);

/// Throws NoDataError with fewer than two uncensored records and
/// UndefinedMeanError if any uncensored record has N_k(T) = 0.
CovarianceCheck covariance_bias_check(std::span<const RunRecord> records, std::size_t arm,
                                      double mu);

/// Throws NoDataError when every record is censored.
BiasReport bias_report(std::span<const RunRecord> records, std::span<const double> mus);

/// Repetition r runs on a table and seed stream keyed by
/// derive_seed(master_seed, r). Results are in repetition order whatever
/// the thread count.
std::vector<RunRecord> simulate_reps(const StrategySpec& strategy, const std::vector<ArmSpec>& arms,
                                     std::size_t reps, std::uint64_t master_seed, std::size_t cap,
                                     unsigned threads = 1);

BiasReport mc_bias(const StrategySpec& strategy, const std::vector<ArmSpec>& arms,
                   std::size_t reps, std::uint64_t master_seed, std::size_t cap,
                   unsigned threads = 1);

struct GeometricStopBias {
  double closed_form;
  double series;
  std::size_t terms;
};

/// Bias of the first arm's mean when sampling alternates and stops at the
/// first success of a Bernoulli(mu) arm: mu log(1/mu)/(1-mu) - mu, together
/// with the truncated series sum_n mu (1-mu)^{n-1}/n - mu. Throws
/// DomainError unless 0 < mu < 1, ConsistencyError if the two disagree by
/// more than tol.
GeometricStopBias geometric_stop_bias_exact(double mu, double tol);

}  // namespace mablab
