#include "mablab/estimators.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "mablab/errors.hpp"
#include "mablab/parallel.hpp"
#include "mablab/philox.hpp"

namespace mablab {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double mean_of(std::span<const double> values) {
  double total = 0.0;
  for (double v : values) {
    total += v;
  }
  return total / static_cast<double>(values.size());
}

void check_arm(std::span<const RunRecord> records, std::size_t arm) {
  for (const RunRecord& r : records) {
    if (arm >= r.counts.size()) {
      throw DomainError("arm index " + std::to_string(arm) + " out of range");
    }
  }
}

}  // namespace

double RunRecord::sum(std::size_t arm) const {
  return counts.at(arm) == 0 ? 0.0 : means.at(arm) * static_cast<double>(counts[arm]);
}

RunRecord record_of(const Trace& trace) {
  const History& h = trace.history;
  RunRecord record;
  record.censored = trace.censored();
  record.stop_time = trace.stop_time.value_or(h.time());
  record.counts.assign(h.counts().begin(), h.counts().end());
  record.means.resize(h.num_arms());
  for (std::size_t k = 0; k < h.num_arms(); ++k) {
    record.means[k] = h.count(k) == 0 ? kNaN : h.sample_mean(k);
  }
  record.chosen = trace.chosen;
  return record;
}

double sample_mean(const Trace& trace, std::size_t arm, std::size_t t) {
  const History& h = trace.history;
  if (arm >= h.num_arms() || t > h.time()) {
    throw DomainError("sample_mean: arm or time out of range");
  }
  std::size_t n = 0;
  double s = 0.0;
  for (std::size_t i = 0; i < t; ++i) {
    if (h.actions()[i] == arm) {
      ++n;
      s += h.rewards()[i];
    }
  }
  if (n == 0) {
    throw UndefinedMeanError("arm " + std::to_string(arm + 1) + " has no observations by time " +
                             std::to_string(t));
  }
  return s / static_cast<double>(n);
}

double mc_std_err(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) {
    return kNaN;
  }
  const double m = mean_of(values);
  double ss = 0.0;
  for (double v : values) {
    ss += (v - m) * (v - m);
  }
  return std::sqrt(ss / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n));
}

WaldResidual wald_residual(std::span<const RunRecord> records, std::size_t arm, double mu) {
  check_arm(records, arm);
  std::vector<double> terms;
  terms.reserve(records.size());
  for (const RunRecord& r : records) {
    if (!r.censored) {
      terms.push_back(r.sum(arm) - mu * static_cast<double>(r.counts[arm]));
    }
  }
  if (terms.size() < 2) {
    throw NoDataError("Wald residual needs at least two uncensored repetitions");
  }
  return {mean_of(terms), mc_std_err(terms), terms.size()};
}

CovarianceCheck covariance_bias_check(std::span<const RunRecord> records, std::size_t arm,
                                      double mu) {
  check_arm(records, arm);
  std::vector<double> means;
  std::vector<double> counts;
  for (const RunRecord& r : records) {
    if (r.censored) {
      continue;
    }
    if (r.counts[arm] == 0) {
      throw UndefinedMeanError("arm " + std::to_string(arm + 1) +
                               " unsampled in some repetition; covariance check undefined");
    }
    means.push_back(r.means[arm]);
    counts.push_back(static_cast<double>(r.counts[arm]));
  }
  const std::size_t n = means.size();
  if (n < 2) {
    throw NoDataError("covariance check needs at least two uncensored repetitions");
  }
  const double nn = static_cast<double>(n);
  const double mean_hat = mean_of(means);
  const double mean_count = mean_of(counts);
  double co = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    co += (means[r] - mean_hat) * (counts[r] - mean_count);
  }
  const double cov = co / (nn - 1.0);
  const double lhs = mean_hat - mu;
  const double rhs = -cov / mean_count;

  // Linearised per-repetition contribution of rhs, paired with the lhs term.
  std::vector<double> paired(n);
  for (std::size_t r = 0; r < n; ++r) {
    const double dn = counts[r] - mean_count;
    const double rhs_r =
        rhs - ((means[r] - mean_hat) * dn - cov) / mean_count + cov * dn / (mean_count * mean_count);
    paired[r] = (means[r] - mu) - rhs_r;
  }
  return {lhs, rhs, lhs - rhs, mc_std_err(paired), n};
}

double ChosenBias::recomposition_error() const {
  double total = 0.0;
  for (const ConditionalBias& c : conditional) {
    if (c.reps > 0) {
      total += c.bias * c.probability;
    }
  }
  return total - bias;
}

BiasReport bias_report(std::span<const RunRecord> records, std::span<const double> mus) {
  BiasReport report{records.size(), 0, {}, std::nullopt};
  for (const RunRecord& r : records) {
    if (r.censored) {
      ++report.censored_reps;
    }
    if (r.counts.size() != mus.size() || r.means.size() != mus.size()) {
      throw DomainError("record arm count does not match the arm means");
    }
  }
  const std::size_t uncensored = report.reps - report.censored_reps;
  if (uncensored == 0) {
    throw NoDataError("every repetition was censored");
  }

  for (std::size_t k = 0; k < mus.size(); ++k) {
    std::vector<double> diffs;
    double count_total = 0.0;
    std::size_t unsampled = 0;
    for (const RunRecord& r : records) {
      if (r.censored) {
        continue;
      }
      count_total += static_cast<double>(r.counts[k]);
      if (r.counts[k] == 0) {
        ++unsampled;
      } else {
        diffs.push_back(r.means[k] - mus[k]);
      }
    }
    ArmBias arm{k,
                mus[k],
                diffs.empty() ? kNaN : mean_of(diffs),
                mc_std_err(diffs),
                count_total / static_cast<double>(uncensored),
                diffs.size(),
                unsampled,
                WaldResidual{kNaN, kNaN, uncensored},
                std::nullopt};
    if (uncensored >= 2) {
      arm.wald = wald_residual(records, k, mus[k]);
      if (unsampled == 0) {
        arm.covariance = covariance_bias_check(records, k, mus[k]);
      }
    }
    report.arms.push_back(arm);
  }

  std::vector<double> chosen_diffs;
  std::vector<double> cond_sums(mus.size(), 0.0);
  std::vector<std::size_t> cond_reps(mus.size(), 0);
  for (const RunRecord& r : records) {
    if (r.censored || !r.chosen) {
      continue;
    }
    const std::size_t k = *r.chosen;
    const double d = r.means.at(k) - mus[k];
    chosen_diffs.push_back(d);
    cond_sums[k] += d;
    ++cond_reps[k];
  }
  if (!chosen_diffs.empty()) {
    ChosenBias chosen{mean_of(chosen_diffs), mc_std_err(chosen_diffs), chosen_diffs.size(), {}};
    const double n = static_cast<double>(chosen_diffs.size());
    for (std::size_t k = 0; k < mus.size(); ++k) {
      chosen.conditional.push_back(
          {k, cond_reps[k] > 0 ? cond_sums[k] / static_cast<double>(cond_reps[k]) : kNaN,
           cond_reps[k], static_cast<double>(cond_reps[k]) / n});
    }
    report.chosen = std::move(chosen);
  }
  return report;
}

std::vector<RunRecord> simulate_reps(const StrategySpec& strategy, const std::vector<ArmSpec>& arms,
                                     std::size_t reps, std::uint64_t master_seed, std::size_t cap,
                                     unsigned threads) {
  validate(strategy, arms.size());
  std::vector<RunRecord> records(reps);
  parallel_for(reps, threads, [&](std::size_t r) {
    const std::uint64_t seed = derive_seed(master_seed, r);
    CounterfactualTable table(seed, arms);
    records[r] = record_of(run_strategy(strategy, table, SeedStream(seed), cap));
  });
  return records;
}

BiasReport mc_bias(const StrategySpec& strategy, const std::vector<ArmSpec>& arms,
                   std::size_t reps, std::uint64_t master_seed, std::size_t cap,
                   unsigned threads) {
  if (reps < 2) {
    throw DomainError("mc_bias needs at least two repetitions");
  }
  const auto records = simulate_reps(strategy, arms, reps, master_seed, cap, threads);
  std::vector<double> mus;
  for (const ArmSpec& a : arms) {
    mus.push_back(a.mean());
  }
  return bias_report(records, mus);
}

GeometricStopBias geometric_stop_bias_exact(double mu, double tol) {
  if (!(mu > 0.0 && mu < 1.0)) {
    throw DomainError("geometric_stop_bias_exact: mu must lie in (0,1)");
  }
  if (!(tol > 0.0)) {
    throw DomainError("geometric_stop_bias_exact: tol must be > 0");
  }
  const double q = 1.0 - mu;
  const double closed = -mu * std::log1p(-q) / q - mu;

  // Tail after N terms is at most q^N / (N + 1).
  constexpr std::size_t kMaxTerms = 2'000'000'000;
  double total = 0.0;
  double power = 1.0;  // q^{n-1}
  std::size_t n = 1;
  for (;; ++n) {
    total += mu * power / static_cast<double>(n);
    power *= q;
    if (power / static_cast<double>(n + 1) < tol / 4.0) {
      break;
    }
    if (n >= kMaxTerms) {
      throw ConsistencyError("geometric series did not converge within the term budget");
    }
  }
  const double series = total - mu;
  if (std::fabs(series - closed) > tol) {
    throw ConsistencyError("closed form and series disagree beyond tolerance");
  }
  return {closed, series, n};
}

}  // namespace mablab
