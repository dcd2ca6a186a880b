#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "mablab/history.hpp"

namespace mablab {

namespace stopping {

/// Stop at t = horizon.
struct FixedHorizon {
  std::size_t horizon = 1;
};
/// Stop the first time `arm` returns exactly `target`.
struct FirstSuccess {
  std::size_t arm = 0;
  double target = 1.0;
};
/// Stop the first time mu_hat_arm(t) > c_t (strict). c_t is `values[t-1]`
/// when `values` is non-empty (its last entry repeats), otherwise
/// offset + scale / sqrt(t).
struct MeanBoundary {
  std::size_t arm = 0;
  double offset = 0.0;
  double scale = 0.0;
  std::vector<double> values;
};
/// Stop the first time S_arm(t) >= slope * N_arm(t) + intercept.
struct LineCrossing {
  std::size_t arm = 0;
  double slope = 0.0;
  double intercept = 1.0;
};
/// One-sided sequential likelihood ratio test on arms 1 and 2, checked at
/// even times and capped at max_time.
struct Slrt {
  double w = 10.0;
  double alpha = 0.1;
  double sigma = 1.0;
  std::size_t max_time = 200;
};
/// lil'UCB: t > K and N_k(t) >= 1 + lambda * sum_{j != k} N_j(t) for some k.
struct LilUcbCount {
  double lambda = 9.0;
};
/// Checked at t = K, 2K, ..., MK: largest mean beats the runner-up by more
/// than gap; always stops at t = MK.
struct GapStop {
  double gap = 1.0;
  std::size_t max_cycles = 1000;
};

}  // namespace stopping

struct StoppingRuleSpec {
  using Rule = std::variant<stopping::FixedHorizon, stopping::FirstSuccess, stopping::MeanBoundary,
                            stopping::LineCrossing, stopping::Slrt, stopping::LilUcbCount,
                            stopping::GapStop>;
  Rule rule;
};

void validate(const StoppingRuleSpec& spec, std::size_t num_arms);
std::string rule_name(const StoppingRuleSpec& spec);

/// Whether to stop after round t = history.time(). A rule whose arms have no
/// samples yet answers false.
bool should_stop(const StoppingRuleSpec& spec, const History& history);

/// Right-hand side of the SLRT boundary at even t >= 2.
double slrt_boundary(std::size_t t, double w, double alpha, double sigma);

double mean_boundary_value(const stopping::MeanBoundary& rule, std::size_t t);

}  // namespace mablab
