#include "mablab/stopping.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mablab/detail/overloaded.hpp"
#include "mablab/errors.hpp"

namespace mablab {
namespace {

using detail::Overloaded;

void require(bool ok, const std::string& path, const std::string& message) {
  if (!ok) {
    throw ConfigError(path, message);
  }
}

void require_arm(std::size_t arm, std::size_t num_arms) {
  require(arm < num_arms, "stopping.arm", "refers to an arm beyond K");
}

}  // namespace

void validate(const StoppingRuleSpec& spec, std::size_t num_arms) {
  std::visit(Overloaded{
                 [](const stopping::FixedHorizon& r) {
                   require(r.horizon >= 1, "stopping.horizon", "must be >= 1");
                 },
                 [&](const stopping::FirstSuccess& r) { require_arm(r.arm, num_arms); },
                 [&](const stopping::MeanBoundary& r) { require_arm(r.arm, num_arms); },
                 [&](const stopping::LineCrossing& r) {
                   require_arm(r.arm, num_arms);
                   require(r.intercept > 0.0, "stopping.intercept", "must be > 0");
                 },
                 [&](const stopping::Slrt& r) {
                   require(num_arms >= 2, "arms", "SLRT needs two arms");
                   require(r.w > 0.0, "stopping.w", "must be > 0");
                   require(r.alpha > 0.0 && r.alpha < 1.0, "stopping.alpha", "must lie in (0,1)");
                   require(r.sigma > 0.0, "stopping.sigma", "must be > 0");
                   require(r.max_time >= 1, "stopping.max_time", "must be >= 1");
                 },
                 [](const stopping::LilUcbCount& r) {
                   require(r.lambda > 0.0, "stopping.lambda", "must be > 0");
                 },
                 [](const stopping::GapStop& r) {
                   require(r.gap > 0.0, "stopping.gap", "must be > 0");
                   require(r.max_cycles >= 1, "stopping.max_cycles", "must be >= 1");
                 },
             },
             spec.rule);
}

std::string rule_name(const StoppingRuleSpec& spec) {
  return std::visit(Overloaded{
                        [](const stopping::FixedHorizon&) { return "fixed-horizon"; },
                        [](const stopping::FirstSuccess&) { return "first-success"; },
                        [](const stopping::MeanBoundary&) { return "mean-boundary"; },
                        [](const stopping::LineCrossing&) { return "line-crossing"; },
                        [](const stopping::Slrt&) { return "slrt"; },
                        [](const stopping::LilUcbCount&) { return "lil-ucb-count"; },
                        [](const stopping::GapStop&) { return "gap-stop"; },
                    },
                    spec.rule);
}

double slrt_boundary(std::size_t t, double w, double alpha, double sigma) {
  if (t < 2 || t % 2 != 0) {
    throw DomainError("slrt_boundary: t must be even and >= 2");
  }
  const double tt = static_cast<double>(t);
  const double spread = tt + 2.0 * w;
  return 2.0 * sigma / tt *
         std::sqrt(spread * std::log(1.0 / (2.0 * alpha) * std::sqrt(spread / (2.0 * w)) + 1.0));
}

double mean_boundary_value(const stopping::MeanBoundary& rule, std::size_t t) {
  if (!rule.values.empty()) {
    return rule.values[std::min(t, rule.values.size()) - 1];
  }
  return rule.offset + rule.scale / std::sqrt(static_cast<double>(t));
}

bool should_stop(const StoppingRuleSpec& spec, const History& history) {
  const std::size_t t = history.time();
  if (t == 0) {
    return false;
  }
  return std::visit(
      Overloaded{
          [&](const stopping::FixedHorizon& r) { return t >= r.horizon; },
          [&](const stopping::FirstSuccess& r) {
            return history.actions().back() == r.arm && history.rewards().back() == r.target;
          },
          [&](const stopping::MeanBoundary& r) {
            if (history.count(r.arm) == 0) {
              return false;
            }
            return history.sample_mean(r.arm) > mean_boundary_value(r, t);
          },
          [&](const stopping::LineCrossing& r) {
            return history.sum(r.arm) >=
                   r.slope * static_cast<double>(history.count(r.arm)) + r.intercept;
          },
          [&](const stopping::Slrt& r) {
            if (t >= r.max_time) {
              return true;
            }
            if (t % 2 != 0 || history.count(0) == 0 || history.count(1) == 0) {
              return false;
            }
            return history.sample_mean(0) - history.sample_mean(1) >=
                   slrt_boundary(t, r.w, r.alpha, r.sigma);
          },
          [&](const stopping::LilUcbCount& r) {
            const std::size_t num_arms = history.num_arms();
            if (t <= num_arms) {
              return false;
            }
            for (std::size_t k = 0; k < num_arms; ++k) {
              const double others = static_cast<double>(t - history.count(k));
              if (static_cast<double>(history.count(k)) >= 1.0 + r.lambda * others) {
                return true;
              }
            }
            return false;
          },
          [&](const stopping::GapStop& r) {
            const std::size_t num_arms = history.num_arms();
            if (t % num_arms != 0) {
              return false;
            }
            if (t >= r.max_cycles * num_arms) {
              return true;
            }
            if (num_arms < 2 || !history.all_sampled()) {
              return false;
            }
            std::vector<double> means(num_arms);
            for (std::size_t k = 0; k < num_arms; ++k) {
              means[k] = history.sample_mean(k);
            }
            std::partial_sort(means.begin(), means.begin() + 2, means.end(), std::greater<>());
            return means[0] > means[1] + r.gap;
          },
      },
      spec.rule);
}

}  // namespace mablab
