#pragma once

#include <string>
#include <variant>

namespace mablab {

/// Standard normal quantile, Wichura's AS241 (PPND16). Relative accuracy is
/// about 1e-16 over (0,1).
double normal_quantile(double p);

double normal_cdf(double x);

struct Gaussian {
  double mean = 0.0;
  double sd = 1.0;

  friend bool operator==(const Gaussian&, const Gaussian&) = default;
};

struct Bernoulli {
  double p = 0.5;

  friend bool operator==(const Bernoulli&, const Bernoulli&) = default;
};

struct BoundedUniform {
  double lo = 0.0;
  double hi = 1.0;

  friend bool operator==(const BoundedUniform&, const BoundedUniform&) = default;
};

/// One arm P_k. The mean is analytic, never estimated.
class ArmSpec {
 public:
  using Family = std::variant<Gaussian, Bernoulli, BoundedUniform>;

  /// Throws DomainError when the parameters are invalid.
  explicit ArmSpec(Family family);

  static ArmSpec gaussian(double mean, double sd = 1.0) { return ArmSpec(Gaussian{mean, sd}); }
  static ArmSpec bernoulli(double p) { return ArmSpec(Bernoulli{p}); }
  static ArmSpec uniform(double lo, double hi) { return ArmSpec(BoundedUniform{lo, hi}); }

  const Family& family() const noexcept { return family_; }
  double mean() const noexcept;
  bool bounded() const noexcept;
  /// Convex hull of the support; infinite for Gaussian.
  double support_lo() const noexcept;
  double support_hi() const noexcept;
  std::string describe() const;

  friend bool operator==(const ArmSpec&, const ArmSpec&) = default;

 private:
  Family family_;
};

/// F^{-1}(u) for the arm's law. Non-decreasing in u; throws DomainError
/// unless 0 < u < 1.
double inverse_cdf(const ArmSpec& arm, double u);

}  // namespace mablab
