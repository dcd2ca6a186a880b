#include "mablab/distributions.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "mablab/detail/overloaded.hpp"
#include "mablab/errors.hpp"

namespace mablab {
namespace {

using detail::Overloaded;

double central_region(double q) {
  const double r = 0.180625 - q * q;
  const double num =
      ((((((2509.0809287301226727 * r + 33430.575583588128105) * r + 67265.770927008700853) * r +
          45921.953931549871457) * r + 13731.693765509461125) * r + 1971.5909503065514427) * r +
       133.14166789178437745) * r + 3.387132872796366608;
  const double den =
      ((((((5226.495278852545925 * r + 28729.085735721942674) * r + 39307.89580009271061) * r +
          21213.794301586595867) * r + 5394.1960214247511077) * r + 687.1870074920579083) * r +
       42.313330701600911252) * r + 1.0;
  return q * num / den;
}

double tail_region(double r) {
  if (r <= 5.0) {
    r -= 1.6;
    const double num =
        ((((((7.7454501427834140764e-4 * r + 0.0227238449892691845833) * r +
             0.24178072517745061177) * r + 1.27045825245236838258) * r + 3.64784832476320460504) * r +
          5.7694972214606914055) * r + 4.6303378461565452959) * r + 1.42343711074968357734;
    const double den =
        ((((((1.05075007164441684324e-9 * r + 5.475938084995344946e-4) * r +
             0.0151986665636164571966) * r + 0.14810397642748007459) * r + 0.68976733498510000455) * r +
          1.6763848301838038494) * r + 2.05319162663775882187) * r + 1.0;
    return num / den;
  }
  r -= 5.0;
  const double num =
      ((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
           0.0012426609473880784386) * r + 0.026532189526576123093) * r + 0.29656057182850489123) * r +
        1.7848265399172913358) * r + 5.4637849111641143699) * r + 6.6579046435011037772;
  const double den =
      ((((((2.04426310338993978564e-15 * r + 1.4215117583164458887e-7) * r +
           1.8463183175100546818e-5) * r + 7.868691311456132591e-4) * r + 0.0148753612908506148525) * r +
        0.13692988092273580531) * r + 0.59983220655588793769) * r + 1.0;
  return num / den;
}

}  // namespace

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("normal_quantile: p must lie in (0,1)");
  }
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    return central_region(q);
  }
  const double tail = q < 0.0 ? p : 1.0 - p;
  const double value = tail_region(std::sqrt(-std::log(tail)));
  return q < 0.0 ? -value : value;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

ArmSpec::ArmSpec(Family family) : family_(family) {
  std::visit(Overloaded{
                 [](const Gaussian& g) {
                   if (!std::isfinite(g.mean) || !(g.sd > 0.0) || !std::isfinite(g.sd)) {
                     throw DomainError("Gaussian arm needs finite mean and sd > 0");
                   }
                 },
                 [](const Bernoulli& b) {
                   if (!(b.p >= 0.0 && b.p <= 1.0)) {
                     throw DomainError("Bernoulli arm needs p in [0,1]");
                   }
                 },
                 [](const BoundedUniform& u) {
                   if (!std::isfinite(u.lo) || !std::isfinite(u.hi) || !(u.lo < u.hi)) {
                     throw DomainError("uniform arm needs finite lo < hi");
                   }
                 },
             },
             family_);
}

double ArmSpec::mean() const noexcept {
  return std::visit(Overloaded{
                        [](const Gaussian& g) { return g.mean; },
                        [](const Bernoulli& b) { return b.p; },
                        [](const BoundedUniform& u) { return 0.5 * (u.lo + u.hi); },
                    },
                    family_);
}

bool ArmSpec::bounded() const noexcept { return !std::holds_alternative<Gaussian>(family_); }

double ArmSpec::support_lo() const noexcept {
  return std::visit(Overloaded{
                        [](const Gaussian&) { return -std::numeric_limits<double>::infinity(); },
                        [](const Bernoulli&) { return 0.0; },
                        [](const BoundedUniform& u) { return u.lo; },
                    },
                    family_);
}

double ArmSpec::support_hi() const noexcept {
  return std::visit(Overloaded{
                        [](const Gaussian&) { return std::numeric_limits<double>::infinity(); },
                        [](const Bernoulli&) { return 1.0; },
                        [](const BoundedUniform& u) { return u.hi; },
                    },
                    family_);
}

std::string ArmSpec::describe() const {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const Gaussian& g) { os << "Gaussian(" << g.mean << ", " << g.sd << ")"; },
                 [&](const Bernoulli& b) { os << "Bernoulli(" << b.p << ")"; },
                 [&](const BoundedUniform& u) { os << "Uniform(" << u.lo << ", " << u.hi << ")"; },
             },
             family_);
  return os.str();
}

double inverse_cdf(const ArmSpec& arm, double u) {
  if (!(u > 0.0 && u < 1.0)) {
    throw DomainError("inverse_cdf: u must lie in (0,1)");
  }
  return std::visit(Overloaded{
                        [u](const Gaussian& g) { return g.mean + g.sd * normal_quantile(u); },
                        [u](const Bernoulli& b) { return u > 1.0 - b.p ? 1.0 : 0.0; },
                        [u](const BoundedUniform& r) { return r.lo + (r.hi - r.lo) * u; },
                    },
                    arm.family());
}

}  // namespace mablab
