#include "kltail/copulas.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include <boost/math/tools/roots.hpp>

#include "kltail/errors.hpp"

namespace kltail {

std::string_view to_string(CopulaFamily family) {
  switch (family) {
    case CopulaFamily::logistic: return "logistic";
    case CopulaFamily::outer_power_clayton: return "clayton";
    case CopulaFamily::asymmetric_logistic: return "asymmetric-logistic";
  }
  return "unknown";
}

std::optional<CopulaFamily> parse_family(std::string_view name) {
  if (name == "logistic") return CopulaFamily::logistic;
  if (name == "clayton" || name == "outer-power-clayton") return CopulaFamily::outer_power_clayton;
  if (name == "asymmetric-logistic" || name == "alog") return CopulaFamily::asymmetric_logistic;
  return std::nullopt;
}

CopulaModel CopulaModel::logistic(double theta) {
  CopulaModel m{CopulaFamily::logistic, theta, {1.0, 1.0}};
  m.validate();
  return m;
}

CopulaModel CopulaModel::outer_power_clayton(double theta) {
  CopulaModel m{CopulaFamily::outer_power_clayton, theta, {1.0, 1.0}};
  m.validate();
  return m;
}

CopulaModel CopulaModel::asymmetric_logistic(double theta, std::array<double, 2> psi) {
  CopulaModel m{CopulaFamily::asymmetric_logistic, theta, psi};
  m.validate();
  return m;
}

void CopulaModel::validate() const {
  if (!(theta > 0.0 && theta <= 1.0)) throw DomainError("copula parameter theta must lie in (0, 1]");
  if (family == CopulaFamily::asymmetric_logistic) {
    for (double w : psi) {
      if (!(w > 0.0 && w <= 1.0)) throw DomainError("asymmetry weights must lie in (0, 1]");
    }
  }
}

namespace {

double open_unit(double u) {
  return std::clamp(u, std::nextafter(0.0, 1.0), std::nextafter(1.0, 0.0));
}

// Logistic exponent on the unit Frechet scale: (z1^{-1/theta} + z2^{-1/theta})^theta.
double logistic_exponent(double theta, double w1, double w2) {
  return std::pow(std::pow(w1, 1.0 / theta) + std::pow(w2, 1.0 / theta), theta);
}

}  // namespace

double copula_cdf(const CopulaModel& model, double u1, double u2) {
  model.validate();
  if (u1 <= 0.0 || u2 <= 0.0) return 0.0;
  if (u1 >= 1.0) return std::min(u2, 1.0);
  if (u2 >= 1.0) return u1;
  const double t1 = -std::log(u1);
  const double t2 = -std::log(u2);
  switch (model.family) {
    case CopulaFamily::logistic:
      return std::exp(-logistic_exponent(model.theta, t1, t2));
    case CopulaFamily::outer_power_clayton: {
      const double a1 = 1.0 / u1 - 1.0;
      const double a2 = 1.0 / u2 - 1.0;
      return 1.0 / (logistic_exponent(model.theta, a1, a2) + 1.0);
    }
    case CopulaFamily::asymmetric_logistic: {
      const auto [p1, p2] = model.psi;
      return std::exp(-((1.0 - p1) * t1 + (1.0 - p2) * t2 + logistic_exponent(model.theta, p1 * t1, p2 * t2)));
    }
  }
  return 0.0;
}

double clayton_conditional_inverse(double theta, double u1, double v) {
  // With a_i = 1/u_i - 1 and w = ((a1^{1/theta} + a2^{1/theta}))^theta the
  // conditional cdf is h = (1+w)^{-2} (w/a1)^{1-1/theta} / u1^2. Substituting
  // w = a1 e^delta, log h - log v is decreasing in delta >= 0 and vanishes at
  // delta = 0 exactly when v = 1; a2 = a1 expm1(delta/theta)^theta recovers
  // U2 without cancellation near 1.
  const double a1 = 1.0 / u1 - 1.0;
  const double log_v = std::log(v);
  const double tail = 1.0 - u1;  // a1 / (1 + a1)
  const double slope = 1.0 / theta - 1.0;
  auto f = [&](double delta) { return -2.0 * std::log1p(tail * std::expm1(delta)) - slope * delta - log_v; };

  double hi = 1.0;
  std::uintmax_t expansions = 0;
  while (f(hi) > 0.0) {
    hi *= 2.0;
    if (++expansions > 200) {
      throw NumericalError("clayton inversion could not bracket root (u1=" + std::to_string(u1) +
                           ", v=" + std::to_string(v) + ")");
    }
  }
  // Relative tolerance: small delta is the upper tail of U2.
  std::uintmax_t iterations = 200;
  const auto tol = [](double lo, double up) { return up - lo <= 1e-10 * lo || up <= 1e-300; };
  const auto [lo, up] = boost::math::tools::toms748_solve(f, 0.0, hi, f(0.0), f(hi), tol, iterations);
  if (iterations >= 200) {
    throw NumericalError("clayton inversion did not converge (u1=" + std::to_string(u1) +
                         ", v=" + std::to_string(v) + ")");
  }
  const double delta = 0.5 * (lo + up);
  const double a2 = a1 * std::pow(std::expm1(delta / theta), theta);
  return open_unit(1.0 / (1.0 + a2));
}

Sample sample(const CopulaModel& model, std::size_t n, RngStream& stream) {
  model.validate();
  if (n < 1) throw DomainError("sample size must be positive");
  Sample out(n, 2, MarginState::raw);
  const double theta = model.theta;
  for (std::size_t i = 0; i < n; ++i) {
    switch (model.family) {
      case CopulaFamily::logistic: {
        const double s = stream.positive_stable(theta);
        for (std::size_t j = 0; j < 2; ++j) {
          out(i, j) = open_unit(std::exp(-std::pow(stream.exponential() / s, theta)));
        }
        break;
      }
      case CopulaFamily::outer_power_clayton: {
        const double u1 = stream.uniform();
        const double v = stream.uniform();
        out(i, 0) = u1;
        out(i, 1) = clayton_conditional_inverse(theta, u1, v);
        break;
      }
      case CopulaFamily::asymmetric_logistic: {
        // Unit Frechet components: Z_j = max((1 - psi_j) F_j, psi_j L_j).
        const double s = stream.positive_stable(theta);
        for (std::size_t j = 0; j < 2; ++j) {
          const double psi = model.psi[j];
          const double logistic_part = psi * std::pow(s / stream.exponential(), theta);
          const double free_part = (1.0 - psi) / stream.exponential();
          const double z = std::max(logistic_part, free_part);
          out(i, j) = open_unit(std::exp(-1.0 / z));
        }
        break;
      }
    }
  }
  return out;
}

double theoretical_chi(const CopulaModel& model) {
  model.validate();
  switch (model.family) {
    case CopulaFamily::logistic:
    case CopulaFamily::outer_power_clayton:
      return 2.0 - std::pow(2.0, model.theta);
    case CopulaFamily::asymmetric_logistic: {
      const auto [p1, p2] = model.psi;
      return p1 + p2 - logistic_exponent(model.theta, p1, p2);
    }
  }
  return 0.0;
}

double match_chi(double target_chi, std::array<double, 2> psi) {
  const auto base = CopulaModel::asymmetric_logistic(1.0, psi);
  const double upper = std::min(psi[0], psi[1]);
  if (!(target_chi > 0.0 && target_chi < upper)) {
    throw DomainError("extremal correlation " + std::to_string(target_chi) +
                      " unattainable; asymmetric logistic with these weights covers (0, " +
                      std::to_string(upper) + ")");
  }
  // chi is decreasing in theta, from min(psi) as theta -> 0 to 0 at theta = 1.
  double lo = 0.0;
  double hi = 1.0;
  CopulaModel m = base;
  for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
    m.theta = 0.5 * (lo + hi);
    if (theoretical_chi(m) > target_chi) lo = m.theta; else hi = m.theta;
  }
  return 0.5 * (lo + hi);
}

}  // namespace kltail
