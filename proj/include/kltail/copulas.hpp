#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "kltail/rng.hpp"
#include "kltail/sample.hpp"

namespace kltail {

enum class CopulaFamily { logistic, outer_power_clayton, asymmetric_logistic };

std::string_view to_string(CopulaFamily family);
std::optional<CopulaFamily> parse_family(std::string_view name);

// Bivariate copula with dependence parameter theta in (0, 1]. psi holds the
// asymmetry weights of the asymmetric logistic family and is ignored
// otherwise.
struct CopulaModel {
  CopulaFamily family = CopulaFamily::logistic;
  double theta = 1.0;
  std::array<double, 2> psi{1.0, 1.0};

  static CopulaModel logistic(double theta);
  static CopulaModel outer_power_clayton(double theta);
  static CopulaModel asymmetric_logistic(double theta, std::array<double, 2> psi);

  void validate() const;
};

// Closed-form distribution function on uniform margins.
double copula_cdf(const CopulaModel& model, double u1, double u2);

// n i.i.d. pairs on uniform(0,1) margins (state raw).
//  logistic:            U_i = exp(-(E_i / S)^theta), S positive stable(theta)
//  outer power Clayton: U1 uniform, U2 solves dC/du1(U1, U2) = V by
//                       bracketed root finding (TOMS 748, tol 1e-10)
//  asymmetric logistic: componentwise maximum of an independent Frechet
//                       part and a logistic part, which reproduces its CDF
Sample sample(const CopulaModel& model, std::size_t n, RngStream& stream);

// Conditional draw of the outer power Clayton: U2 given U1 = u1 and the
// conditional probability v. Exposed for testing.
double clayton_conditional_inverse(double theta, double u1, double v);

// chi = lim P(U2 > t | U1 > t) as t -> 1.
double theoretical_chi(const CopulaModel& model);

// theta of the asymmetric logistic with weights psi whose extremal
// correlation equals target_chi. Attainable targets lie in
// (0, min(psi1, psi2)).
double match_chi(double target_chi, std::array<double, 2> psi);

}  // namespace kltail
