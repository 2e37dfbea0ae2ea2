#include "kltail/special_functions.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "kltail/errors.hpp"

namespace kltail {
namespace {

constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;
constexpr int kMaxIter = 10000;

double gamma_prefactor(double a, double x) {
  return std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// P(a, x) by its power series; converges fast for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int i = 0; i < kMaxIter; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) {
      return sum * gamma_prefactor(a, x);
    }
  }
  throw NumericalError("incomplete gamma series did not converge");
}

// Q(a, x) by the modified Lentz continued fraction; used for x >= a + 1.
double gamma_q_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) {
      return h * gamma_prefactor(a, x);
    }
  }
  throw NumericalError("incomplete gamma continued fraction did not converge");
}

void check_gamma_args(double a, double x) {
  if (!(a > 0.0)) throw DomainError("incomplete gamma requires a > 0");
  if (!(x >= 0.0)) throw DomainError("incomplete gamma requires x >= 0");
}

double chisq_pdf(double x, int dof) {
  if (x <= 0.0) return dof == 2 ? 0.5 : (dof == 1 ? std::numeric_limits<double>::infinity() : 0.0);
  const double k = 0.5 * dof;
  return std::exp((k - 1.0) * std::log(x) - 0.5 * x - k * std::numbers::ln2 - std::lgamma(k));
}

}  // namespace

double gamma_p(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return x < a + 1.0 ? gamma_p_series(a, x) : 1.0 - gamma_q_fraction(a, x);
}

double gamma_q(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return x < a + 1.0 ? 1.0 - gamma_p_series(a, x) : gamma_q_fraction(a, x);
}

ChiSquared::ChiSquared(int dof) : dof_(dof) {
  if (dof < 1) throw DomainError("chi-squared degrees of freedom must be >= 1");
}

double ChiSquared::cdf(double x) const {
  if (!(x >= 0.0)) throw DomainError("chi-squared cdf requires x >= 0");
  return gamma_p(0.5 * dof_, 0.5 * x);
}

double ChiSquared::sf(double x) const {
  if (!(x >= 0.0)) throw DomainError("chi-squared sf requires x >= 0");
  return gamma_q(0.5 * dof_, 0.5 * x);
}

double ChiSquared::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("chi-squared quantile requires p in (0, 1)");
  // Work on whichever tail keeps precision; g is increasing in x either way.
  const bool upper = p > 0.5;
  const double q = 1.0 - p;
  auto g = [&](double x) { return upper ? q - sf(x) : cdf(x) - p; };

  double lo = 0.0;
  double hi = static_cast<double>(dof_) + 1.0;
  while (g(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw NumericalError("chi-squared quantile bracket overflow");
  }

  double x = 0.5 * (lo + hi);
  for (int i = 0; i < 500; ++i) {
    const double f = g(x);
    if (f == 0.0) return x;
    if (f < 0.0) lo = x; else hi = x;
    if (hi - lo <= 1e-15 * std::max(1.0, hi)) break;
    const double pdf = chisq_pdf(x, dof_);
    double next = (pdf > 0.0 && std::isfinite(pdf)) ? x - f / pdf : lo - 1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-15 * std::max(1.0, x)) return next;
    x = next;
  }
  return 0.5 * (lo + hi);
}

double chisq_cdf(double x, int dof) { return ChiSquared(dof).cdf(x); }
double chisq_sf(double x, int dof) { return ChiSquared(dof).sf(x); }
double chisq_quantile(double p, int dof) { return ChiSquared(dof).quantile(p); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// Acklam's rational approximation (relative error ~1e-9) followed by one
// Halley step against erfc, which brings it to full double precision.
double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("normal quantile requires p in (0, 1)");
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  // Antisymmetry is exact: evaluate on the lower half only.
  if (p > 0.5) return -normal_quantile(1.0 - p);
  if (p == 0.5) return 0.0;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

}  // namespace kltail
