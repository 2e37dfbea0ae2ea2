#pragma once

namespace kltail {

// Chi-squared distribution with a positive integer number of degrees of freedom.
class ChiSquared {
 public:
  explicit ChiSquared(int dof);

  int dof() const noexcept { return dof_; }
  double cdf(double x) const;
  // Upper tail P(X > x), evaluated directly rather than as 1 - cdf.
  double sf(double x) const;
  double quantile(double p) const;

 private:
  int dof_;
};

/// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);
/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double gamma_q(double a, double x);

double chisq_cdf(double x, int dof);
double chisq_sf(double x, int dof);
double chisq_quantile(double p, int dof);

double normal_cdf(double x);
double normal_quantile(double p);

}  // namespace kltail
