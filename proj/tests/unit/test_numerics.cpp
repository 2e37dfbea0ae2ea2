#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>
#include <vector>

#include "kltail/errors.hpp"
#include "kltail/rng.hpp"
#include "kltail/special_functions.hpp"

namespace {

using namespace kltail;

// Integrate the chi-squared density directly. Independent of the series /
// continued-fraction code under test.
double chisq_cdf_oracle(double x, int k) {
  if (x <= 0) return 0.0;
  const double half = 0.5 * k;
  auto pdf = [half](double t) {
    if (t <= 0) return 0.0;
    return std::exp((half - 1) * std::log(t) - t / 2 - half * std::log(2.0) - std::lgamma(half));
  };
  boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate(pdf, 0.0, x);
}

double normal_cdf_oracle(double x) {
  auto pdf = [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2 * std::numbers::pi); };
  return 0.5 + boost::math::quadrature::gauss_kronrod<double, 61>::integrate(pdf, 0.0, x, 15, 1e-14);
}

TEST(ChiSquared, CdfAtZero) { EXPECT_EQ(chisq_cdf(0.0, 3), 0.0); }

TEST(ChiSquared, CdfAtNinetyFifthPercentile) {
  EXPECT_NEAR(chisq_cdf(7.8147, 3), 0.95, 1e-4);
  EXPECT_NEAR(chisq_cdf(7.8147, 3), chisq_cdf_oracle(7.8147, 3), 1e-10);
}

TEST(ChiSquared, CdfAtMeanIsBetweenHalfAndSevenTenths) {
  for (int k = 1; k <= 20; ++k) {
    const double v = chisq_cdf(k, k);
    EXPECT_GT(v, 0.5) << k;
    EXPECT_LT(v, 0.7) << k;
    EXPECT_NEAR(v, chisq_cdf_oracle(k, k), 1e-9) << k;
  }
}

TEST(ChiSquared, CdfMatchesQuadratureOnGrid) {
  for (int k : {1, 2, 3, 4, 7, 11, 30}) {
    for (double x : {0.01, 0.3, 1.0, 2.5, 6.0, 15.0, 40.0}) {
      EXPECT_NEAR(chisq_cdf(x, k), chisq_cdf_oracle(x, k), 1e-9) << "k=" << k << " x=" << x;
      EXPECT_NEAR(chisq_cdf(x, k) + chisq_sf(x, k), 1.0, 1e-14);
    }
  }
}

TEST(ChiSquared, QuantileKnownValues) {
  EXPECT_NEAR(chisq_quantile(0.95, 3), 7.8147, 1e-3);
  EXPECT_NEAR(chisq_quantile(0.5, 2), 2 * std::log(2.0), 1e-3);
  EXPECT_NEAR(chisq_quantile(0.5, 2), 2 * std::log(2.0), 1e-10);
}

TEST(ChiSquared, QuantileAgainstBisectionOnOracle) {
  double lo = 0, hi = 50;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (chisq_cdf_oracle(mid, 3) < 0.95 ? lo : hi) = mid;
  }
  EXPECT_NEAR(chisq_quantile(0.95, 3), 0.5 * (lo + hi), 1e-6);
}

TEST(ChiSquared, QuantileRoundTrip) {
  for (int k : {1, 2, 3, 4, 9, 25}) {
    for (double x : {0.05, 0.5, 1.0, 3.0, 8.0, 20.0, 45.0}) {
      EXPECT_NEAR(chisq_quantile(chisq_cdf(x, k), k), x, 1e-7 * std::max(1.0, x)) << k << " " << x;
    }
  }
}

TEST(ChiSquared, ClassWrapsFreeFunctions) {
  ChiSquared c(4);
  EXPECT_EQ(c.dof(), 4);
  EXPECT_DOUBLE_EQ(c.cdf(3.0), chisq_cdf(3.0, 4));
  EXPECT_DOUBLE_EQ(c.sf(3.0), chisq_sf(3.0, 4));
  EXPECT_DOUBLE_EQ(c.quantile(0.3), chisq_quantile(0.3, 4));
}

TEST(ChiSquared, RejectsBadArguments) {
  EXPECT_THROW(chisq_cdf(1.0, 0), DomainError);
  EXPECT_THROW(chisq_quantile(1.5, 3), DomainError);
  EXPECT_THROW(chisq_quantile(-0.1, 3), DomainError);
  EXPECT_THROW(ChiSquared(0), DomainError);
}

TEST(Normal, QuantileAtHalfIsZero) { EXPECT_EQ(normal_quantile(0.5), 0.0); }

TEST(Normal, QuantileAt975) { EXPECT_NEAR(normal_quantile(0.975), 1.959964, 1e-5); }

TEST(Normal, QuantileIsAntisymmetric) {
  // Dyadic p keeps 1 - p exact.
  for (double p : {0x1p-30, 0x1p-10, 0.0078125, 0.125, 0.25, 0.375, 0.4921875}) {
    EXPECT_EQ(normal_quantile(p), -normal_quantile(1 - p)) << p;
  }
  for (double p : {1e-10, 1e-4, 0.01, 0.1, 0.4}) {
    EXPECT_NEAR(normal_quantile(p), -normal_quantile(1 - p), 1e-6 * std::abs(normal_quantile(p))) << p;
  }
}

TEST(Normal, CdfAgainstQuadrature) {
  for (double x : {-4.0, -2.0, -0.5, 0.0, 0.3, 1.0, 1.959964, 3.5}) {
    EXPECT_NEAR(normal_cdf(x), normal_cdf_oracle(x), 1e-12) << x;
  }
}

TEST(Normal, QuantileInvertsQuadratureCdf) {
  for (double p : {0.001, 0.05, 0.3, 0.7, 0.975, 0.9999}) {
    EXPECT_NEAR(normal_cdf_oracle(normal_quantile(p)), p, 1e-12) << p;
  }
}

TEST(Rng, SameSeedSameSequence) {
  RngStream a(42, 7), b(42, 7);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, ChildStreamsAreReproducibleAndDistinct) {
  RngStream parent(5, 1);
  RngStream c1 = parent.child(3), c2 = parent.child(3), c3 = parent.child(4);
  EXPECT_EQ(c1.next_u64(), c2.next_u64());
  EXPECT_NE(RngStream(5, 1).child(3).next_u64(), c3.next_u64());
  // Drawing from the parent does not change its children.
  parent.uniform();
  EXPECT_EQ(parent.child(3).next_u64(), RngStream(5, 1).child(3).next_u64());
}

TEST(Rng, UniformStaysInOpenInterval) {
  RngStream s(1, 0);
  for (int i = 0; i < 100000; ++i) {
    const double u = s.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Rng, DistinctStreamsLookIndependent) {
  RngStream a(123, 0), b(123, 1);
  const int n = 10000;
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double x = a.uniform(), y = b.uniform();
    sx += x, sy += y, sxx += x * x, syy += y * y, sxy += x * y;
  }
  const double cov = sxy / n - sx / n * sy / n;
  const double r = cov / std::sqrt((sxx / n - sx * sx / n / n) * (syy / n - sy * sy / n / n));
  EXPECT_LT(std::abs(r), 0.03);
}

TEST(Rng, ExponentialMeanIsOne) {
  RngStream s(9, 9);
  double total = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) total += s.exponential();
  EXPECT_NEAR(total / n, 1.0, 0.015);
}

TEST(PositiveStable, AlphaOneIsDegenerate) {
  RngStream s(2, 2);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(s.positive_stable(1.0), 1.0);
}

TEST(PositiveStable, RejectsAlphaOutsideUnitInterval) {
  RngStream s(2, 2);
  EXPECT_THROW(s.positive_stable(0.0), DomainError);
  EXPECT_THROW(s.positive_stable(1.2), DomainError);
}

// E exp(-t S) = exp(-t^alpha) for the positive stable law.
TEST(PositiveStable, LaplaceTransform) {
  RngStream s(77, 0);
  const int n = 100000;
  std::vector<double> draws(n);
  for (auto& d : draws) d = s.positive_stable(0.5);
  for (double t : {0.5, 1.0, 2.0}) {
    double m = 0;
    for (double d : draws) m += std::exp(-t * d);
    EXPECT_NEAR(m / n, std::exp(-std::pow(t, 0.5)), 0.01) << t;
  }
}

TEST(PositiveStable, LaplaceTransformOtherAlpha) {
  RngStream s(78, 0);
  const int n = 100000;
  for (double alpha : {0.3, 0.8}) {
    double m = 0;
    for (int i = 0; i < n; ++i) m += std::exp(-s.positive_stable(alpha));
    EXPECT_NEAR(m / n, std::exp(-1.0), 0.01) << alpha;
  }
}

}  // namespace
