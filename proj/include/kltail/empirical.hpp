#pragma once

#include <functional>
#include <span>
#include <vector>

namespace kltail {

// sup_x |F_n(x) - F(x)|.
double ks_one_sample(std::span<const double> values, const std::function<double(double)>& cdf);
// sup_x |F_n(x) - G_m(x)|.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

// Linear-interpolation (type 7) quantile.
double empirical_quantile(std::span<const double> values, double p);
double mean(std::span<const double> values);

}  // namespace kltail
