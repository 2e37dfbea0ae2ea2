#include "kltail/divergence.hpp"

#include <algorithm>
#include <cmath>

#include "kltail/errors.hpp"
#include "kltail/special_functions.hpp"

namespace kltail {

double jeffreys_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw ShapeError("probability vectors differ in length");
  double sum = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p[j] == q[j]) continue;
    sum += (p[j] - q[j]) * (std::log(p[j]) - std::log(q[j]));
  }
  return sum;
}

std::pair<std::vector<double>, std::vector<double>> zero_adjusted(const CellProbabilities& p,
                                                                  const CellProbabilities& q,
                                                                  bool* corrected) {
  if (p.counts.size() != q.counts.size()) {
    throw ShapeError("cell tables have different numbers of cells (" + std::to_string(p.counts.size()) +
                     " vs " + std::to_string(q.counts.size()) + ")");
  }
  const bool any_zero = std::ranges::find(p.counts, 0u) != p.counts.end() ||
                        std::ranges::find(q.counts, 0u) != q.counts.end();
  if (corrected) *corrected = any_zero;
  if (!any_zero) return {p.probs, q.probs};

  auto adjust = [](const CellProbabilities& t) {
    const double denom = static_cast<double>(t.k_n) + 0.5 * static_cast<double>(t.counts.size());
    std::vector<double> out(t.counts.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = (static_cast<double>(t.counts[j]) + 0.5) / denom;
    return out;
  };
  return {adjust(p), adjust(q)};
}

Divergence kl_divergence(const CellProbabilities& p, const CellProbabilities& q) {
  if (p.k_n != q.k_n) {
    throw ShapeError("cell tables use different exceedance counts (" + std::to_string(p.k_n) + " vs " +
                     std::to_string(q.k_n) + ")");
  }
  Divergence out;
  const auto [pa, qa] = zero_adjusted(p, q, &out.zero_corrected);
  out.value = std::max(0.0, jeffreys_divergence(pa, qa));
  out.normalized = static_cast<double>(p.k_n) * out.value / 2.0;
  out.cells = p.counts.size();
  out.k_n = p.k_n;
  return out;
}

ExtremalCorrelation extremal_correlation(const Sample& sample, double quantile_level) {
  if (sample.d() != 2) throw ShapeError("extremal correlation is bivariate");
  if (!(quantile_level > 0.0 && quantile_level < 1.0)) {
    throw DomainError("quantile level must lie in (0, 1)");
  }
  const double u = 1.0 / (1.0 - quantile_level);
  std::size_t cond = 0;
  std::size_t joint = 0;
  for (std::size_t i = 0; i < sample.n(); ++i) {
    if (sample(i, 0) > u) {
      ++cond;
      if (sample(i, 1) > u) ++joint;
    }
  }
  if (cond < 10) {
    throw InsufficientDataError("only " + std::to_string(cond) + " exceedances of the first coordinate at level " +
                                std::to_string(quantile_level) + " (need 10)");
  }
  ExtremalCorrelation out;
  out.conditioning = cond;
  out.chi = static_cast<double>(joint) / static_cast<double>(cond);
  const double half = normal_quantile(0.975) * std::sqrt(out.chi * (1.0 - out.chi) / static_cast<double>(cond));
  out.ci_low = std::clamp(out.chi - half, 0.0, 1.0);
  out.ci_high = std::clamp(out.chi + half, 0.0, 1.0);
  return out;
}

std::vector<double> max_cells_from_chi(double chi) {
  if (!(chi >= 0.0 && chi < 1.0)) throw DomainError("extremal correlation must lie in [0, 1)");
  const double denom = 2.0 - chi;
  // Max-partition cell order: {1}, {2}, {1,2}.
  return {(1.0 - chi) / denom, (1.0 - chi) / denom, chi / denom};
}

double d3_from_chi(double chi_x, double chi_y) {
  if (!(chi_x >= 0.0 && chi_x < 1.0) || !(chi_y >= 0.0 && chi_y < 1.0)) {
    throw DomainError("d3_from_chi needs both extremal correlations in [0, 1)");
  }
  const double p1 = chi_x / (2.0 - chi_x);
  const double q1 = chi_y / (2.0 - chi_y);
  const double p2 = (1.0 - chi_x) / (2.0 - chi_x);
  const double q2 = (1.0 - chi_y) / (2.0 - chi_y);
  // Both-extreme cell, then twice the (equal) single-coordinate cells.
  const double both = p1 == q1 ? 0.0 : (p1 - q1) * (std::log(p1) - std::log(q1));
  const double single = p2 == q2 ? 0.0 : (p2 - q2) * (std::log(p2) - std::log(q2));
  return both + 2.0 * single;
}

}  // namespace kltail
