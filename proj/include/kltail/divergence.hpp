#pragma once

#include <span>
#include <vector>

#include "kltail/risk_partition.hpp"
#include "kltail/sample.hpp"

namespace kltail {

struct Divergence {
  double value = 0.0;       // sum_j (p_j - q_j)(log p_j - log q_j)
  double normalized = 0.0;  // k_n * value / 2
  std::size_t cells = 0;
  std::size_t k_n = 0;
  bool zero_corrected = false;
};

// Symmetrized (Jeffreys) divergence of two strictly positive probability
// vectors. No zero handling.
double jeffreys_divergence(std::span<const double> p, std::span<const double> q);

// Cell probabilities used by kl_divergence: unchanged when every count in
// both tables is positive, otherwise (c + 1/2) / (k_n + K/2) for both.
std::pair<std::vector<double>, std::vector<double>> zero_adjusted(const CellProbabilities& p,
                                                                  const CellProbabilities& q,
                                                                  bool* corrected = nullptr);

Divergence kl_divergence(const CellProbabilities& p, const CellProbabilities& q);

struct ExtremalCorrelation {
  double chi = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t conditioning = 0;  // #{X1 > u}
};

// Empirical chi(v) = #{X1 > u, X2 > u} / #{X1 > u} at u = 1 / (1 - v), with
// a Wald 95% interval truncated to [0, 1]. Requires d = 2 and at least 10
// conditioning exceedances.
ExtremalCorrelation extremal_correlation(const Sample& sample, double quantile_level);

// Max-risk cell probabilities implied by an extremal correlation:
// (1 - chi, 1 - chi, chi) / (2 - chi) for cells {1}, {2}, {1,2}.
std::vector<double> max_cells_from_chi(double chi);

// Closed-form three-cell divergence of the max-risk partition as a function
// of the two extremal correlations.
double d3_from_chi(double chi_x, double chi_y);

}  // namespace kltail
