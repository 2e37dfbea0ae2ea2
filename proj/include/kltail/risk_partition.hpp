#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kltail/sample.hpp"

namespace kltail {

enum class RiskKind { max, min, euclidean, sum };

std::string_view to_string(RiskKind kind);
// Accepts both the long names and the CLI aliases l2 / l1.
std::optional<RiskKind> parse_risk(std::string_view name);

// A 1-homogeneous map from the positive orthant to [0, inf).
class RiskFunctional {
 public:
  explicit RiskFunctional(RiskKind kind) : kind_(kind) {}

  RiskKind kind() const noexcept { return kind_; }
  double operator()(std::span<const double> x) const;

 private:
  RiskKind kind_;
};

enum class PartitionScheme { max_orthant, min_orthant, angular };

std::string_view to_string(PartitionScheme scheme);

// K disjoint cells covering {x : r(x) > 1}. Cells are 0-based here; reports
// label them 1..K.
class Partition {
 public:
  // Orthant cells I = {j : x_j > 1}, I non-empty; K = 2^d - 1. Cell index is
  // the bitmask of I minus one.
  static Partition max_orthant(std::size_t d);
  // Given min(x) > 1, cells I = {j : x_j > 2} including the empty and full
  // sets; K = 2^d. Cell index is the bitmask of I.
  static Partition min_orthant(std::size_t d);
  // Bivariate angular wedges (theta_{j-1}, theta_j] of arctan(x2/x1) with
  // equally spaced theta_j = (pi/2) j / K. Points on the x1-axis go to cell 0.
  static Partition angular(RiskKind risk, std::size_t cells);
  // Same with explicit interior boundaries 0 < b_1 < ... < b_{K-1} < pi/2.
  static Partition angular(RiskKind risk, std::vector<double> interior_angles);

  const RiskFunctional& risk() const noexcept { return risk_; }
  PartitionScheme scheme() const noexcept { return scheme_; }
  std::size_t cells() const noexcept { return cells_; }
  std::size_t dimension() const noexcept { return dim_; }
  const std::vector<double>& angles() const noexcept { return angles_; }

  // Cell of x / scale for a point with r(x) >= scale. Points exactly on the
  // risk boundary (r(x) == scale, which only happens for threshold ties) are
  // treated as lying just above it. Returns nullopt outside the region.
  std::optional<std::size_t> classify(std::span<const double> x, double scale = 1.0) const;

  // Human-readable label of a cell, e.g. "{1,2}" or "(0.3927,0.7854]".
  std::string cell_label(std::size_t cell) const;

 private:
  Partition(RiskKind risk, PartitionScheme scheme, std::size_t cells, std::size_t dim,
            std::vector<double> angles);

  RiskFunctional risk_;
  PartitionScheme scheme_;
  std::size_t cells_;
  std::size_t dim_;
  std::vector<double> angles_;  // K+1 boundaries for the angular scheme
};

// Per-sample cell counts out of exactly k exceedances.
struct CellProbabilities {
  std::vector<double> probs;
  std::vector<std::size_t> counts;
  std::size_t k_n = 0;
  double threshold = 0.0;
};

// Classifies the k_n observations with the largest risk values (stable order
// on ties, so exactly k_n are used) relative to the threshold
// u = R_{n-k_n, n}, the (n - k_n)-th order statistic of the risks.
CellProbabilities count_cells(const Sample& sample, const Partition& partition, std::size_t k_n);

}  // namespace kltail
