#include "kltail/risk_partition.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <utility>

#include "kltail/errors.hpp"

namespace kltail {

std::string_view to_string(RiskKind kind) {
  switch (kind) {
    case RiskKind::max: return "max";
    case RiskKind::min: return "min";
    case RiskKind::euclidean: return "euclidean";
    case RiskKind::sum: return "sum";
  }
  return "unknown";
}

std::optional<RiskKind> parse_risk(std::string_view name) {
  if (name == "max") return RiskKind::max;
  if (name == "min") return RiskKind::min;
  if (name == "euclidean" || name == "l2") return RiskKind::euclidean;
  if (name == "sum" || name == "l1") return RiskKind::sum;
  return std::nullopt;
}

std::string_view to_string(PartitionScheme scheme) {
  switch (scheme) {
    case PartitionScheme::max_orthant: return "max-orthant";
    case PartitionScheme::min_orthant: return "min-orthant";
    case PartitionScheme::angular: return "angular";
  }
  return "unknown";
}

double RiskFunctional::operator()(std::span<const double> x) const {
  switch (kind_) {
    case RiskKind::max: return *std::max_element(x.begin(), x.end());
    case RiskKind::min: return *std::min_element(x.begin(), x.end());
    case RiskKind::euclidean: {
      if (x.size() == 2) return std::hypot(x[0], x[1]);
      double s = 0.0;
      for (double v : x) s += v * v;
      return std::sqrt(s);
    }
    case RiskKind::sum: {
      double s = 0.0;
      for (double v : x) s += std::abs(v);
      return s;
    }
  }
  return 0.0;
}

Partition::Partition(RiskKind risk, PartitionScheme scheme, std::size_t cells, std::size_t dim,
                     std::vector<double> angles)
    : risk_(risk), scheme_(scheme), cells_(cells), dim_(dim), angles_(std::move(angles)) {}

namespace {
constexpr std::size_t kMaxOrthantDim = 16;
}

Partition Partition::max_orthant(std::size_t d) {
  if (d < 2) throw DomainError("max partition needs d >= 2");
  if (d > kMaxOrthantDim) throw DomainError("orthant partitions support d <= 16");
  return Partition(RiskKind::max, PartitionScheme::max_orthant, (std::size_t{1} << d) - 1, d, {});
}

Partition Partition::min_orthant(std::size_t d) {
  if (d < 2) throw DomainError("min partition needs d >= 2");
  if (d > kMaxOrthantDim) throw DomainError("orthant partitions support d <= 16");
  return Partition(RiskKind::min, PartitionScheme::min_orthant, std::size_t{1} << d, d, {});
}

Partition Partition::angular(RiskKind risk, std::size_t cells) {
  if (cells < 2) throw DomainError("angular partition needs K >= 2");
  std::vector<double> interior;
  for (std::size_t j = 1; j < cells; ++j) {
    interior.push_back(std::numbers::pi / 2.0 * static_cast<double>(j) / static_cast<double>(cells));
  }
  return angular(risk, std::move(interior));
}

Partition Partition::angular(RiskKind risk, std::vector<double> interior_angles) {
  if (risk != RiskKind::euclidean && risk != RiskKind::sum) {
    throw DomainError("angular partitions are defined for the euclidean and sum risks");
  }
  if (interior_angles.empty()) throw DomainError("angular partition needs K >= 2");
  std::vector<double> angles;
  angles.reserve(interior_angles.size() + 2);
  angles.push_back(0.0);
  for (double a : interior_angles) {
    if (!(a > angles.back() && a < std::numbers::pi / 2.0)) {
      throw DomainError("angular boundaries must increase strictly inside (0, pi/2)");
    }
    angles.push_back(a);
  }
  angles.push_back(std::numbers::pi / 2.0);
  const std::size_t k = angles.size() - 1;
  return Partition(risk, PartitionScheme::angular, k, 2, std::move(angles));
}

std::optional<std::size_t> Partition::classify(std::span<const double> x, double scale) const {
  if (x.size() != dim_) {
    throw ShapeError("point of dimension " + std::to_string(x.size()) +
                     " classified by a partition of dimension " + std::to_string(dim_));
  }
  switch (scheme_) {
    case PartitionScheme::max_orthant: {
      std::size_t mask = 0;
      for (std::size_t j = 0; j < dim_; ++j) {
        if (x[j] / scale > 1.0) mask |= std::size_t{1} << j;
      }
      if (mask == 0) {
        // Threshold tie: the maximal coordinates sit exactly on the boundary.
        const double m = *std::max_element(x.begin(), x.end());
        if (!(m / scale >= 1.0) || m <= 0.0) return std::nullopt;
        for (std::size_t j = 0; j < dim_; ++j) {
          if (x[j] == m) mask |= std::size_t{1} << j;
        }
      }
      return mask - 1;
    }
    case PartitionScheme::min_orthant: {
      const double m = *std::min_element(x.begin(), x.end());
      if (!(m / scale >= 1.0)) return std::nullopt;
      std::size_t mask = 0;
      for (std::size_t j = 0; j < dim_; ++j) {
        if (x[j] / scale > 2.0) mask |= std::size_t{1} << j;
      }
      return mask;
    }
    case PartitionScheme::angular: {
      if (!(risk_(x) / scale >= 1.0)) return std::nullopt;
      const double theta = std::atan2(x[1], x[0]);
      // First boundary not below theta: theta in (angles[j-1], angles[j]].
      const auto it = std::lower_bound(angles_.begin() + 1, angles_.end(), theta);
      if (it == angles_.end()) return cells_ - 1;
      return static_cast<std::size_t>(it - angles_.begin()) - 1;
    }
  }
  return std::nullopt;
}

std::string Partition::cell_label(std::size_t cell) const {
  if (cell >= cells_) throw DomainError("cell index out of range");
  if (scheme_ == PartitionScheme::angular) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "(%.4f,%.4f]", angles_[cell], angles_[cell + 1]);
    return buf;
  }
  const std::size_t mask = scheme_ == PartitionScheme::max_orthant ? cell + 1 : cell;
  std::string out = "{";
  bool first = true;
  for (std::size_t j = 0; j < dim_; ++j) {
    if (mask & (std::size_t{1} << j)) {
      if (!first) out += ",";
      out += std::to_string(j + 1);
      first = false;
    }
  }
  return out + "}";
}

CellProbabilities count_cells(const Sample& sample, const Partition& partition, std::size_t k_n) {
  const std::size_t n = sample.n();
  if (k_n < 1 || k_n >= n) {
    throw DomainError("exceedance count k_n = " + std::to_string(k_n) + " must satisfy 1 <= k_n < n = " +
                      std::to_string(n));
  }
  if (sample.state() == MarginState::raw) {
    throw DomainError("count_cells expects a Pareto or pseudo-observation sample");
  }
  if (sample.d() != partition.dimension()) throw ShapeError("sample and partition dimensions differ");

  // (risk, row) pairs; lexicographic order equals a stable sort by risk.
  std::vector<std::pair<double, std::size_t>> risks(n);
  for (std::size_t i = 0; i < n; ++i) risks[i] = {partition.risk()(sample.row(i)), i};
  const auto split = risks.begin() + static_cast<std::ptrdiff_t>(n - k_n);
  std::nth_element(risks.begin(), split, risks.end());
  const double threshold = std::max_element(risks.begin(), split)->first;

  CellProbabilities out;
  out.k_n = k_n;
  out.threshold = threshold;
  out.counts.assign(partition.cells(), 0);
  for (auto it = split; it != risks.end(); ++it) {
    const auto cell = partition.classify(sample.row(it->second), threshold);
    if (!cell) throw NumericalError("exceedance fell outside the partitioned region");
    ++out.counts[*cell];
  }
  out.probs.resize(out.counts.size());
  for (std::size_t j = 0; j < out.counts.size(); ++j) {
    out.probs[j] = static_cast<double>(out.counts[j]) / static_cast<double>(k_n);
  }
  return out;
}

}  // namespace kltail
