#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include "kltail/copulas.hpp"
#include "kltail/errors.hpp"
#include "kltail/margins.hpp"
#include "kltail/risk_partition.hpp"
#include "kltail/rng.hpp"

namespace {

using namespace kltail;
constexpr double kPi = std::numbers::pi;

std::optional<std::size_t> classify(const Partition& p, std::vector<double> x) { return p.classify(x); }

TEST(Risk, Values) {
  const std::vector<double> x{3.0, 4.0};
  EXPECT_EQ(RiskFunctional(RiskKind::max)(x), 4.0);
  EXPECT_EQ(RiskFunctional(RiskKind::min)(x), 3.0);
  EXPECT_EQ(RiskFunctional(RiskKind::euclidean)(x), 5.0);
  EXPECT_EQ(RiskFunctional(RiskKind::sum)(x), 7.0);
}

TEST(Risk, ParseNames) {
  EXPECT_EQ(parse_risk("l2"), RiskKind::euclidean);
  EXPECT_EQ(parse_risk("l1"), RiskKind::sum);
  EXPECT_EQ(parse_risk("max"), RiskKind::max);
  EXPECT_FALSE(parse_risk("median").has_value());
}

TEST(Risk, HomogeneousOfDegreeOne) {
  RngStream s(1, 0);
  for (RiskKind kind : {RiskKind::max, RiskKind::min, RiskKind::euclidean, RiskKind::sum}) {
    RiskFunctional r(kind);
    for (int i = 0; i < 1000; ++i) {
      std::vector<double> x{1 / s.uniform(), 1 / s.uniform(), 1 / s.uniform()};
      const double t = 0.01 + 100 * s.uniform();
      std::vector<double> tx{t * x[0], t * x[1], t * x[2]};
      EXPECT_LE(std::abs(r(tx) - t * r(x)), 1e-12 * t * r(x));
    }
  }
}

TEST(MaxPartition, TwoDimensionalCells) {
  const auto p = Partition::max_orthant(2);
  EXPECT_EQ(p.cells(), 3u);
  EXPECT_EQ(p.cell_label(*classify(p, {1.5, 0.7})), "{1}");
  EXPECT_EQ(p.cell_label(*classify(p, {0.2, 1.1})), "{2}");
  EXPECT_EQ(p.cell_label(*classify(p, {1.5, 1.5})), "{1,2}");
  EXPECT_FALSE(classify(p, {0.9, 0.5}).has_value());
}

TEST(MaxPartition, ThreeDimensionsIsExhaustive) {
  const auto p = Partition::max_orthant(3);
  EXPECT_EQ(p.cells(), 7u);
  RngStream s(2, 0);
  std::vector<std::size_t> counts(7, 0);
  int drawn = 0;
  while (drawn < 10000) {
    std::vector<double> x{3 * s.uniform(), 3 * s.uniform(), 3 * s.uniform()};
    if (std::max({x[0], x[1], x[2]}) <= 1) continue;
    ++drawn;
    const auto c = p.classify(x);
    ASSERT_TRUE(c.has_value());
    ++counts.at(*c);
  }
  std::size_t total = 0;
  for (auto c : counts) {
    EXPECT_GT(c, 0u);
    total += c;
  }
  EXPECT_EQ(total, 10000u);
}

TEST(MinPartition, TwoDimensionalCells) {
  const auto p = Partition::min_orthant(2);
  EXPECT_EQ(p.cells(), 4u);
  EXPECT_EQ(p.cell_label(*classify(p, {1.5, 1.5})), "{}");
  EXPECT_EQ(p.cell_label(*classify(p, {3.0, 1.2})), "{1}");
  EXPECT_EQ(p.cell_label(*classify(p, {1.2, 3.0})), "{2}");
  EXPECT_EQ(p.cell_label(*classify(p, {3.0, 3.0})), "{1,2}");
  EXPECT_FALSE(classify(p, {3.0, 0.9}).has_value());
}

TEST(MinPartition, GridCoversAllFourCells) {
  const auto p = Partition::min_orthant(2);
  std::set<std::size_t> seen;
  for (int i = 1; i <= 60; ++i) {
    for (int j = 1; j <= 60; ++j) {
      const auto c = classify(p, {1 + 3.0 * i / 60, 1 + 3.0 * j / 60});
      ASSERT_TRUE(c.has_value());
      seen.insert(*c);
    }
  }
  EXPECT_EQ(seen.size(), 4u);
}

TEST(AngularPartition, DiagonalFallsInSecondOfFourCells) {
  const auto p = Partition::angular(RiskKind::euclidean, 4);
  const double s = 2 / std::sqrt(2.0);
  EXPECT_EQ(classify(p, {s, s}), 1u);
  EXPECT_EQ(p.angles().size(), 5u);
}

TEST(AngularPartition, FiveEqualWedges) {
  const auto p = Partition::angular(RiskKind::euclidean, 5);
  for (std::size_t j = 0; j < 5; ++j) {
    const double mid = (j + 0.5) * kPi / 10;
    EXPECT_EQ(classify(p, {2 * std::cos(mid), 2 * std::sin(mid)}), j);
    EXPECT_NEAR(p.angles()[j + 1], (j + 1) * kPi / 10, 1e-15);
  }
  // Axes belong to the outer cells.
  EXPECT_EQ(classify(p, {2, 0}), 0u);
  EXPECT_EQ(classify(p, {0, 2}), 4u);
}

TEST(AngularPartition, CustomAngles) {
  const auto p = Partition::angular(RiskKind::sum, std::vector<double>{0.3, 1.0});
  EXPECT_EQ(p.cells(), 3u);
  EXPECT_EQ(classify(p, {2, 0.1}), 0u);
  EXPECT_THROW(Partition::angular(RiskKind::sum, std::vector<double>{1.0, 0.3}), DomainError);
  EXPECT_THROW(Partition::angular(RiskKind::max, 3), DomainError);
  EXPECT_THROW(Partition::angular(RiskKind::euclidean, 1), DomainError);
}

TEST(AngularPartition, ConeStable) {
  RngStream s(5, 0);
  for (RiskKind kind : {RiskKind::euclidean, RiskKind::sum}) {
    const auto p = Partition::angular(kind, 5);
    for (int i = 0; i < 10000; ++i) {
      std::vector<double> x{1 / s.uniform(), 1 / s.uniform()};
      if (RiskFunctional(kind)(x) <= 1) continue;
      const auto a = classify(p, x);
      const auto b = classify(p, {3 * x[0], 3 * x[1]});
      ASSERT_TRUE(a.has_value());
      ASSERT_EQ(a, b);
    }
  }
}

// Sorted-order exceedance selection and classification written without the
// library's partition code.
std::vector<std::size_t> brute_force_counts(const Sample& s, RiskKind kind, std::size_t k, std::size_t cells,
                                            PartitionScheme scheme) {
  const std::size_t n = s.n();
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = s(i, 0), b = s(i, 1);
    switch (kind) {
      case RiskKind::max: r[i] = a > b ? a : b; break;
      case RiskKind::min: r[i] = a < b ? a : b; break;
      case RiskKind::euclidean: r[i] = std::sqrt(a * a + b * b); break;
      case RiskKind::sum: r[i] = a + b; break;
    }
  }
  std::vector<bool> exceeds(n);
  double u = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t below = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (r[j] < r[i] || (r[j] == r[i] && j < i)) ++below;
    }
    exceeds[i] = below >= n - k;
    if (!exceeds[i]) u = std::max(u, r[i]);
  }
  std::vector<std::size_t> counts(cells, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!exceeds[i]) continue;
    const double a = s(i, 0) / u, b = s(i, 1) / u;
    std::size_t cell = 0;
    if (scheme == PartitionScheme::max_orthant) {
      bool e1 = a > 1, e2 = b > 1;
      if (!e1 && !e2) e1 = a >= b, e2 = b >= a;
      cell = (e1 && e2) ? 2 : (e1 ? 0 : 1);
    } else if (scheme == PartitionScheme::min_orthant) {
      cell = (a > 2 ? 1 : 0) + (b > 2 ? 2 : 0);
    } else {
      const double ang = std::atan2(b, a);
      cell = cells - 1;
      for (std::size_t c = 0; c < cells; ++c) {
        if (ang <= (c + 1) * (kPi / 2) / cells) {
          cell = c;
          break;
        }
      }
      // Equal-width boundaries computed in a different order can differ in
      // the last bit; points exactly on a boundary are not generated below.
    }
    ++counts[cell];
  }
  return counts;
}

TEST(CountCells, MatchesBruteForceOnSmallInstances) {
  RngStream s(6, 0);
  for (int inst = 0; inst < 100; ++inst) {
    const std::size_t n = 5 + static_cast<std::size_t>(s.uniform() * 46);
    std::vector<double> v(2 * n);
    for (auto& x : v) x = 1 / s.uniform();
    Sample sample(2, v, MarginState::pareto);
    const std::size_t k = 1 + static_cast<std::size_t>(s.uniform() * (n - 1));
    const int which = inst % 4;
    Partition p = which == 0   ? Partition::max_orthant(2)
                  : which == 1 ? Partition::min_orthant(2)
                  : which == 2 ? Partition::angular(RiskKind::euclidean, 4)
                               : Partition::angular(RiskKind::sum, 5);
    const auto got = count_cells(sample, p, k);
    const auto want = brute_force_counts(sample, p.risk().kind(), k, p.cells(), p.scheme());
    EXPECT_EQ(got.counts, want) << "instance " << inst;
    double total = 0;
    for (double q : got.probs) total += q;
    EXPECT_NEAR(total, 1.0, 1e-15);
  }
}

TEST(CountCells, AllInOneCell) {
  Sample s(2, {1.1, 1.0, 5.0, 1.0, 7.0, 1.0, 9.0, 1.0}, MarginState::pareto);
  const auto c = count_cells(s, Partition::max_orthant(2), 2);
  EXPECT_EQ(c.probs, (std::vector<double>{1.0, 0.0, 0.0}));
  EXPECT_EQ(c.threshold, 5.0);
}

TEST(CountCells, ProbabilitiesSumToOneOnSimulatedData) {
  RngStream s(7, 0);
  Sample raw = sample(CopulaModel::outer_power_clayton(0.45), 2000, s);
  Sample p = to_pareto(raw, {cdfs::uniform(), cdfs::uniform()});
  const auto c = count_cells(p, Partition::angular(RiskKind::euclidean, 5), 200);
  std::size_t total = 0;
  for (auto k : c.counts) total += k;
  EXPECT_EQ(total, 200u);
  double sum = 0;
  for (double q : c.probs) sum += q;
  EXPECT_EQ(sum, 1.0);
}

TEST(CountCells, RejectsBadArguments) {
  Sample s(2, {1.5, 2.0, 3.0, 1.2}, MarginState::pareto);
  EXPECT_THROW(count_cells(s, Partition::max_orthant(2), 0), DomainError);
  EXPECT_THROW(count_cells(s, Partition::max_orthant(2), 2), DomainError);
  EXPECT_THROW(count_cells(s, Partition::max_orthant(3), 1), ShapeError);
  s.set_state(MarginState::raw);
  EXPECT_THROW(count_cells(s, Partition::max_orthant(2), 1), DomainError);
}

TEST(CountCells, ExhaustiveOnRandomExceedanceRegionPoints) {
  RngStream s(8, 0);
  const std::vector<Partition> parts{Partition::max_orthant(2), Partition::min_orthant(2),
                                     Partition::angular(RiskKind::euclidean, 7),
                                     Partition::angular(RiskKind::sum, 3)};
  for (const auto& p : parts) {
    int hits = 0;
    while (hits < 100000) {
      std::vector<double> x{2 / s.uniform() - 1, 2 / s.uniform() - 1};
      if (!(p.risk()(x) > 1)) continue;
      ++hits;
      const auto c = p.classify(x);
      ASSERT_TRUE(c.has_value());
      ASSERT_LT(*c, p.cells());
    }
  }
}

}  // namespace
