#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "kltail/errors.hpp"
#include "kltail/margins.hpp"
#include "kltail/rng.hpp"
#include "kltail/sample.hpp"

namespace {

using namespace kltail;

Sample column_sample(std::vector<double> v) { return Sample(1, std::move(v)); }

TEST(Sample, RowMajorAccess) {
  Sample s(2, {1, 2, 3, 4, 5, 6});
  EXPECT_EQ(s.n(), 3u);
  EXPECT_EQ(s.d(), 2u);
  EXPECT_EQ(s(1, 0), 3);
  EXPECT_EQ(s.row(2)[1], 6);
  EXPECT_EQ(s.column(1), (std::vector<double>{2, 4, 6}));
  const std::vector<std::size_t> pick{2, 0};
  const Sample t = s.select_rows(pick);
  EXPECT_EQ(t.column(0), (std::vector<double>{5, 1}));
}

TEST(Sample, RejectsRaggedData) { EXPECT_THROW(Sample(3, {1, 2, 3, 4}), ShapeError); }

TEST(ToPareto, DirectFormula) {
  auto identity = cdfs::uniform();
  const Sample p = to_pareto(column_sample({0.5, 0.0, 0.75}), {identity});
  EXPECT_EQ(p(0, 0), 2.0);
  EXPECT_EQ(p(1, 0), 1.0);
  EXPECT_EQ(p(2, 0), 4.0);
  EXPECT_EQ(p.state(), MarginState::pareto);
}

TEST(ToPareto, AtomAtOneIsDegenerate) {
  try {
    to_pareto(Sample(2, {0.2, 0.3, 0.4, 1.0}), {cdfs::uniform(), cdfs::uniform()});
    FAIL() << "expected DegenerateMarginError";
  } catch (const DegenerateMarginError& e) {
    EXPECT_EQ(e.row(), 1u);
    EXPECT_EQ(e.coordinate(), 1u);
  }
}

TEST(ToPareto, MedianOfUniformDrawsIsTwo) {
  RngStream s(11, 0);
  const std::size_t n = 100000;
  std::vector<double> u(n);
  for (auto& v : u) v = s.uniform();
  Sample p = to_pareto(column_sample(u), {cdfs::uniform()});
  auto col = p.column(0);
  std::nth_element(col.begin(), col.begin() + n / 2, col.end());
  EXPECT_NEAR(col[n / 2], 2.0, 0.05);
}

TEST(ToPareto, RequiresRawInputAndOneCdfPerColumn) {
  Sample s(2, {0.1, 0.2});
  EXPECT_THROW(to_pareto(s, {cdfs::uniform()}), ShapeError);
  s.set_state(MarginState::pareto);
  EXPECT_THROW(to_pareto(s, {cdfs::uniform(), cdfs::uniform()}), DomainError);
}

TEST(ToPareto, ParametricStubs) {
  EXPECT_DOUBLE_EQ(cdfs::unit_pareto()(4.0), 0.75);
  EXPECT_DOUBLE_EQ(cdfs::unit_exponential()(std::log(2.0)), 0.5);
}

TEST(ToPseudo, WorkedExample) {
  const Sample p = to_pseudo(column_sample({3.2, 7.1, 0.4, 5.0}));
  EXPECT_EQ(p.column(0), (std::vector<double>{5.0 / 3, 5.0, 5.0 / 4, 5.0 / 2}));
  EXPECT_EQ(p.state(), MarginState::pseudo);
}

TEST(ToPseudo, OrdinalRanks) {
  const std::vector<double> v{3.2, 7.1, 0.4, 5.0};
  EXPECT_EQ(ordinal_ranks(v), (std::vector<std::size_t>{2, 4, 1, 3}));
  // Ties broken by position.
  const std::vector<double> t{1.0, 1.0, 0.0};
  EXPECT_EQ(ordinal_ranks(t), (std::vector<std::size_t>{2, 3, 1}));
}

TEST(ToPseudo, ColumnIsExactRankMultiset) {
  RngStream s(3, 3);
  const std::size_t n = 257;
  std::vector<double> v(n * 3);
  for (auto& x : v) x = s.exponential();
  const Sample p = to_pseudo(Sample(3, v));
  for (std::size_t j = 0; j < 3; ++j) {
    auto col = p.column(j);
    std::sort(col.begin(), col.end());
    for (std::size_t r = 1; r <= n; ++r) {
      EXPECT_EQ(col[r - 1], double(n + 1) / double(n + 1 - r));
    }
    EXPECT_EQ(col.back(), double(n + 1));
    EXPECT_GE(col.front(), 1.0);
  }
}

TEST(ToPseudo, MonotoneTransformLeavesOutputUnchanged) {
  RngStream s(4, 0);
  std::vector<double> v(500 * 2);
  for (auto& x : v) x = s.uniform();
  std::vector<double> w = v;
  for (std::size_t i = 0; i < w.size(); i += 2) {
    w[i] = std::exp(5 * w[i]) - 3;
    w[i + 1] = std::atan(w[i + 1]) * 100;
  }
  EXPECT_EQ(to_pseudo(Sample(2, v)), to_pseudo(Sample(2, w)));
}

TEST(ToPseudo, NeedsTwoRows) { EXPECT_THROW(to_pseudo(column_sample({1.0})), InsufficientDataError); }

}  // namespace
