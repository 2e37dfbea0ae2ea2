#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kltail/divergence.hpp"
#include "kltail/margins.hpp"
#include "kltail/risk_partition.hpp"
#include "kltail/sample.hpp"

namespace kltail {

enum class MarginMode { known, empirical };
// automatic: chi-squared limit with known margins, bootstrap otherwise.
enum class Calibration { automatic, chisq, bootstrap };
// Which population feeds the split-half bootstrap. symmetric resamples both
// and averages the two p-values.
enum class BootstrapSource { x, symmetric };
// Exceedances used inside each half-sample. halved uses k_n / 2, which is
// what the factor 1/2 in the rate correction D(n) = D(n/2) / 2 presumes;
// same keeps k_n.
enum class HalfSampleExceedances { halved, same };

std::string_view to_string(MarginMode mode);
std::string_view to_string(Calibration c);
std::string_view to_string(BootstrapSource s);
std::string_view to_string(HalfSampleExceedances h);

// Builds the partition a (risk, K) pair denotes in dimension d: max and min
// use the orthant schemes (K is implied by d; 0 or the implied value is
// accepted), euclidean and sum use bivariate angular wedges.
Partition make_partition(RiskKind risk, std::size_t sets, std::size_t d,
                         const std::vector<double>& interior_angles = {});

struct TestConfig {
  RiskKind risk = RiskKind::euclidean;
  std::size_t sets = 5;
  std::vector<double> angles;  // optional custom interior angles
  std::size_t k_n = 200;
  double level = 0.05;
  MarginMode margins = MarginMode::known;
  Calibration calibration = Calibration::automatic;
  std::size_t bootstrap = 1000;
  std::uint64_t seed = 1;
  BootstrapSource bootstrap_source = BootstrapSource::x;
  HalfSampleExceedances half_sample = HalfSampleExceedances::halved;
  unsigned workers = 0;

  void validate() const;
  Calibration resolved_calibration() const;
  std::size_t half_sample_k() const;
};

struct KnownMargins {
  std::vector<MarginalCdf> x;
  std::vector<MarginalCdf> y;
};

struct NullDistribution {
  std::vector<double> replicates;  // rate-corrected statistics, replicate order
  std::string source;              // "x" or "y"
  std::size_t k_half = 0;
};

struct NullSummary {
  std::string source;
  std::size_t replicates = 0;
  std::size_t k_half = 0;
  double critical_value = 0.0;  // (1 - level) quantile of the replicates
  double p_value = 0.0;
};

struct TestReport {
  Divergence statistic;
  double p_value = 1.0;
  bool reject = false;
  Calibration method = Calibration::chisq;
  double critical_value = 0.0;  // on the scale of statistic.value
  CellProbabilities cells_x;
  CellProbabilities cells_y;
  std::vector<std::string> cell_labels;
  std::size_t n_x = 0;
  std::size_t n_y = 0;
  std::vector<NullSummary> nulls;
  std::vector<std::string> warnings;
  TestConfig config;
};

// Known margins: a Pareto sample passes through, a raw one needs cdfs.
// Empirical margins: rank standardization of whatever scale is supplied.
Sample standardize(const Sample& sample, MarginMode mode, const std::vector<MarginalCdf>* cdfs = nullptr);

// Divergence between two standardized samples with k exceedances each.
Divergence two_sample_statistic(const Sample& x_std, const Sample& y_std, const Partition& partition,
                                std::size_t k, CellProbabilities* cells_x = nullptr,
                                CellProbabilities* cells_y = nullptr);

// Split-half subsample bootstrap of the null. With known margins the source
// must already be on the Pareto scale; with empirical margins each half is
// re-ranked. Replicate b draws from RngStream(config.seed, stream_tag).child(b).
NullDistribution bootstrap_null(const Sample& source, const TestConfig& config, std::uint64_t stream_tag = 0);

// Fraction of replicates strictly above the observed statistic.
double bootstrap_p_value(double observed, const NullDistribution& null);
double bootstrap_p_value(const Divergence& observed, const NullDistribution& null);

// P(chi^2(K - 1) > k_n D / 2).
double chisq_p_value(const Divergence& observed);
double chisq_critical_value(std::size_t cells, std::size_t k_n, double level);

TestReport run_test(const Sample& x, const Sample& y, const TestConfig& config,
                    const KnownMargins* known = nullptr);

}  // namespace kltail
