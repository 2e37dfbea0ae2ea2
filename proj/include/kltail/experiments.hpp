#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "kltail/copulas.hpp"
#include "kltail/inference.hpp"

namespace kltail {

// Monte Carlo plan. Repetition r draws its X sample from
// RngStream(test.seed, r).child(0) and its Y sample from .child(1), so any
// subset of repetitions can be re-run on its own.
struct ExperimentPlan {
  CopulaModel model_x = CopulaModel::outer_power_clayton(0.45);
  CopulaModel model_y = CopulaModel::outer_power_clayton(0.45);
  std::size_t n = 2000;
  std::size_t repetitions = 500;
  std::vector<std::size_t> k_grid;     // size_power_study
  std::vector<std::size_t> sets_grid;  // k_sensitivity_study, with test.k_n fixed
  TestConfig test;                     // risk, sets, level, margins, bootstrap, seed, workers

  void validate() const;
};

struct PowerPoint {
  std::size_t grid_value = 0;
  double mean_statistic = 0.0;
  double q05_statistic = 0.0;
  double q95_statistic = 0.0;
  double rejection_fraction = 0.0;
  double critical_value = 0.0;  // mean over repetitions (constant for chisq)
  std::size_t repetitions = 0;
  std::size_t zero_corrected = 0;
};

struct PowerCurve {
  std::string grid_name;  // "k_n" or "sets"
  std::vector<PowerPoint> points;
  std::optional<PowerPoint> baseline;  // max-risk K = 3, K studies only
};

// Rejection fraction and statistic quantiles for each k_n in plan.k_grid.
PowerCurve size_power_study(const ExperimentPlan& plan);

// Rejection fraction for each K in plan.sets_grid (angular partitions of
// plan.test.risk), with the max-risk baseline on the same data.
PowerCurve k_sensitivity_study(const ExperimentPlan& plan);

struct NullStudy {
  std::vector<double> bootstrap;  // rate-corrected split-half replicates
  std::vector<double> fresh;      // statistics between independent fresh sample pairs
  double ks_bootstrap_vs_fresh = 0.0;
  double ks_fresh_vs_chisq = 0.0;      // of k_n D / 2 against chi^2(K - 1)
  double ks_bootstrap_vs_chisq = 0.0;  // idem
};

// Bootstrap null from one source sample (RngStream(seed, 0)) against
// `replicates` fresh H0 statistics (pair b from RngStream(seed, 1).child(b)).
NullStudy null_histogram_study(const CopulaModel& model, std::size_t n, const TestConfig& test,
                               std::size_t replicates);

// Long-format table: one row per (grid value, aggregate).
std::string power_curve_csv(const PowerCurve& curve);
std::string null_study_csv(const NullStudy& study);

}  // namespace kltail
