#include "kltail/experiments.hpp"

#include <cstdio>
#include <sstream>

#include "kltail/empirical.hpp"
#include "kltail/errors.hpp"
#include "kltail/margins.hpp"
#include "kltail/parallel.hpp"
#include "kltail/rng.hpp"
#include "kltail/special_functions.hpp"

namespace kltail {

void ExperimentPlan::validate() const {
  model_x.validate();
  model_y.validate();
  test.validate();
  if (repetitions < 1) throw ConfigError("experiment needs at least one repetition");
  if (n < 2) throw ConfigError("experiment sample size must be at least 2");
}

namespace {

struct RepOutcome {
  double statistic = 0.0;
  double critical = 0.0;
  bool reject = false;
  bool zero_corrected = false;
};

Sample standardized_draw(const CopulaModel& model, std::size_t n, RngStream stream, MarginMode margins) {
  const Sample raw = sample(model, n, stream);
  if (margins == MarginMode::empirical) return to_pseudo(raw);
  return to_pareto(raw, {cdfs::uniform(), cdfs::uniform()});
}

struct DrawnPair {
  Sample x_raw;
  Sample xs;
  Sample ys;
  bool empirical = false;

  const Sample& source() const { return empirical ? x_raw : xs; }
};

DrawnPair draw_pair(const ExperimentPlan& plan, std::size_t rep_index) {
  const RngStream rep(plan.test.seed, rep_index);
  RngStream sx = rep.child(0);
  RngStream sy = rep.child(1);
  DrawnPair out;
  out.empirical = plan.test.margins == MarginMode::empirical;
  out.x_raw = sample(plan.model_x, plan.n, sx);
  const Sample y_raw = sample(plan.model_y, plan.n, sy);
  if (out.empirical) {
    out.xs = to_pseudo(out.x_raw);
    out.ys = to_pseudo(y_raw);
  } else {
    out.xs = to_pareto(out.x_raw, {cdfs::uniform(), cdfs::uniform()});
    out.ys = to_pareto(y_raw, {cdfs::uniform(), cdfs::uniform()});
  }
  return out;
}

// Outcome of one test given already standardized samples. Bootstrap sources
// are the standardized sample (known margins) or the raw one (empirical).
RepOutcome evaluate(const Sample& xs, const Sample& ys, const Sample& x_source, const Partition& partition,
                    TestConfig config) {
  RepOutcome out;
  const Divergence d = two_sample_statistic(xs, ys, partition, config.k_n);
  out.statistic = d.value;
  out.zero_corrected = d.zero_corrected;
  double p;
  if (config.resolved_calibration() == Calibration::chisq) {
    p = chisq_p_value(d);
    out.critical = chisq_critical_value(partition.cells(), config.k_n, config.level);
  } else {
    config.workers = 1;
    const NullDistribution null = bootstrap_null(x_source, config, 0);
    p = bootstrap_p_value(d, null);
    out.critical = empirical_quantile(null.replicates, 1.0 - config.level);
  }
  out.reject = p < config.level;
  return out;
}

PowerPoint aggregate(std::size_t grid_value, const std::vector<RepOutcome>& reps) {
  PowerPoint p;
  p.grid_value = grid_value;
  p.repetitions = reps.size();
  std::vector<double> stats;
  stats.reserve(reps.size());
  double rejected = 0.0;
  double critical = 0.0;
  for (const auto& r : reps) {
    stats.push_back(r.statistic);
    rejected += r.reject ? 1.0 : 0.0;
    critical += r.critical;
    p.zero_corrected += r.zero_corrected ? 1 : 0;
  }
  p.mean_statistic = mean(stats);
  p.q05_statistic = empirical_quantile(stats, 0.05);
  p.q95_statistic = empirical_quantile(stats, 0.95);
  p.rejection_fraction = rejected / static_cast<double>(reps.size());
  p.critical_value = critical / static_cast<double>(reps.size());
  return p;
}

// Per-repetition test config: bootstrap replicates need their own seed.
TestConfig rep_config(const TestConfig& base, std::size_t rep) {
  TestConfig c = base;
  c.seed = splitmix64(base.seed ^ splitmix64(0xb0075742ULL + rep));
  return c;
}

}  // namespace

PowerCurve size_power_study(const ExperimentPlan& plan) {
  plan.validate();
  if (plan.k_grid.empty()) throw ConfigError("size/power study needs a non-empty k_n grid");
  for (std::size_t k : plan.k_grid) {
    if (k >= plan.n) throw ConfigError("k_n grid value " + std::to_string(k) + " is not below n");
  }
  const Partition partition = make_partition(plan.test.risk, plan.test.sets, 2, plan.test.angles);
  const std::size_t grid = plan.k_grid.size();
  std::vector<std::vector<RepOutcome>> outcomes(grid, std::vector<RepOutcome>(plan.repetitions));

  parallel_for(plan.repetitions, plan.test.workers, [&](std::size_t r) {
    const DrawnPair data = draw_pair(plan, r);
    for (std::size_t g = 0; g < grid; ++g) {
      TestConfig config = rep_config(plan.test, r);
      config.k_n = plan.k_grid[g];
      outcomes[g][r] = evaluate(data.xs, data.ys, data.source(), partition, config);
    }
  });

  PowerCurve curve;
  curve.grid_name = "k_n";
  for (std::size_t g = 0; g < grid; ++g) curve.points.push_back(aggregate(plan.k_grid[g], outcomes[g]));
  return curve;
}

PowerCurve k_sensitivity_study(const ExperimentPlan& plan) {
  plan.validate();
  if (plan.sets_grid.empty()) throw ConfigError("K study needs a non-empty sets grid");
  if (plan.test.risk != RiskKind::euclidean && plan.test.risk != RiskKind::sum) {
    throw ConfigError("K study varies angular partitions; use the euclidean or sum risk");
  }
  std::vector<Partition> partitions;
  for (std::size_t k : plan.sets_grid) {
    if (k < 2 || k > 12) throw ConfigError("K grid values must lie in 2..12");
    partitions.push_back(Partition::angular(plan.test.risk, k));
  }
  const Partition baseline = Partition::max_orthant(2);
  const std::size_t grid = partitions.size();
  std::vector<std::vector<RepOutcome>> outcomes(grid + 1, std::vector<RepOutcome>(plan.repetitions));

  parallel_for(plan.repetitions, plan.test.workers, [&](std::size_t r) {
    const DrawnPair data = draw_pair(plan, r);
    for (std::size_t g = 0; g <= grid; ++g) {
      TestConfig config = rep_config(plan.test, r);
      const Partition& part = g < grid ? partitions[g] : baseline;
      config.risk = part.risk().kind();
      config.sets = part.cells();
      outcomes[g][r] = evaluate(data.xs, data.ys, data.source(), part, config);
    }
  });

  PowerCurve curve;
  curve.grid_name = "sets";
  for (std::size_t g = 0; g < grid; ++g) curve.points.push_back(aggregate(plan.sets_grid[g], outcomes[g]));
  curve.baseline = aggregate(baseline.cells(), outcomes[grid]);
  return curve;
}

NullStudy null_histogram_study(const CopulaModel& model, std::size_t n, const TestConfig& test,
                               std::size_t replicates) {
  test.validate();
  model.validate();
  if (replicates < 1) throw ConfigError("null study needs at least one replicate");
  const Partition partition = make_partition(test.risk, test.sets, 2, test.angles);
  const bool empirical = test.margins == MarginMode::empirical;

  NullStudy study;
  {
    RngStream stream(test.seed, 0);
    const Sample raw = sample(model, n, stream);
    const Sample source = empirical ? raw : to_pareto(raw, {cdfs::uniform(), cdfs::uniform()});
    TestConfig config = test;
    config.bootstrap = replicates;
    study.bootstrap = bootstrap_null(source, config, 0).replicates;
  }

  study.fresh.resize(replicates);
  const RngStream fresh_base(test.seed, 1);
  parallel_for(replicates, test.workers, [&](std::size_t b) {
    const RngStream pair = fresh_base.child(b);
    const Sample xs = standardized_draw(model, n, pair.child(0), test.margins);
    const Sample ys = standardized_draw(model, n, pair.child(1), test.margins);
    study.fresh[b] = two_sample_statistic(xs, ys, partition, test.k_n).value;
  });

  const ChiSquared limit(static_cast<int>(partition.cells()) - 1);
  const auto chisq = [&](double v) { return limit.cdf(v); };
  const double scale = static_cast<double>(test.k_n) / 2.0;
  std::vector<double> fresh_norm;
  std::vector<double> boot_norm;
  for (double v : study.fresh) fresh_norm.push_back(scale * v);
  for (double v : study.bootstrap) boot_norm.push_back(scale * v);
  study.ks_bootstrap_vs_fresh = ks_two_sample(study.bootstrap, study.fresh);
  study.ks_fresh_vs_chisq = ks_one_sample(fresh_norm, chisq);
  study.ks_bootstrap_vs_chisq = ks_one_sample(boot_norm, chisq);
  return study;
}

std::string power_curve_csv(const PowerCurve& curve) {
  std::ostringstream out;
  out.precision(17);
  out << "grid,grid_value,aggregate,estimate\n";
  auto emit = [&](const std::string& grid, const PowerPoint& p) {
    out << grid << ',' << p.grid_value << ",mean_statistic," << p.mean_statistic << '\n'
        << grid << ',' << p.grid_value << ",q05_statistic," << p.q05_statistic << '\n'
        << grid << ',' << p.grid_value << ",q95_statistic," << p.q95_statistic << '\n'
        << grid << ',' << p.grid_value << ",rejection_fraction," << p.rejection_fraction << '\n'
        << grid << ',' << p.grid_value << ",critical_value," << p.critical_value << '\n'
        << grid << ',' << p.grid_value << ",zero_corrected," << p.zero_corrected << '\n';
  };
  for (const auto& p : curve.points) emit(curve.grid_name, p);
  if (curve.baseline) emit("max_baseline", *curve.baseline);
  return out.str();
}

std::string null_study_csv(const NullStudy& study) {
  std::ostringstream out;
  out.precision(17);
  out << "replicate,bootstrap,fresh\n";
  const std::size_t rows = std::max(study.bootstrap.size(), study.fresh.size());
  for (std::size_t i = 0; i < rows; ++i) {
    out << i << ',';
    if (i < study.bootstrap.size()) out << study.bootstrap[i];
    out << ',';
    if (i < study.fresh.size()) out << study.fresh[i];
    out << '\n';
  }
  return out.str();
}

}  // namespace kltail
