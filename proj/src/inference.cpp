#include "kltail/inference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kltail/empirical.hpp"
#include "kltail/errors.hpp"
#include "kltail/parallel.hpp"
#include "kltail/rng.hpp"
#include "kltail/special_functions.hpp"

namespace kltail {

std::string_view to_string(MarginMode mode) { return mode == MarginMode::known ? "known" : "empirical"; }

std::string_view to_string(Calibration c) {
  switch (c) {
    case Calibration::automatic: return "auto";
    case Calibration::chisq: return "chisq";
    case Calibration::bootstrap: return "bootstrap";
  }
  return "unknown";
}

std::string_view to_string(BootstrapSource s) { return s == BootstrapSource::x ? "x" : "symmetric"; }

std::string_view to_string(HalfSampleExceedances h) {
  return h == HalfSampleExceedances::halved ? "halved" : "same";
}

Partition make_partition(RiskKind risk, std::size_t sets, std::size_t d, const std::vector<double>& interior_angles) {
  switch (risk) {
    case RiskKind::max:
    case RiskKind::min: {
      Partition p = risk == RiskKind::max ? Partition::max_orthant(d) : Partition::min_orthant(d);
      if (sets != 0 && sets != p.cells()) {
        throw ConfigError("the " + std::string(to_string(risk)) + " partition in dimension " + std::to_string(d) +
                          " has " + std::to_string(p.cells()) + " sets, not " + std::to_string(sets));
      }
      return p;
    }
    case RiskKind::euclidean:
    case RiskKind::sum:
      if (d != 2) throw DomainError("angular partitions are only available for d = 2");
      if (!interior_angles.empty()) {
        if (sets != 0 && sets != interior_angles.size() + 1) {
          throw ConfigError("custom angles define " + std::to_string(interior_angles.size() + 1) + " sets");
        }
        return Partition::angular(risk, interior_angles);
      }
      return Partition::angular(risk, sets);
  }
  throw ConfigError("unknown risk functional");
}

void TestConfig::validate() const {
  if (k_n < 1) throw ConfigError("k_n must be at least 1");
  if (!(level > 0.0 && level < 1.0)) throw ConfigError("level must lie in (0, 1)");
  if ((risk == RiskKind::euclidean || risk == RiskKind::sum) && angles.empty() && sets < 2) {
    throw ConfigError("angular partitions need at least 2 sets");
  }
  if (resolved_calibration() == Calibration::bootstrap && bootstrap < 1) {
    throw ConfigError("bootstrap calibration needs at least one replicate");
  }
}

Calibration TestConfig::resolved_calibration() const {
  if (calibration != Calibration::automatic) return calibration;
  return margins == MarginMode::known ? Calibration::chisq : Calibration::bootstrap;
}

std::size_t TestConfig::half_sample_k() const {
  return half_sample == HalfSampleExceedances::halved ? std::max<std::size_t>(1, k_n / 2) : k_n;
}

Sample standardize(const Sample& sample, MarginMode mode, const std::vector<MarginalCdf>* cdfs) {
  if (mode == MarginMode::empirical) return to_pseudo(sample);
  if (sample.state() == MarginState::pareto) return sample;
  if (sample.state() == MarginState::pseudo) {
    throw ConfigError("known-margin test received pseudo-observations");
  }
  if (!cdfs) throw ConfigError("known-margin test on raw data needs marginal cdfs");
  return to_pareto(sample, *cdfs);
}

Divergence two_sample_statistic(const Sample& x_std, const Sample& y_std, const Partition& partition,
                                std::size_t k, CellProbabilities* cells_x, CellProbabilities* cells_y) {
  auto px = count_cells(x_std, partition, k);
  auto py = count_cells(y_std, partition, k);
  const Divergence d = kl_divergence(px, py);
  if (cells_x) *cells_x = std::move(px);
  if (cells_y) *cells_y = std::move(py);
  return d;
}

NullDistribution bootstrap_null(const Sample& source, const TestConfig& config, std::uint64_t stream_tag) {
  config.validate();
  const std::size_t n = source.n();
  if (n < 4 * config.k_n) {
    throw InsufficientDataError("split-half bootstrap needs n >= 4 k_n (n = " + std::to_string(n) +
                                ", k_n = " + std::to_string(config.k_n) + ")");
  }
  if (config.margins == MarginMode::known && source.state() != MarginState::pareto) {
    throw ConfigError("known-margin bootstrap expects a Pareto-scale source");
  }
  const Partition partition = make_partition(config.risk, config.sets, source.d(), config.angles);
  const std::size_t half = n / 2;
  const std::size_t k_half = config.half_sample_k();
  const RngStream base(config.seed, stream_tag);

  NullDistribution out;
  out.source = stream_tag == 0 ? "x" : "y";
  out.k_half = k_half;
  out.replicates.resize(config.bootstrap);
  parallel_for(config.bootstrap, config.workers, [&](std::size_t b) {
    RngStream stream = base.child(b);
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < half; ++i) {
      const std::size_t span = n - i;
      const std::size_t j = i + std::min(span - 1, static_cast<std::size_t>(stream.uniform() * static_cast<double>(span)));
      std::swap(idx[i], idx[j]);
    }
    const std::span<const std::size_t> first(idx.data(), half);
    const std::span<const std::size_t> second(idx.data() + half, n - half);
    Sample a = source.select_rows(first);
    Sample c = source.select_rows(second);
    if (config.margins == MarginMode::empirical) {
      a = to_pseudo(a);
      c = to_pseudo(c);
    }
    out.replicates[b] = two_sample_statistic(a, c, partition, k_half).value / 2.0;
  });
  return out;
}

double bootstrap_p_value(double observed, const NullDistribution& null) {
  if (null.replicates.empty()) throw InsufficientDataError("empty bootstrap null distribution");
  const auto above = std::ranges::count_if(null.replicates, [&](double v) { return v > observed; });
  return static_cast<double>(above) / static_cast<double>(null.replicates.size());
}

double bootstrap_p_value(const Divergence& observed, const NullDistribution& null) {
  return bootstrap_p_value(observed.value, null);
}

double chisq_p_value(const Divergence& observed) {
  return chisq_sf(observed.normalized, static_cast<int>(observed.cells) - 1);
}

double chisq_critical_value(std::size_t cells, std::size_t k_n, double level) {
  return 2.0 * chisq_quantile(1.0 - level, static_cast<int>(cells) - 1) / static_cast<double>(k_n);
}

TestReport run_test(const Sample& x, const Sample& y, const TestConfig& config, const KnownMargins* known) {
  config.validate();
  if (x.d() != y.d()) throw ShapeError("samples have different dimensions");
  if (config.k_n >= std::min(x.n(), y.n())) {
    throw ConfigError("k_n = " + std::to_string(config.k_n) + " must be below both sample sizes (" +
                      std::to_string(x.n()) + ", " + std::to_string(y.n()) + ")");
  }
  const Partition partition = make_partition(config.risk, config.sets, x.d(), config.angles);
  const Sample xs = standardize(x, config.margins, known ? &known->x : nullptr);
  const Sample ys = standardize(y, config.margins, known ? &known->y : nullptr);

  TestReport report;
  report.config = config;
  report.n_x = x.n();
  report.n_y = y.n();
  report.statistic = two_sample_statistic(xs, ys, partition, config.k_n, &report.cells_x, &report.cells_y);
  for (std::size_t j = 0; j < partition.cells(); ++j) report.cell_labels.push_back(partition.cell_label(j));
  if (x.n() != y.n()) report.warnings.push_back("unequal sample sizes; each sample standardized with its own n");

  report.method = config.resolved_calibration();
  if (report.method == Calibration::chisq) {
    report.p_value = chisq_p_value(report.statistic);
    report.critical_value = chisq_critical_value(partition.cells(), config.k_n, config.level);
  } else {
    // The source keeps the scale the bootstrap expects: Pareto for known
    // margins, the raw data (re-ranked per half) for empirical margins.
    const Sample& source_x = config.margins == MarginMode::known ? xs : x;
    const Sample& source_y = config.margins == MarginMode::known ? ys : y;
    std::vector<const Sample*> sources{&source_x};
    if (config.bootstrap_source == BootstrapSource::symmetric) sources.push_back(&source_y);
    double p_sum = 0.0;
    double crit_sum = 0.0;
    for (std::size_t s = 0; s < sources.size(); ++s) {
      const NullDistribution null = bootstrap_null(*sources[s], config, s);
      NullSummary summary;
      summary.source = null.source;
      summary.replicates = null.replicates.size();
      summary.k_half = null.k_half;
      summary.critical_value = empirical_quantile(null.replicates, 1.0 - config.level);
      summary.p_value = bootstrap_p_value(report.statistic, null);
      p_sum += summary.p_value;
      crit_sum += summary.critical_value;
      report.nulls.push_back(std::move(summary));
    }
    report.p_value = p_sum / static_cast<double>(sources.size());
    report.critical_value = crit_sum / static_cast<double>(sources.size());
  }
  report.reject = report.p_value < config.level;
  if (report.statistic.zero_corrected) report.warnings.push_back("empty cell: half-count correction applied");
  return report;
}

}  // namespace kltail
