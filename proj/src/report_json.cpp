#include "kltail/report_json.hpp"

namespace kltail {

using nlohmann::json;

json to_json(const TestConfig& c) {
  json j{{"risk", to_string(c.risk)},
         {"sets", c.sets},
         {"k_n", c.k_n},
         {"level", c.level},
         {"margins", to_string(c.margins)},
         {"calibration", to_string(c.resolved_calibration())},
         {"bootstrap", c.bootstrap},
         {"seed", c.seed},
         {"bootstrap_source", to_string(c.bootstrap_source)},
         {"half_sample_exceedances", to_string(c.half_sample)},
         {"rank_ties", "stable-ordinal"}};
  if (!c.angles.empty()) j["angles"] = c.angles;
  return j;
}

namespace {

json cells_json(const CellProbabilities& cells) {
  return json{{"counts", cells.counts}, {"probs", cells.probs}, {"k_n", cells.k_n}, {"threshold", cells.threshold}};
}

}  // namespace

json to_json(const TestReport& r) {
  json nulls = json::array();
  for (const auto& n : r.nulls) {
    nulls.push_back({{"source", n.source},
                     {"replicates", n.replicates},
                     {"k_half", n.k_half},
                     {"critical_value", n.critical_value},
                     {"p_value", n.p_value}});
  }
  return json{{"statistic", r.statistic.value},
              {"normalized_statistic", r.statistic.normalized},
              {"p_value", r.p_value},
              {"decision", r.reject ? "reject" : "not_reject"},
              {"method", to_string(r.method)},
              {"level", r.config.level},
              {"critical_value", r.critical_value},
              {"sets", r.statistic.cells},
              {"k_n", r.statistic.k_n},
              {"n_x", r.n_x},
              {"n_y", r.n_y},
              {"zero_correction", r.statistic.zero_corrected},
              {"cell_labels", r.cell_labels},
              {"cells_x", cells_json(r.cells_x)},
              {"cells_y", cells_json(r.cells_y)},
              {"bootstrap_nulls", nulls},
              {"warnings", r.warnings},
              {"config", to_json(r.config)}};
}

json to_json(const CopulaModel& m) {
  json j{{"family", to_string(m.family)}, {"theta", m.theta}};
  if (m.family == CopulaFamily::asymmetric_logistic) j["psi"] = m.psi;
  return j;
}

json to_json(const PowerPoint& p) {
  return json{{"grid_value", p.grid_value},
              {"mean_statistic", p.mean_statistic},
              {"q05_statistic", p.q05_statistic},
              {"q95_statistic", p.q95_statistic},
              {"rejection_fraction", p.rejection_fraction},
              {"critical_value", p.critical_value},
              {"repetitions", p.repetitions},
              {"zero_corrected", p.zero_corrected}};
}

json to_json(const PowerCurve& curve) {
  json points = json::array();
  for (const auto& p : curve.points) points.push_back(to_json(p));
  json j{{"grid", curve.grid_name}, {"points", points}};
  j["baseline"] = curve.baseline ? to_json(*curve.baseline) : json(nullptr);
  return j;
}

json summary_json(const NullStudy& s) {
  return json{{"bootstrap_replicates", s.bootstrap.size()},
              {"fresh_replicates", s.fresh.size()},
              {"ks_bootstrap_vs_fresh", s.ks_bootstrap_vs_fresh},
              {"ks_fresh_vs_chisq", s.ks_fresh_vs_chisq},
              {"ks_bootstrap_vs_chisq", s.ks_bootstrap_vs_chisq}};
}

json to_json(const SeasonComparison& c) {
  json j{{"first", to_string(c.first)},
         {"second", to_string(c.second)},
         {"n_first", c.n_first},
         {"n_second", c.n_second},
         {"warnings", c.warnings}};
  j["report"] = c.report ? to_json(*c.report) : json(nullptr);
  j["error"] = c.error.empty() ? json(nullptr) : json(c.error);
  return j;
}

json make_manifest(std::string_view command, const json& arguments, std::uint64_t seed) {
  return json{{"tool", "kltail"}, {"version", KLTAIL_VERSION}, {"command", command}, {"seed", seed},
              {"arguments", arguments}};
}

}  // namespace kltail
