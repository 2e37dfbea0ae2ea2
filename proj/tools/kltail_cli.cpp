// Command-line front end: standardize, test, simulate, power, nulls, rainfall.
//
// Every subcommand prints one JSON document on stdout. Exit codes: 0 success
// (and "not reject" for test), 3 test rejects, 2 invalid invocation, 4
// numerical or data failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "kltail/copulas.hpp"
#include "kltail/errors.hpp"
#include "kltail/experiments.hpp"
#include "kltail/ingest.hpp"
#include "kltail/inference.hpp"
#include "kltail/margins.hpp"
#include "kltail/report_json.hpp"
#include "sample_csv.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace kltail::cli {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitReject = 3;
constexpr int kExitFailure = 4;

const std::map<std::string, RiskKind> kRiskNames{
    {"max", RiskKind::max}, {"min", RiskKind::min}, {"l2", RiskKind::euclidean}, {"l1", RiskKind::sum}};
const std::map<std::string, MarginMode> kMarginNames{{"known", MarginMode::known},
                                                     {"empirical", MarginMode::empirical}};
const std::map<std::string, Calibration> kCalibrationNames{
    {"auto", Calibration::automatic}, {"chisq", Calibration::chisq}, {"bootstrap", Calibration::bootstrap}};
const std::map<std::string, BootstrapSource> kSourceNames{{"x", BootstrapSource::x},
                                                          {"symmetric", BootstrapSource::symmetric}};
const std::map<std::string, HalfSampleExceedances> kHalfNames{{"halved", HalfSampleExceedances::halved},
                                                              {"same", HalfSampleExceedances::same}};
const std::map<std::string, CopulaFamily> kFamilyNames{{"logistic", CopulaFamily::logistic},
                                                       {"clayton", CopulaFamily::outer_power_clayton},
                                                       {"asymmetric-logistic", CopulaFamily::asymmetric_logistic}};

std::string g_command_line;

fs::path default_output_dir() {
  if (const char* env = std::getenv("KLTAIL_OUTPUT_DIR"); env && *env) return env;
  return ".";
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  out << text;
}

void write_manifest(const fs::path& path, std::string_view command, const json& arguments, std::uint64_t seed) {
  json manifest = make_manifest(command, arguments, seed);
  manifest["command_line"] = g_command_line;
  write_text(path, manifest.dump(2) + "\n");
}

MarginalCdf named_cdf(const std::string& name) {
  if (name == "uniform") return cdfs::uniform();
  if (name == "pareto") return cdfs::unit_pareto();
  return cdfs::unit_exponential();
}

std::vector<MarginalCdf> repeat_cdf(const std::string& name, std::size_t d) {
  return std::vector<MarginalCdf>(d, named_cdf(name));
}

// Options shared by test, power, nulls and rainfall.
struct TestOptions {
  std::string risk = "l2";
  std::size_t sets = 0;
  std::size_t k_n = 200;
  double level = 0.05;
  std::string margins = "known";
  std::string calibration = "auto";
  std::string known_cdf = "uniform";
  std::size_t bootstrap = 1000;
  std::uint64_t seed = 1;
  std::string source = "x";
  std::string half_sample = "halved";
  unsigned workers = 0;

  void attach(CLI::App* app, bool with_margins = true) {
    app->add_option("--risk", risk, "Risk functional")->check(CLI::IsMember({"max", "min", "l2", "l1"}));
    app->add_option("--sets", sets, "Number of partition cells K (>= 2; implied by d for max/min)")
        ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 16));
    app->add_option("--k-exceedances,-k", k_n, "Exceedances per sample")->check(CLI::PositiveNumber);
    app->add_option("--level", level, "Significance level")->check(CLI::Range(0.0, 1.0));
    if (with_margins) {
      app->add_option("--margins", margins, "known or empirical marginal standardization")
          ->check(CLI::IsMember({"known", "empirical"}));
      app->add_option("--known-cdf", known_cdf, "Marginal law assumed with --margins known")
          ->check(CLI::IsMember({"uniform", "pareto", "exponential"}));
    }
    app->add_option("--calibration", calibration, "p-value calibration")
        ->check(CLI::IsMember({"auto", "chisq", "bootstrap"}));
    app->add_option("--bootstrap,-B", bootstrap, "Bootstrap replicates")->check(CLI::PositiveNumber);
    app->add_option("--seed", seed, "Master seed");
    app->add_option("--bootstrap-source", source, "x or symmetric")->check(CLI::IsMember({"x", "symmetric"}));
    app->add_option("--half-sample", half_sample, "Half-sample exceedances: halved or same")
        ->check(CLI::IsMember({"halved", "same"}));
    app->add_option("--workers", workers, "Worker threads (0 = all cores)");
  }

  TestConfig config() const {
    TestConfig c;
    c.risk = kRiskNames.at(risk);
    c.sets = sets;
    if (sets == 0 && (c.risk == RiskKind::euclidean || c.risk == RiskKind::sum)) c.sets = 5;
    c.k_n = k_n;
    c.level = level;
    c.margins = kMarginNames.at(margins);
    c.calibration = kCalibrationNames.at(calibration);
    c.bootstrap = bootstrap;
    c.seed = seed;
    c.bootstrap_source = kSourceNames.at(source);
    c.half_sample = kHalfNames.at(half_sample);
    c.workers = workers;
    if (c.level <= 0.0 || c.level >= 1.0) throw ConfigError("--level must lie strictly between 0 and 1");
    return c;
  }
};

struct ModelOptions {
  std::string family = "clayton";
  double theta = 0.45;
  std::vector<double> psi{1.0, 1.0};

  void attach(CLI::App* app, const std::string& suffix = "") {
    app->add_option("--family" + suffix, family, "logistic, clayton or asymmetric-logistic")
        ->check(CLI::IsMember({"logistic", "clayton", "asymmetric-logistic"}));
    app->add_option("--theta" + suffix, theta, "Dependence parameter in (0, 1]")
        ->check(CLI::Range(0.0, 1.0));
    app->add_option("--psi" + suffix, psi, "Asymmetry weights psi1,psi2 in (0, 1]")
        ->delimiter(',')
        ->expected(2);
  }

  CopulaModel model() const {
    CopulaModel m{kFamilyNames.at(family), theta, {psi.at(0), psi.at(1)}};
    try {
      m.validate();
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
    return m;
  }
};

std::vector<std::size_t> parse_grid(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      const long v = std::stol(item, &pos);
      if (pos != item.size() || v <= 0) throw std::invalid_argument(item);
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw ConfigError("invalid grid entry '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError("empty grid");
  return out;
}

int run_standardize(const fs::path& input, const TestOptions& opts, const std::string& out_opt) {
  const Sample raw = read_sample_csv(input);
  const MarginMode mode = kMarginNames.at(opts.margins);
  const auto cdfs = repeat_cdf(opts.known_cdf, raw.d());
  const Sample std_sample = standardize(raw, mode, &cdfs);
  const fs::path out = out_opt.empty() ? default_output_dir() / (input.stem().string() + "_standardized.csv")
                                       : fs::path(out_opt);
  write_text(out, sample_csv(std_sample));
  const json args{{"input", input.string()}, {"margins", opts.margins}, {"known_cdf", opts.known_cdf}};
  write_manifest(fs::path(out.string() + ".manifest.json"), "standardize", args, 0);
  std::cout << json{{"command", "standardize"},
                    {"output", out.string()},
                    {"n", std_sample.n()},
                    {"d", std_sample.d()},
                    {"margin_state", to_string(std_sample.state())}}
                   .dump(2)
            << '\n';
  return kExitOk;
}

int run_test_command(const fs::path& x_path, const fs::path& y_path, const TestOptions& opts,
                     const std::string& out_opt) {
  const Sample x = read_sample_csv(x_path);
  const Sample y = read_sample_csv(y_path);
  const TestConfig config = opts.config();
  KnownMargins known{repeat_cdf(opts.known_cdf, x.d()), repeat_cdf(opts.known_cdf, y.d())};
  const TestReport report = run_test(x, y, config, &known);
  json j = to_json(report);
  j["inputs"] = {x_path.string(), y_path.string()};
  if (config.margins == MarginMode::known) j["config"]["known_cdf"] = opts.known_cdf;
  if (!out_opt.empty()) {
    write_text(out_opt, j.dump(2) + "\n");
    write_manifest(fs::path(out_opt + ".manifest.json"), "test", j["config"], config.seed);
  }
  std::cout << j.dump(2) << '\n';
  return report.reject ? kExitReject : kExitOk;
}

int run_simulate(const ModelOptions& model_opts, std::size_t n, std::uint64_t seed, std::uint64_t stream_id,
                 const std::string& out_opt) {
  const CopulaModel model = model_opts.model();
  RngStream stream(seed, stream_id);
  const Sample s = sample(model, n, stream);
  std::ostringstream name;
  name << "sample_" << model_opts.family << "_theta" << model_opts.theta << "_seed" << seed << "_stream"
       << stream_id << ".csv";
  const fs::path out = out_opt.empty() ? default_output_dir() / name.str() : fs::path(out_opt);
  write_text(out, sample_csv(s));
  json args{{"model", to_json(model)}, {"n", n}, {"stream", stream_id}};
  write_manifest(fs::path(out.string() + ".manifest.json"), "simulate", args, seed);
  std::cout << json{{"command", "simulate"}, {"output", out.string()}, {"n", n}, {"model", to_json(model)},
                    {"seed", seed}, {"stream", stream_id}}
                   .dump(2)
            << '\n';
  return kExitOk;
}

int run_power(const ModelOptions& mx, const ModelOptions& my, std::size_t n, std::size_t reps,
              const std::string& k_grid, const std::string& sets_grid, const TestOptions& opts,
              const std::string& out_dir_opt) {
  ExperimentPlan plan;
  plan.model_x = mx.model();
  plan.model_y = my.model();
  plan.n = n;
  plan.repetitions = reps;
  plan.test = opts.config();
  PowerCurve curve;
  if (!sets_grid.empty()) {
    plan.sets_grid = parse_grid(sets_grid);
    curve = k_sensitivity_study(plan);
  } else {
    plan.k_grid = parse_grid(k_grid);
    curve = size_power_study(plan);
  }
  const fs::path dir = out_dir_opt.empty() ? default_output_dir() : fs::path(out_dir_opt);
  write_text(dir / "power.csv", power_curve_csv(curve));
  json args{{"model_x", to_json(plan.model_x)}, {"model_y", to_json(plan.model_y)}, {"n", n},
            {"repetitions", reps}, {"k_grid", plan.k_grid}, {"sets_grid", plan.sets_grid},
            {"test", to_json(plan.test)}};
  write_manifest(dir / "manifest.json", "power", args, plan.test.seed);
  json j = to_json(curve);
  j["command"] = "power";
  j["output"] = (dir / "power.csv").string();
  std::cout << j.dump(2) << '\n';
  return kExitOk;
}

int run_nulls(const ModelOptions& mo, std::size_t n, const TestOptions& opts, const std::string& out_dir_opt) {
  const CopulaModel model = mo.model();
  const TestConfig config = opts.config();
  const NullStudy study = null_histogram_study(model, n, config, config.bootstrap);
  const fs::path dir = out_dir_opt.empty() ? default_output_dir() : fs::path(out_dir_opt);
  write_text(dir / "nulls.csv", null_study_csv(study));
  json args{{"model", to_json(model)}, {"n", n}, {"test", to_json(config)}};
  write_manifest(dir / "manifest.json", "nulls", args, config.seed);
  json j = summary_json(study);
  j["command"] = "nulls";
  j["output"] = (dir / "nulls.csv").string();
  std::cout << j.dump(2) << '\n';
  return kExitOk;
}

int run_rainfall(const fs::path& input, const CsvSchema& schema, bool keep_dry, const TestOptions& opts,
                 const std::string& out_dir_opt) {
  const RainSeries series = load_csv(input, schema);
  PairingPolicy policy;
  policy.drop_dry_days = !keep_dry;
  const auto seasons = build_all_pairs(series, policy);
  TestConfig config = opts.config();
  const auto comparisons = seasonal_tests(seasons, config);

  const fs::path dir = out_dir_opt.empty() ? default_output_dir() : fs::path(out_dir_opt);
  json season_info = json::array();
  for (const auto& s : seasons) {
    const fs::path path = dir / ("pairs_" + std::string(to_string(s.season)) + ".csv");
    write_text(path, pairs_csv(s));
    season_info.push_back({{"season", to_string(s.season)},
                           {"retained_days", s.rows.size()},
                           {"dropped_incomplete", s.dropped_incomplete},
                           {"dropped_dry", s.dropped_dry},
                           {"pairs_csv", path.string()}});
  }
  json reports = json::array();
  for (const auto& c : comparisons) reports.push_back(to_json(c));
  json j{{"command", "rainfall"},
         {"station", series.station},
         {"records", series.records.size()},
         {"malformed_rows", series.malformed_rows},
         {"masked_missing", series.masked_missing},
         {"masked_negative", series.masked_negative},
         {"seasons", season_info},
         {"comparisons", reports}};
  write_text(dir / "reports.json", j.dump(2) + "\n");
  json args{{"input", input.string()},
            {"timestamp_column", schema.timestamp_column},
            {"depth_column", schema.depth_column},
            {"missing_token", schema.missing_token},
            {"keep_dry_days", keep_dry},
            {"test", to_json(config)}};
  write_manifest(dir / "manifest.json", "rainfall", args, config.seed);
  std::cout << j.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int main_impl(int argc, char** argv) {
  for (int i = 0; i < argc; ++i) g_command_line += (i ? " " : "") + std::string(argv[i]);

  CLI::App app{"Two-sample Kullback-Leibler test for equal extremal dependence"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(KLTAIL_VERSION));

  // standardize
  auto* std_cmd = app.add_subcommand("standardize", "Transform a sample to Pareto or pseudo-observation scale");
  std::string std_input, std_out;
  TestOptions std_opts;
  std_cmd->add_option("input", std_input, "Sample CSV")->required()->check(CLI::ExistingFile);
  std_cmd->add_option("--margins", std_opts.margins)->check(CLI::IsMember({"known", "empirical"}));
  std_cmd->add_option("--known-cdf", std_opts.known_cdf)->check(CLI::IsMember({"uniform", "pareto", "exponential"}));
  std_cmd->add_option("--out,-o", std_out, "Output CSV");

  // test
  auto* test_cmd = app.add_subcommand("test", "Run the divergence test on two sample CSV files");
  std::string x_path, y_path, test_out;
  TestOptions test_opts;
  test_cmd->add_option("x", x_path, "First sample CSV")->required()->check(CLI::ExistingFile);
  test_cmd->add_option("y", y_path, "Second sample CSV")->required()->check(CLI::ExistingFile);
  test_opts.attach(test_cmd);
  test_cmd->add_option("--out,-o", test_out, "Also write the report JSON here");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Draw a copula sample on uniform margins");
  ModelOptions sim_model;
  std::size_t sim_n = 2000;
  std::uint64_t sim_seed = 1, sim_stream = 0;
  std::string sim_out;
  sim_model.attach(sim_cmd);
  sim_cmd->add_option("-n", sim_n, "Sample size")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--seed", sim_seed, "Master seed");
  sim_cmd->add_option("--stream", sim_stream, "Stream id");
  sim_cmd->add_option("--out,-o", sim_out, "Output CSV");

  // power
  auto* power_cmd = app.add_subcommand("power", "Monte Carlo size/power study over k_n or K");
  ModelOptions power_x, power_y;
  std::size_t power_n = 2000, power_reps = 500;
  std::string k_grid = "50,100,200,400", sets_grid, power_out;
  TestOptions power_opts;
  power_x.attach(power_cmd, "-x");
  power_y.attach(power_cmd, "-y");
  power_cmd->add_option("-n", power_n, "Sample size")->check(CLI::PositiveNumber);
  power_cmd->add_option("--reps", power_reps, "Repetitions")->check(CLI::PositiveNumber);
  power_cmd->add_option("--k-grid", k_grid, "Comma-separated k_n values");
  power_cmd->add_option("--sets-grid", sets_grid, "Comma-separated K values (K study at fixed k_n)");
  power_opts.attach(power_cmd);
  power_cmd->add_option("--out-dir", power_out, "Output directory");

  // nulls
  auto* nulls_cmd = app.add_subcommand("nulls", "Bootstrap versus fresh-simulation null distributions");
  ModelOptions nulls_model;
  std::size_t nulls_n = 2000;
  std::string nulls_out;
  TestOptions nulls_opts;
  nulls_opts.sets = 4;
  nulls_model.attach(nulls_cmd);
  nulls_cmd->add_option("-n", nulls_n, "Sample size")->check(CLI::PositiveNumber);
  nulls_opts.attach(nulls_cmd);
  nulls_cmd->add_option("--out-dir", nulls_out, "Output directory");

  // rainfall
  auto* rain_cmd = app.add_subcommand("rainfall", "Seasonal comparison of 6-minute rainfall records");
  std::string rain_input, rain_out, delimiter = ",";
  CsvSchema schema;
  bool keep_dry = false;
  TestOptions rain_opts;
  rain_opts.sets = 4;
  rain_opts.k_n = 50;
  rain_opts.margins = "empirical";
  rain_cmd->add_option("input", rain_input, "Rainfall CSV")->required()->check(CLI::ExistingFile);
  rain_cmd->add_option("--timestamp-col", schema.timestamp_column, "Timestamp column name");
  rain_cmd->add_option("--depth-col", schema.depth_column, "Depth column name");
  rain_cmd->add_option("--station-col", schema.station_column, "Station column name");
  rain_cmd->add_option("--missing-token", schema.missing_token, "Token marking a missing depth");
  rain_cmd->add_option("--delimiter", delimiter, "Field delimiter")->check([](const std::string& s) {
    return s.size() == 1 ? std::string{} : std::string("delimiter must be one character");
  });
  rain_cmd->add_flag("--interval-end", schema.timestamp_marks_interval_end, "Timestamps mark interval ends");
  rain_cmd->add_flag("--keep-dry-days", keep_dry, "Keep days with no rain");
  rain_opts.attach(rain_cmd, false);
  rain_cmd->add_option("--out-dir", rain_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitUsage;
  }

  try {
    if (*std_cmd) return run_standardize(std_input, std_opts, std_out);
    if (*test_cmd) return run_test_command(x_path, y_path, test_opts, test_out);
    if (*sim_cmd) return run_simulate(sim_model, sim_n, sim_seed, sim_stream, sim_out);
    if (*power_cmd) return run_power(power_x, power_y, power_n, power_reps, k_grid, sets_grid, power_opts, power_out);
    if (*nulls_cmd) return run_nulls(nulls_model, nulls_n, nulls_opts, nulls_out);
    if (*rain_cmd) {
      schema.delimiter = delimiter[0];
      return run_rainfall(rain_input, schema, keep_dry, rain_opts, rain_out);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace kltail::cli

int main(int argc, char** argv) { return kltail::cli::main_impl(argc, argv); }
