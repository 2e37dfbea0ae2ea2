#pragma once

#include <array>
#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kltail/inference.hpp"
#include "kltail/sample.hpp"

namespace kltail {

// Meteorological seasons; DJF joins December to the following January and
// February.
enum class Season { DJF, MAM, JJA, SON };
inline constexpr std::array<Season, 4> kSeasons{Season::DJF, Season::MAM, Season::JJA, Season::SON};

std::string_view to_string(Season season);
std::optional<Season> parse_season(std::string_view name);
Season season_of(std::chrono::year_month_day date);
// Year a season instance is labelled with; December counts towards the next year's DJF.
int season_year(std::chrono::year_month_day date);

inline constexpr std::chrono::minutes kSlot{6};
inline constexpr int kSlotsPerHour = 10;
inline constexpr int kSlotsPerDay = 240;

struct RainRecord {
  std::chrono::sys_seconds time;  // start of the 6-minute interval, UTC
  double depth = 0.0;             // millimetres
  bool missing = false;
};

struct RainSeries {
  std::string station;
  std::vector<RainRecord> records;  // strictly increasing times
  std::size_t data_rows = 0;
  std::size_t malformed_rows = 0;
  std::size_t masked_missing = 0;
  std::size_t masked_negative = 0;
  std::vector<std::string> diagnostics;  // first few malformed rows
};

// Column mapping of a rainfall CSV file. The header names the columns;
// timestamps are ISO-8601 (YYYY-MM-DD[T ]HH:MM[:SS][Z]) or compact
// YYYYMMDDHHMM; depths are decimal millimetres.
struct CsvSchema {
  std::string timestamp_column = "timestamp";
  std::string depth_column = "depth";
  std::string station_column;  // optional
  std::string missing_token;   // empty field by default
  char delimiter = ',';
  bool timestamp_marks_interval_end = false;
};

std::optional<std::chrono::sys_seconds> parse_timestamp(std::string_view text);

// Rows with unparseable fields or non-increasing timestamps are skipped and
// counted; more than half malformed rejects the file. Missing-token and
// negative depths are kept as masked records.
RainSeries parse_csv(std::istream& in, const CsvSchema& schema);
RainSeries load_csv(const std::filesystem::path& path, const CsvSchema& schema);

struct DailyPair {
  std::chrono::sys_days day;
  int season_year = 0;
  double max_6min = 0.0;    // largest 6-minute depth of the day
  double max_hourly = 0.0;  // largest clock-hour sum of the day
};

struct PairingPolicy {
  bool drop_dry_days = true;
};

struct SeasonalPairs {
  Season season = Season::DJF;
  std::vector<DailyPair> rows;
  std::size_t complete_days = 0;
  std::size_t dropped_incomplete = 0;
  std::size_t dropped_dry = 0;

  Sample to_sample() const;  // n x 2 raw sample (max_6min, max_hourly)
};

// Daily (6-minute max, hourly max) pairs of one season. A day is kept only
// when all 240 slots are present and unmasked.
SeasonalPairs build_pairs(const RainSeries& series, Season season, const PairingPolicy& policy = {});
std::array<SeasonalPairs, 4> build_all_pairs(const RainSeries& series, const PairingPolicy& policy = {});

struct SeasonComparison {
  Season first = Season::DJF;
  Season second = Season::MAM;
  std::size_t n_first = 0;
  std::size_t n_second = 0;
  std::optional<TestReport> report;
  std::string error;
  std::vector<std::string> warnings;
};

// Empirical-margin, bootstrap-calibrated tests for the six unordered season
// pairs. The first season of each pair feeds the bootstrap and must hold at
// least 4 k_n days; k_n is capped at min(n) - 1 for the other.
std::vector<SeasonComparison> seasonal_tests(const std::array<SeasonalPairs, 4>& seasons, const TestConfig& config);
std::vector<SeasonComparison> seasonal_tests(const RainSeries& series, const TestConfig& config,
                                             const PairingPolicy& policy = {});

std::string pairs_csv(const SeasonalPairs& pairs);

}  // namespace kltail
