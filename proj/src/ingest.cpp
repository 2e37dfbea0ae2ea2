#include "kltail/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "kltail/errors.hpp"

namespace kltail {

using namespace std::chrono;

std::string_view to_string(Season season) {
  switch (season) {
    case Season::DJF: return "DJF";
    case Season::MAM: return "MAM";
    case Season::JJA: return "JJA";
    case Season::SON: return "SON";
  }
  return "unknown";
}

std::optional<Season> parse_season(std::string_view name) {
  for (Season s : kSeasons) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

Season season_of(year_month_day date) {
  const unsigned m = static_cast<unsigned>(date.month());
  if (m == 12 || m <= 2) return Season::DJF;
  if (m <= 5) return Season::MAM;
  if (m <= 8) return Season::JJA;
  return Season::SON;
}

int season_year(year_month_day date) {
  const int y = static_cast<int>(date.year());
  return static_cast<unsigned>(date.month()) == 12 ? y + 1 : y;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  if (s.empty()) return false;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

bool parse_fixed(std::string_view s, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > s.size()) return false;
  const auto part = s.substr(pos, len);
  if (!std::ranges::all_of(part, [](char c) { return c >= '0' && c <= '9'; })) return false;
  return parse_number(part, out);
}

std::optional<sys_seconds> make_time(int y, int mo, int d, int h, int mi, int sec) {
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h < 0 || h > 23 || mi < 0 || mi > 59 || sec < 0 || sec > 59) return std::nullopt;
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{sec};
}

}  // namespace

std::optional<sys_seconds> parse_timestamp(std::string_view text) {
  text = trim(text);
  int y, mo, d, h, mi, sec = 0;
  if (text.size() == 12 && std::ranges::all_of(text, [](char c) { return c >= '0' && c <= '9'; })) {
    parse_fixed(text, 0, 4, y);
    parse_fixed(text, 4, 2, mo);
    parse_fixed(text, 6, 2, d);
    parse_fixed(text, 8, 2, h);
    parse_fixed(text, 10, 2, mi);
    return make_time(y, mo, d, h, mi, 0);
  }
  if (text.size() < 16) return std::nullopt;
  if (!parse_fixed(text, 0, 4, y) || text[4] != '-' || !parse_fixed(text, 5, 2, mo) || text[7] != '-' ||
      !parse_fixed(text, 8, 2, d) || (text[10] != 'T' && text[10] != ' ') || !parse_fixed(text, 11, 2, h) ||
      text[13] != ':' || !parse_fixed(text, 14, 2, mi)) {
    return std::nullopt;
  }
  std::string_view rest = text.substr(16);
  if (!rest.empty() && rest.front() == ':') {
    if (!parse_fixed(rest, 1, 2, sec)) return std::nullopt;
    rest.remove_prefix(3);
  }
  if (!(rest.empty() || rest == "Z" || rest == "+00:00" || rest == "+0000")) return std::nullopt;
  return make_time(y, mo, d, h, mi, sec);
}

RainSeries parse_csv(std::istream& in, const CsvSchema& schema) {
  std::string line;
  if (!std::getline(in, line) || trim(line).empty()) throw FormatError("rainfall file is empty");
  const auto header = split(line, schema.delimiter);
  auto find_col = [&](const std::string& name) -> std::optional<std::size_t> {
    const auto it = std::ranges::find(header, std::string_view(name));
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
  };
  const auto ts_col = find_col(schema.timestamp_column);
  const auto depth_col = find_col(schema.depth_column);
  if (!ts_col || !depth_col) {
    throw FormatError("header lacks timestamp column '" + schema.timestamp_column + "' or depth column '" +
                      schema.depth_column + "'");
  }
  std::optional<std::size_t> station_col;
  if (!schema.station_column.empty()) {
    station_col = find_col(schema.station_column);
    if (!station_col) throw FormatError("header lacks station column '" + schema.station_column + "'");
  }

  RainSeries series;
  std::size_t line_no = 1;
  auto malformed = [&](const std::string& why) {
    ++series.malformed_rows;
    if (series.diagnostics.size() < 10) series.diagnostics.push_back("line " + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    ++series.data_rows;
    const auto fields = split(line, schema.delimiter);
    if (fields.size() != header.size()) {
      malformed("expected " + std::to_string(header.size()) + " fields, found " + std::to_string(fields.size()));
      continue;
    }
    auto time = parse_timestamp(fields[*ts_col]);
    if (!time) {
      malformed("unparseable timestamp '" + std::string(fields[*ts_col]) + "'");
      continue;
    }
    if (schema.timestamp_marks_interval_end) *time -= kSlot;
    if ((time->time_since_epoch() % kSlot) != seconds{0}) {
      malformed("timestamp not on the 6-minute grid");
      continue;
    }
    if (!series.records.empty() && *time <= series.records.back().time) {
      malformed("timestamp does not increase");
      continue;
    }
    RainRecord rec{*time, 0.0, false};
    const auto depth_text = fields[*depth_col];
    if (depth_text == schema.missing_token) {
      rec.missing = true;
      ++series.masked_missing;
    } else if (!parse_number(depth_text, rec.depth) || !std::isfinite(rec.depth)) {
      malformed("unparseable depth '" + std::string(depth_text) + "'");
      continue;
    } else if (rec.depth < 0.0) {
      rec.missing = true;
      ++series.masked_negative;
    }
    if (station_col && series.station.empty()) series.station = std::string(fields[*station_col]);
    series.records.push_back(rec);
  }
  if (series.data_rows > 0 && 2 * series.malformed_rows > series.data_rows) {
    std::string msg = std::to_string(series.malformed_rows) + " of " + std::to_string(series.data_rows) +
                      " rows malformed";
    for (const auto& d : series.diagnostics) msg += "\n  " + d;
    throw FormatError(msg);
  }
  return series;
}

RainSeries load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  return parse_csv(in, schema);
}

Sample SeasonalPairs::to_sample() const {
  std::vector<double> data;
  data.reserve(2 * rows.size());
  for (const auto& r : rows) {
    data.push_back(r.max_6min);
    data.push_back(r.max_hourly);
  }
  if (rows.empty()) return Sample(0, 2);
  return Sample(2, std::move(data));
}

namespace {

struct DayAccumulator {
  sys_days day{};
  std::array<double, kSlotsPerDay> depth{};
  std::array<bool, kSlotsPerDay> valid{};

  void reset(sys_days d) {
    day = d;
    depth.fill(0.0);
    valid.fill(false);
  }
};

// Calls on_day for every calendar day touched by the series, in order.
template <typename Fn>
void for_each_day(const RainSeries& series, Fn&& on_day) {
  if (series.records.empty()) return;
  DayAccumulator acc;
  acc.reset(floor<days>(series.records.front().time));
  for (const auto& rec : series.records) {
    const auto d = floor<days>(rec.time);
    if (d != acc.day) {
      on_day(acc);
      acc.reset(d);
    }
    const auto slot = static_cast<std::size_t>((rec.time - d) / kSlot);
    acc.depth[slot] = rec.depth;
    acc.valid[slot] = !rec.missing;
  }
  on_day(acc);
}

void add_day(const DayAccumulator& acc, const PairingPolicy& policy, std::array<SeasonalPairs, 4>& out) {
  const year_month_day ymd{acc.day};
  SeasonalPairs& target = out[static_cast<std::size_t>(season_of(ymd))];
  if (!std::ranges::all_of(acc.valid, [](bool v) { return v; })) {
    ++target.dropped_incomplete;
    return;
  }
  ++target.complete_days;
  double max6 = 0.0;
  double max_hour = 0.0;
  for (int h = 0; h < kSlotsPerDay / kSlotsPerHour; ++h) {
    double hour = 0.0;
    for (int s = 0; s < kSlotsPerHour; ++s) {
      const double v = acc.depth[static_cast<std::size_t>(h * kSlotsPerHour + s)];
      hour += v;
      max6 = std::max(max6, v);
    }
    max_hour = std::max(max_hour, hour);
  }
  if (policy.drop_dry_days && max6 == 0.0 && max_hour == 0.0) {
    ++target.dropped_dry;
    return;
  }
  target.rows.push_back({acc.day, season_year(ymd), max6, max_hour});
}

}  // namespace

std::array<SeasonalPairs, 4> build_all_pairs(const RainSeries& series, const PairingPolicy& policy) {
  std::array<SeasonalPairs, 4> out;
  for (std::size_t s = 0; s < 4; ++s) out[s].season = kSeasons[s];
  for_each_day(series, [&](const DayAccumulator& acc) { add_day(acc, policy, out); });
  return out;
}

SeasonalPairs build_pairs(const RainSeries& series, Season season, const PairingPolicy& policy) {
  if (series.records.empty()) throw InsufficientDataError("rainfall series is empty");
  auto all = build_all_pairs(series, policy);
  SeasonalPairs& pairs = all[static_cast<std::size_t>(season)];
  if (pairs.rows.empty()) {
    throw InsufficientDataError("no retained " + std::string(to_string(season)) + " days (" +
                                std::to_string(pairs.dropped_incomplete) + " incomplete, " +
                                std::to_string(pairs.dropped_dry) + " dry)");
  }
  return std::move(pairs);
}

std::vector<SeasonComparison> seasonal_tests(const std::array<SeasonalPairs, 4>& seasons, const TestConfig& config) {
  TestConfig base = config;
  base.margins = MarginMode::empirical;
  base.calibration = Calibration::bootstrap;
  base.validate();

  std::vector<SeasonComparison> out;
  std::uint64_t pair_index = 0;
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = a + 1; b < 4; ++b, ++pair_index) {
      SeasonComparison cmp;
      cmp.first = seasons[a].season;
      cmp.second = seasons[b].season;
      cmp.n_first = seasons[a].rows.size();
      cmp.n_second = seasons[b].rows.size();
      TestConfig cfg = base;
      cfg.seed = base.seed + pair_index;
      if (cmp.n_first < 4 * cfg.k_n) {
        cmp.error = "insufficient data: " + std::string(to_string(cmp.first)) + " has " +
                    std::to_string(cmp.n_first) + " retained days, needs " + std::to_string(4 * cfg.k_n);
        out.push_back(std::move(cmp));
        continue;
      }
      if (cmp.n_second < 2) {
        cmp.error = "insufficient data: " + std::string(to_string(cmp.second)) + " has " +
                    std::to_string(cmp.n_second) + " retained days";
        out.push_back(std::move(cmp));
        continue;
      }
      if (cfg.k_n >= cmp.n_second) {
        cfg.k_n = cmp.n_second - 1;
        cmp.warnings.push_back("k_n capped at " + std::to_string(cfg.k_n) + " by the size of " +
                               std::string(to_string(cmp.second)));
      }
      try {
        cmp.report = run_test(seasons[a].to_sample(), seasons[b].to_sample(), cfg);
      } catch (const Error& e) {
        cmp.error = e.what();
      }
      out.push_back(std::move(cmp));
    }
  }
  return out;
}

std::vector<SeasonComparison> seasonal_tests(const RainSeries& series, const TestConfig& config,
                                             const PairingPolicy& policy) {
  return seasonal_tests(build_all_pairs(series, policy), config);
}

std::string pairs_csv(const SeasonalPairs& pairs) {
  std::ostringstream out;
  out.precision(17);
  out << "date,season,season_year,max_6min,max_hourly\n";
  for (const auto& r : pairs.rows) {
    const year_month_day ymd{r.day};
    char date[16];
    std::snprintf(date, sizeof date, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    out << date << ',' << to_string(pairs.season) << ',' << r.season_year << ',' << r.max_6min << ','
        << r.max_hourly << '\n';
  }
  return out.str();
}

}  // namespace kltail
