#include "sample_csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "kltail/errors.hpp"

namespace kltail::cli {
namespace {

bool parse_row(const std::string& line, std::vector<double>& out) {
  out.clear();
  std::size_t start = 0;
  while (start <= line.size()) {
    auto end = line.find(',', start);
    if (end == std::string::npos) end = line.size();
    std::string_view field(line.data() + start, end - start);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\r' || field.back() == '\t')) field.remove_suffix(1);
    double v;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || res.ec != std::errc{} || res.ptr != field.data() + field.size()) return false;
    out.push_back(v);
    start = end + 1;
  }
  return true;
}

}  // namespace

Sample read_sample_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  std::string line;
  std::vector<double> data;
  std::vector<double> row;
  std::size_t d = 0;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    if (!parse_row(line, row)) {
      if (line_no == 1) continue;  // header
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": non-numeric field");
    }
    if (d == 0) d = row.size();
    if (row.size() != d) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": expected " + std::to_string(d) +
                        " columns");
    }
    data.insert(data.end(), row.begin(), row.end());
  }
  if (d == 0) throw FormatError(path.string() + " contains no observations");
  return Sample(d, std::move(data));
}

std::string sample_csv(const Sample& sample) {
  std::ostringstream out;
  out.precision(17);
  for (std::size_t j = 0; j < sample.d(); ++j) out << (j ? "," : "") << 'x' << (j + 1);
  out << '\n';
  for (std::size_t i = 0; i < sample.n(); ++i) {
    for (std::size_t j = 0; j < sample.d(); ++j) out << (j ? "," : "") << sample(i, j);
    out << '\n';
  }
  return out.str();
}

void write_sample_csv(const std::filesystem::path& path, const Sample& sample) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  out << sample_csv(sample);
}

}  // namespace kltail::cli
