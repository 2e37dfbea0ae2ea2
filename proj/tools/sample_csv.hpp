#pragma once

#include <filesystem>
#include <string>

#include "kltail/sample.hpp"

namespace kltail::cli {

// Numeric CSV, one observation per row. A first line that does not parse as
// numbers is taken as the header.
Sample read_sample_csv(const std::filesystem::path& path);
void write_sample_csv(const std::filesystem::path& path, const Sample& sample);
std::string sample_csv(const Sample& sample);

}  // namespace kltail::cli
