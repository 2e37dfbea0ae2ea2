#include "kltail/sample.hpp"

#include "kltail/errors.hpp"

namespace kltail {

std::string_view to_string(MarginState state) {
  switch (state) {
    case MarginState::raw: return "raw";
    case MarginState::pareto: return "pareto";
    case MarginState::pseudo: return "pseudo";
  }
  return "unknown";
}

Sample::Sample(std::size_t n, std::size_t d, MarginState state)
    : n_(n), d_(d), state_(state), data_(n * d, 0.0) {}

Sample::Sample(std::size_t d, std::vector<double> row_major, MarginState state)
    : d_(d), state_(state), data_(std::move(row_major)) {
  if (d == 0) throw ShapeError("sample dimension must be positive");
  if (data_.size() % d != 0) throw ShapeError("sample data length is not a multiple of the dimension");
  n_ = data_.size() / d;
}

std::vector<double> Sample::column(std::size_t j) const {
  std::vector<double> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = data_[i * d_ + j];
  return out;
}

Sample Sample::select_rows(std::span<const std::size_t> rows) const {
  Sample out(rows.size(), d_, state_);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto src = row(rows[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

}  // namespace kltail
