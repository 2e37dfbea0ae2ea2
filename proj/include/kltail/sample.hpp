#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace kltail {

// Scale on which a sample's coordinates are expressed.
enum class MarginState { raw, pareto, pseudo };

std::string_view to_string(MarginState state);

// n observations of a d-dimensional vector, stored row-major.
class Sample {
 public:
  Sample() = default;
  Sample(std::size_t n, std::size_t d, MarginState state = MarginState::raw);
  Sample(std::size_t d, std::vector<double> row_major, MarginState state = MarginState::raw);

  std::size_t n() const noexcept { return n_; }
  std::size_t d() const noexcept { return d_; }
  MarginState state() const noexcept { return state_; }
  void set_state(MarginState state) noexcept { state_ = state; }

  std::span<const double> row(std::size_t i) const { return {data_.data() + i * d_, d_}; }
  std::span<double> row(std::size_t i) { return {data_.data() + i * d_, d_}; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * d_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * d_ + j]; }

  std::vector<double> column(std::size_t j) const;
  std::span<const double> values() const noexcept { return data_; }

  // Rows selected by index, in the order given.
  Sample select_rows(std::span<const std::size_t> rows) const;

  friend bool operator==(const Sample&, const Sample&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t d_ = 0;
  MarginState state_ = MarginState::raw;
  std::vector<double> data_;
};

}  // namespace kltail
