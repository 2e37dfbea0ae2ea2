#include "kltail/margins.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kltail/errors.hpp"

namespace kltail {

Sample to_pareto(const Sample& raw, const std::vector<MarginalCdf>& cdfs) {
  if (raw.state() != MarginState::raw) throw DomainError("to_pareto expects a raw sample");
  if (cdfs.size() != raw.d()) throw ShapeError("need one marginal cdf per coordinate");
  Sample out(raw.n(), raw.d(), MarginState::pareto);
  for (std::size_t i = 0; i < raw.n(); ++i) {
    for (std::size_t j = 0; j < raw.d(); ++j) {
      const double f = cdfs[j](raw(i, j));
      if (!(f < 1.0)) throw DegenerateMarginError(i, j);
      out(i, j) = 1.0 / (1.0 - f);
    }
  }
  return out;
}

std::vector<std::size_t> ordinal_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<std::size_t> ranks(values.size());
  for (std::size_t r = 0; r < order.size(); ++r) ranks[order[r]] = r + 1;
  return ranks;
}

Sample to_pseudo(const Sample& raw) {
  if (raw.n() < 2) throw InsufficientDataError("rank standardization needs at least 2 observations");
  const double np1 = static_cast<double>(raw.n() + 1);
  Sample out(raw.n(), raw.d(), MarginState::pseudo);
  for (std::size_t j = 0; j < raw.d(); ++j) {
    const auto col = raw.column(j);
    const auto ranks = ordinal_ranks(col);
    for (std::size_t i = 0; i < raw.n(); ++i) {
      out(i, j) = np1 / (np1 - static_cast<double>(ranks[i]));
    }
  }
  return out;
}

namespace cdfs {

MarginalCdf uniform() {
  return [](double x) { return std::clamp(x, 0.0, 1.0); };
}

MarginalCdf unit_pareto() {
  return [](double x) { return x <= 1.0 ? 0.0 : 1.0 - 1.0 / x; };
}

MarginalCdf unit_exponential() {
  return [](double x) { return x <= 0.0 ? 0.0 : -std::expm1(-x); };
}

}  // namespace cdfs
}  // namespace kltail
