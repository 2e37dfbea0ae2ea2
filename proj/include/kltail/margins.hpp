#pragma once

#include <functional>
#include <vector>

#include "kltail/sample.hpp"

namespace kltail {

// Cumulative distribution function of one coordinate. Must return values
// strictly below 1 on the data it is applied to.
using MarginalCdf = std::function<double(double)>;

// entry_ij = 1 / (1 - F_j(x_ij)). Throws DegenerateMarginError when some
// F_j(x_ij) >= 1.
Sample to_pareto(const Sample& raw, const std::vector<MarginalCdf>& cdfs);

// Rank standardization: entry_ij = (n + 1) / (n + 1 - rank_ij), ranks taken
// per column with the smallest value at rank 1. Ties get stable ordinal
// ranks (earlier row, lower rank), so each column of the result is exactly
// {(n+1)/(n+1-r) : r = 1..n}.
Sample to_pseudo(const Sample& raw);

// Stable ordinal ranks (1-based) of a column.
std::vector<std::size_t> ordinal_ranks(std::span<const double> values);

namespace cdfs {
MarginalCdf uniform();       // F(x) = x on [0, 1]
MarginalCdf unit_pareto();   // F(x) = 1 - 1/x for x >= 1
MarginalCdf unit_exponential();
}  // namespace cdfs

}  // namespace kltail
