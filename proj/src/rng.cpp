#include "kltail/rng.hpp"

#include <cmath>
#include <numbers>

#include "kltail/errors.hpp"

namespace kltail {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

std::mt19937_64 make_engine(std::uint64_t master_seed, std::uint64_t stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                    static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
    : master_seed_(master_seed), stream_id_(stream_id), engine_(make_engine(master_seed, stream_id)) {}

RngStream RngStream::child(std::uint64_t id) const {
  return RngStream(splitmix64(master_seed_ ^ splitmix64(stream_id_)), id);
}

double RngStream::uniform() {
  // Midpoint of one of 2^53 equal cells: never 0, never 1.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::exponential() { return -std::log(uniform()); }

double RngStream::positive_stable(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("positive stable index must lie in (0, 1]");
  if (alpha == 1.0) return 1.0;
  const double angle = std::numbers::pi * uniform();
  const double w = exponential();
  const double a = std::sin(alpha * angle) / std::pow(std::sin(angle), 1.0 / alpha);
  const double b = std::pow(std::sin((1.0 - alpha) * angle) / w, (1.0 - alpha) / alpha);
  return a * b;
}

}  // namespace kltail
