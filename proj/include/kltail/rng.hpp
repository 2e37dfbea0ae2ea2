#pragma once

#include <cstdint>
#include <random>

namespace kltail {

// Reproducible random stream identified by (master_seed, stream_id).
//
// The engine is std::mt19937_64 seeded through std::seed_seq with the four
// 32-bit halves of the two identifiers. Both algorithms are fully specified
// by the standard, so a stream yields the same sequence on every conforming
// implementation. Distinct stream ids give distinct seed_seq states; the
// seed_seq mixing is what decorrelates neighbouring ids.
//
// Hierarchies (repetition r -> sample x / sample y / bootstrap replicate b)
// are built with child(), which folds the parent's identity into a new
// master seed with SplitMix64.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id);

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  // Independent stream derived from this stream's identity (not its state).
  RngStream child(std::uint64_t id) const;

  // Uniform on the open interval (0, 1), 53 bits of resolution.
  double uniform();
  // Standard exponential, mean 1.
  double exponential();
  // Positive alpha-stable variate with Laplace transform exp(-t^alpha),
  // Chambers-Mallows-Stuck construction. alpha = 1 returns exactly 1.
  double positive_stable(double alpha);

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace kltail
