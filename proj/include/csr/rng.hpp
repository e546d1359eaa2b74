#pragma once

#include <cstdint>

namespace csr {

// SplitMix64 finalizer (Stafford "Mix13"). Bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t z) noexcept;

// Combines an ordered list of words into one seed. Used to derive per-trial
// seeds from (base_seed, M, trial) independently of execution order.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept;
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) noexcept;

// Counter-based generator: the i-th output (i = 0, 1, ...) is
//   mix64(key + (i + 1) * 0x9E3779B97F4A7C15)
// with key = mix64(seed). This is SplitMix64 evaluated at an explicit counter,
// so any output can be reproduced from (seed, i) alone. `split` derives an
// independent child stream from this stream's key and a stream id without
// advancing the parent.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) noexcept;

  std::uint64_t next_u64() noexcept;

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() noexcept;

  // Uniform integer in [0, bound). Lemire's multiply-shift with rejection, so
  // the result is exactly uniform. `bound` must be nonzero.
  std::uint64_t bounded(std::uint64_t bound) noexcept;

  CounterRng split(std::uint64_t stream) const noexcept;

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  struct FromKey {};
  CounterRng(FromKey, std::uint64_t key) noexcept : key_(key) {}

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace csr
