#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace dirgamma {

/// Seed for every sampler. Identical seeds give identical streams.
struct RngSeed {
  std::uint64_t value = 0;
};

/// SplitMix64 finalizer; used for seeding and for deriving sub-stream seeds.
std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// Seed for replication `index` of stream `stream` under a master seed.
/// Replications keyed this way are independent of scheduling order.
RngSeed derive_seed(RngSeed master, std::uint64_t stream, std::uint64_t index = 0) noexcept;

/// xoshiro256** (Blackman & Vigna), seeded through SplitMix64.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(RngSeed seed) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// Advance by 2^128 draws; yields non-overlapping sub-streams.
  void jump() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform on (0, 1).
  double uniform_open() noexcept;

 private:
  std::array<std::uint64_t, 4> s_;
};

double standard_normal(Xoshiro256& rng) noexcept;

/// Gamma(shape, 1) variate by the Marsaglia-Tsang squeeze method. Shapes
/// below one are boosted: Gamma(a) = Gamma(a + 1) · U^{1/a}.
double gamma_variate(Xoshiro256& rng, double shape) noexcept;

/// ln of a Gamma(shape, 1) variate; keeps tiny shapes from underflowing to 0.
double log_gamma_variate(Xoshiro256& rng, double shape) noexcept;

}  // namespace dirgamma
