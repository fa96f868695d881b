#include "dirgamma/rng.hpp"

#include <cmath>

namespace dirgamma {
namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
  return (x << k) | (x >> (64 - k));
}

// Marsaglia-Tsang for shape >= 1.
double gamma_variate_large(Xoshiro256& rng, double shape) noexcept {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = standard_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform_open();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

RngSeed derive_seed(RngSeed master, std::uint64_t stream, std::uint64_t index) noexcept {
  std::uint64_t state = master.value;
  std::uint64_t h = splitmix64(state);
  state = h ^ (stream * 0xd1b54a32d192ed03ULL);
  h = splitmix64(state);
  state = h ^ (index * 0x8cb92ba72f3d8dd7ULL);
  return RngSeed{splitmix64(state)};
}

Xoshiro256::Xoshiro256(RngSeed seed) noexcept {
  std::uint64_t state = seed.value;
  for (auto& word : s_) word = splitmix64(state);
}

Xoshiro256::result_type Xoshiro256::operator()() noexcept {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

void Xoshiro256::jump() noexcept {
  static constexpr std::uint64_t kJump[] = {0x180ec6d33cfd0abaULL, 0xd5a61266f0c9392cULL,
                                            0xa9582618e03fc9aaULL, 0x39abdc4529b1661cULL};
  std::array<std::uint64_t, 4> acc{};
  for (std::uint64_t word : kJump) {
    for (int b = 0; b < 64; ++b) {
      if (word & (std::uint64_t{1} << b)) {
        for (int i = 0; i < 4; ++i) acc[i] ^= s_[i];
      }
      (*this)();
    }
  }
  s_ = acc;
}

double Xoshiro256::uniform() noexcept {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double Xoshiro256::uniform_open() noexcept {
  return (static_cast<double>((*this)() >> 12) + 0.5) * 0x1.0p-52;
}

double standard_normal(Xoshiro256& rng) noexcept {
  // Marsaglia polar method; the second variate is discarded so that the
  // generator carries no hidden state.
  for (;;) {
    const double u = 2.0 * rng.uniform() - 1.0;
    const double v = 2.0 * rng.uniform() - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

double gamma_variate(Xoshiro256& rng, double shape) noexcept {
  if (shape >= 1.0) return gamma_variate_large(rng, shape);
  const double g = gamma_variate_large(rng, shape + 1.0);
  return g * std::pow(rng.uniform_open(), 1.0 / shape);
}

double log_gamma_variate(Xoshiro256& rng, double shape) noexcept {
  if (shape >= 1.0) return std::log(gamma_variate_large(rng, shape));
  const double g = gamma_variate_large(rng, shape + 1.0);
  return std::log(g) + std::log(rng.uniform_open()) / shape;
}

}  // namespace dirgamma
