#include <atomic>

#include "dirgamma/simd/kernels.hpp"

namespace dirgamma::simd {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

std::atomic<Backend>& backend_slot() noexcept {
  static std::atomic<Backend> slot{detected_backend()};
  return slot;
}

}  // namespace

bool backend_available(Backend backend) noexcept {
  switch (backend) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2: {
      static const bool has = cpu_has_avx2();
      return has;
    }
  }
  return false;
}

Backend detected_backend() noexcept {
  return backend_available(Backend::Avx2) ? Backend::Avx2 : Backend::Scalar;
}

Backend active_backend() noexcept { return backend_slot().load(std::memory_order_relaxed); }

void set_backend(Backend backend) noexcept {
  backend_slot().store(backend_available(backend) ? backend : Backend::Scalar,
                       std::memory_order_relaxed);
}

std::string_view backend_name(Backend backend) noexcept {
  return backend == Backend::Avx2 ? "avx2" : "scalar";
}

void gamma_baseline(double shape, double scale, std::span<const double> x,
                    std::span<const double> log_x, const BaselineColumns& out) {
  if (active_backend() == Backend::Avx2) return avx2::gamma_baseline(shape, scale, x, log_x, out);
  scalar::gamma_baseline(shape, scale, x, log_x, out);
}

double dg_loglik_reduce(std::size_t n, const ReductionColumns& cols, std::span<const double> alpha) {
  if (active_backend() == Backend::Avx2) return avx2::dg_loglik_reduce(n, cols, alpha);
  return scalar::dg_loglik_reduce(n, cols, alpha);
}

void ecdf_counts(std::span<const double> columns, std::size_t n, std::size_t p,
                 std::span<const double> points, std::span<std::uint32_t> counts) {
  if (active_backend() == Backend::Avx2) return avx2::ecdf_counts(columns, n, p, points, counts);
  scalar::ecdf_counts(columns, n, p, points, counts);
}

}  // namespace dirgamma::simd
