#pragma once

// Data-parallel inner loops of the likelihood and ecdf code. Each kernel has
// a scalar reference implementation and an AVX2+FMA implementation; the
// dispatched entry points pick one at runtime. The two are required to agree
// to within a few ulps (see tests/test_simd_equivalence.cpp).

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace dirgamma::simd {

enum class Backend { Scalar, Avx2 };

/// Per-row output of the gamma baseline kernel for one coordinate.
struct BaselineColumns {
  std::span<double> cdf;      // G(x) = P(shape, x / scale)
  std::span<double> log_cdf;  // ln G(x)
  std::span<double> log_pdf;  // ln g(x)
};

/// Per-coordinate inputs to the likelihood reduction, each of length n.
struct ReductionColumns {
  std::span<const double* const> cdf;
  std::span<const double* const> log_cdf;
  std::span<const double* const> log_pdf;
};

/// Signatures shared by every backend.
///
/// gamma_baseline: evaluates the Gamma(shape, scale) cdf, log-cdf and
///   log-density at strictly positive x (log_x must hold ln x).
/// dg_loglik_reduce: Σ_rows [Σ_i (ln g_i + (α_i − 1) ln G_i) + (α_{p+1} − 1) ln(1 − Σ_i G_i)],
///   or −∞ when some row has Σ_i G_i ∉ (0, 1). `alpha` has p + 1 entries.
/// ecdf_counts: counts[j] = #{r : columns[c][r] ≤ points[j·p + c] for every c}.
///   `columns` is column-major (p blocks of n values).
#define DIRGAMMA_KERNEL_DECLS                                                                 \
  void gamma_baseline(double shape, double scale, std::span<const double> x,                 \
                      std::span<const double> log_x, const BaselineColumns& out);             \
  double dg_loglik_reduce(std::size_t n, const ReductionColumns& cols,                         \
                          std::span<const double> alpha);                                     \
  void ecdf_counts(std::span<const double> columns, std::size_t n, std::size_t p,              \
                   std::span<const double> points, std::span<std::uint32_t> counts);

namespace scalar {
DIRGAMMA_KERNEL_DECLS
}
namespace avx2 {
DIRGAMMA_KERNEL_DECLS
}

// Dispatched versions.
DIRGAMMA_KERNEL_DECLS

#undef DIRGAMMA_KERNEL_DECLS

bool backend_available(Backend backend) noexcept;
/// Best backend the running CPU supports.
Backend detected_backend() noexcept;
Backend active_backend() noexcept;
/// Forces a backend; falls back to Scalar if the requested one is unavailable.
void set_backend(Backend backend) noexcept;
std::string_view backend_name(Backend backend) noexcept;

}  // namespace dirgamma::simd
