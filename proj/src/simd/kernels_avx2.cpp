// AVX2+FMA kernels. Compiled for the generic target; every function carries
// a target attribute and is only reached after runtime CPU detection.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "dirgamma/detail/incomplete_gamma.hpp"
#include "dirgamma/simd/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define DIRGAMMA_AVX2 __attribute__((target("avx2,fma")))
#define DIRGAMMA_HAVE_AVX2 1
#else
#define DIRGAMMA_HAVE_AVX2 0
#endif

namespace dirgamma::simd::avx2 {

#if DIRGAMMA_HAVE_AVX2
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;
constexpr double kLn2Hi = 0x1.62e42fee00000p-1;
constexpr double kLn2Lo = 0x1.a39ef35793c76p-33;
constexpr double kMagic = 0x1.8p52;

DIRGAMMA_AVX2 inline __m256d abs_pd(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

// 2^n for integer-valued n in the normal exponent range.
DIRGAMMA_AVX2 inline __m256d pow2i(__m256d n) {
  const __m256d magic = _mm256_set1_pd(kMagic);
  __m256i bits = _mm256_sub_epi64(_mm256_castpd_si256(_mm256_add_pd(n, magic)),
                                  _mm256_castpd_si256(magic));
  bits = _mm256_add_epi64(bits, _mm256_set1_epi64x(1023));
  return _mm256_castsi256_pd(_mm256_slli_epi64(bits, 52));
}

DIRGAMMA_AVX2 inline __m256d vexp(__m256d x) {
  const __m256d hi = _mm256_set1_pd(709.782712893384);
  const __m256d lo = _mm256_set1_pd(-745.1332191019412);
  const __m256d xc = _mm256_min_pd(_mm256_max_pd(x, lo), hi);
  const __m256d n = _mm256_round_pd(_mm256_mul_pd(xc, _mm256_set1_pd(1.4426950408889634)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, _mm256_set1_pd(kLn2Hi), xc);
  r = _mm256_fnmadd_pd(n, _mm256_set1_pd(kLn2Lo), r);
  // Taylor series of e^r through r^13; |r| <= ln2/2.
  static constexpr double kInvFact[] = {
      1.0 / 6227020800.0, 1.0 / 479001600.0, 1.0 / 39916800.0, 1.0 / 3628800.0,
      1.0 / 362880.0,     1.0 / 40320.0,     1.0 / 5040.0,     1.0 / 720.0,
      1.0 / 120.0,        1.0 / 24.0,        1.0 / 6.0,        0.5,
      1.0,                1.0};
  __m256d poly = _mm256_set1_pd(kInvFact[0]);
  for (int k = 1; k < 14; ++k) poly = _mm256_fmadd_pd(poly, r, _mm256_set1_pd(kInvFact[k]));
  const __m256d n1 = _mm256_floor_pd(_mm256_mul_pd(n, _mm256_set1_pd(0.5)));
  const __m256d n2 = _mm256_sub_pd(n, n1);
  __m256d out = _mm256_mul_pd(_mm256_mul_pd(poly, pow2i(n1)), pow2i(n2));
  out = _mm256_blendv_pd(out, _mm256_set1_pd(std::numeric_limits<double>::infinity()),
                         _mm256_cmp_pd(x, hi, _CMP_GT_OQ));
  out = _mm256_blendv_pd(out, _mm256_setzero_pd(), _mm256_cmp_pd(x, lo, _CMP_LT_OQ));
  return out;
}

DIRGAMMA_AVX2 inline __m256d vlog(__m256d x) {
  const __m256d magic = _mm256_set1_pd(kMagic);
  const __m256d small = _mm256_cmp_pd(x, _mm256_set1_pd(std::numeric_limits<double>::min()),
                                      _CMP_LT_OQ);
  const __m256d xs = _mm256_blendv_pd(x, _mm256_mul_pd(x, _mm256_set1_pd(0x1.0p52)), small);
  const __m256i bits = _mm256_castpd_si256(xs);
  const __m256i exp_bits = _mm256_srli_epi64(bits, 52);
  const __m256d m = _mm256_castsi256_pd(
      _mm256_or_si256(_mm256_and_si256(bits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL)),
                      _mm256_set1_epi64x(0x3FF0000000000000LL)));
  __m256d e = _mm256_sub_pd(
      _mm256_castsi256_pd(_mm256_add_epi64(exp_bits, _mm256_castpd_si256(magic))), magic);
  e = _mm256_sub_pd(e, _mm256_set1_pd(1023.0));
  e = _mm256_sub_pd(e, _mm256_and_pd(small, _mm256_set1_pd(52.0)));
  const __m256d big = _mm256_cmp_pd(m, _mm256_set1_pd(1.4142135623730951), _CMP_GT_OQ);
  const __m256d mm = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
  e = _mm256_add_pd(e, _mm256_and_pd(big, _mm256_set1_pd(1.0)));
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d s = _mm256_div_pd(_mm256_sub_pd(mm, one), _mm256_add_pd(mm, one));
  const __m256d s2 = _mm256_mul_pd(s, s);
  // 2·atanh(s) = 2s Σ s^{2k}/(2k+1), |s| <= 0.1716.
  __m256d poly = _mm256_set1_pd(1.0 / 23.0);
  for (int k = 10; k >= 0; --k) {
    poly = _mm256_fmadd_pd(poly, s2, _mm256_set1_pd(1.0 / (2.0 * k + 1.0)));
  }
  const __m256d log_m = _mm256_mul_pd(_mm256_add_pd(s, s), poly);
  __m256d out = _mm256_fmadd_pd(e, _mm256_set1_pd(kLn2Hi),
                                _mm256_fmadd_pd(e, _mm256_set1_pd(kLn2Lo), log_m));
  out = _mm256_blendv_pd(out, _mm256_set1_pd(-std::numeric_limits<double>::infinity()),
                         _mm256_cmp_pd(x, _mm256_setzero_pd(), _CMP_EQ_OQ));
  out = _mm256_blendv_pd(out, x,
                         _mm256_cmp_pd(x, _mm256_set1_pd(std::numeric_limits<double>::max()),
                                       _CMP_GT_OQ));
  return out;
}

// ln(1 − u) for u in [0, 1).
DIRGAMMA_AVX2 inline __m256d vlog1m(__m256d u) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d series = _mm256_mul_pd(
      _mm256_sub_pd(_mm256_setzero_pd(), u),
      _mm256_fmadd_pd(u, _mm256_fmadd_pd(u, _mm256_set1_pd(1.0 / 3.0), _mm256_set1_pd(0.5)), one));
  const __m256d direct = vlog(_mm256_sub_pd(one, u));
  return _mm256_blendv_pd(direct, series, _mm256_cmp_pd(u, _mm256_set1_pd(1e-4), _CMP_LT_OQ));
}

DIRGAMMA_AVX2 void gamma_block(const detail::IncompleteGamma& ig, double scale, double log_scale,
                               const double* x, const double* log_x, double* cdf, double* log_cdf,
                               double* log_pdf) {
  const double a = ig.shape();
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vlgam = _mm256_set1_pd(ig.log_gamma_shape());
  const __m256d eps = _mm256_set1_pd(kEps);
  const __m256d tiny = _mm256_set1_pd(kTiny);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d z = _mm256_div_pd(_mm256_loadu_pd(x), _mm256_set1_pd(scale));
  const __m256d log_z = _mm256_sub_pd(_mm256_loadu_pd(log_x), _mm256_set1_pd(log_scale));
  const __m256d lp = _mm256_sub_pd(_mm256_sub_pd(_mm256_mul_pd(va, log_z), z), vlgam);
  const __m256d is_series = _mm256_cmp_pd(z, _mm256_set1_pd(a + 1.0), _CMP_LT_OQ);
  const int cap = 10000 + static_cast<int>(50.0 * std::sqrt(a));

  __m256d lower = _mm256_setzero_pd();
  __m256d log_lower = _mm256_setzero_pd();

  if (_mm256_movemask_pd(is_series) != 0) {
    __m256d ap = va;
    __m256d del = _mm256_div_pd(one, va);
    __m256d sum = del;
    __m256d active = is_series;
    for (int n = 0; n < cap; ++n) {
      ap = _mm256_add_pd(ap, one);
      del = _mm256_and_pd(_mm256_mul_pd(del, _mm256_div_pd(z, ap)), active);
      sum = _mm256_add_pd(sum, del);
      const __m256d done = _mm256_cmp_pd(abs_pd(del), _mm256_mul_pd(abs_pd(sum), eps), _CMP_LT_OQ);
      active = _mm256_andnot_pd(done, active);
      if (_mm256_movemask_pd(active) == 0) break;
    }
    const __m256d ll = _mm256_add_pd(lp, vlog(sum));
    log_lower = _mm256_blendv_pd(log_lower, ll, is_series);
    lower = _mm256_blendv_pd(lower, vexp(ll), is_series);
  }

  const __m256d is_fraction = _mm256_andnot_pd(is_series, _mm256_castsi256_pd(_mm256_set1_epi64x(-1)));
  if (_mm256_movemask_pd(is_fraction) != 0) {
    __m256d b = _mm256_sub_pd(_mm256_add_pd(z, one), va);
    __m256d c = _mm256_set1_pd(1.0 / kTiny);
    __m256d d = _mm256_div_pd(one, b);
    __m256d h = d;
    __m256d active = is_fraction;
    const __m256d two = _mm256_set1_pd(2.0);
    for (int i = 1; i <= cap; ++i) {
      const double di = static_cast<double>(i);
      const __m256d an = _mm256_set1_pd(-di * (di - a));
      b = _mm256_add_pd(b, two);
      d = _mm256_add_pd(_mm256_mul_pd(an, d), b);
      d = _mm256_blendv_pd(d, tiny, _mm256_cmp_pd(abs_pd(d), tiny, _CMP_LT_OQ));
      c = _mm256_add_pd(b, _mm256_div_pd(an, c));
      c = _mm256_blendv_pd(c, tiny, _mm256_cmp_pd(abs_pd(c), tiny, _CMP_LT_OQ));
      d = _mm256_div_pd(one, d);
      const __m256d del = _mm256_mul_pd(d, c);
      h = _mm256_blendv_pd(h, _mm256_mul_pd(h, del), active);
      const __m256d done = _mm256_cmp_pd(abs_pd(_mm256_sub_pd(del, one)), eps, _CMP_LT_OQ);
      active = _mm256_andnot_pd(done, active);
      if (_mm256_movemask_pd(active) == 0) break;
    }
    const __m256d upper = _mm256_mul_pd(vexp(lp), h);
    lower = _mm256_blendv_pd(lower, _mm256_sub_pd(one, upper), is_fraction);
    log_lower = _mm256_blendv_pd(log_lower, vlog1m(upper), is_fraction);
  }

  const __m256d lpdf = _mm256_sub_pd(
      _mm256_sub_pd(_mm256_sub_pd(_mm256_mul_pd(_mm256_set1_pd(a - 1.0), log_z), z),
                    _mm256_set1_pd(log_scale)),
      vlgam);
  _mm256_storeu_pd(cdf, lower);
  _mm256_storeu_pd(log_cdf, log_lower);
  _mm256_storeu_pd(log_pdf, lpdf);
}

DIRGAMMA_AVX2 double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

DIRGAMMA_AVX2 void gamma_baseline(double shape, double scale, std::span<const double> x,
                                  std::span<const double> log_x, const BaselineColumns& out) {
  const detail::IncompleteGamma ig(shape);
  const double log_scale = std::log(scale);
  const std::size_t n = x.size();
  std::size_t r = 0;
  for (; r + 4 <= n; r += 4) {
    gamma_block(ig, scale, log_scale, x.data() + r, log_x.data() + r, out.cdf.data() + r,
                out.log_cdf.data() + r, out.log_pdf.data() + r);
  }
  if (r < n) {
    // Pad the tail to a full vector with a copy of the last element.
    double xb[4], lxb[4], cb[4], lcb[4], lpb[4];
    for (std::size_t k = 0; k < 4; ++k) {
      const std::size_t src = std::min(r + k, n - 1);
      xb[k] = x[src];
      lxb[k] = log_x[src];
    }
    gamma_block(ig, scale, log_scale, xb, lxb, cb, lcb, lpb);
    for (std::size_t k = 0; r + k < n; ++k) {
      out.cdf[r + k] = cb[k];
      out.log_cdf[r + k] = lcb[k];
      out.log_pdf[r + k] = lpb[k];
    }
  }
}

DIRGAMMA_AVX2 double dg_loglik_reduce(std::size_t n, const ReductionColumns& cols,
                                      std::span<const double> alpha) {
  const std::size_t p = cols.cdf.size();
  const __m256d rest_weight = _mm256_set1_pd(alpha[p] - 1.0);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d floor = _mm256_set1_pd(1e-300);
  __m256d total = zero;
  std::size_t r = 0;
  for (; r + 4 <= n; r += 4) {
    __m256d sum = zero;
    __m256d acc = zero;
    for (std::size_t i = 0; i < p; ++i) {
      sum = _mm256_add_pd(sum, _mm256_loadu_pd(cols.cdf[i] + r));
      const __m256d term = _mm256_add_pd(
          _mm256_loadu_pd(cols.log_pdf[i] + r),
          _mm256_mul_pd(_mm256_set1_pd(alpha[i] - 1.0), _mm256_loadu_pd(cols.log_cdf[i] + r)));
      acc = _mm256_add_pd(acc, term);
    }
    const __m256d inside = _mm256_and_pd(_mm256_cmp_pd(sum, zero, _CMP_GT_OQ),
                                         _mm256_cmp_pd(sum, one, _CMP_LT_OQ));
    if (_mm256_movemask_pd(inside) != 0xF) return -std::numeric_limits<double>::infinity();
    const __m256d rest = _mm256_max_pd(_mm256_sub_pd(one, sum), floor);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(rest_weight, vlog(rest)));
    total = _mm256_add_pd(total, acc);
  }
  double tail = 0.0;
  if (r < n) {
    std::vector<const double*> c(p), lc(p), lp(p);
    for (std::size_t i = 0; i < p; ++i) {
      c[i] = cols.cdf[i] + r;
      lc[i] = cols.log_cdf[i] + r;
      lp[i] = cols.log_pdf[i] + r;
    }
    tail = scalar::dg_loglik_reduce(n - r, ReductionColumns{c, lc, lp}, alpha);
  }
  return hsum(total) + tail;
}

DIRGAMMA_AVX2 void ecdf_counts(std::span<const double> columns, std::size_t n, std::size_t p,
                               std::span<const double> points, std::span<std::uint32_t> counts) {
  const std::size_t k = counts.size();
  const __m256d all = _mm256_castsi256_pd(_mm256_set1_epi64x(-1));
  for (std::size_t j = 0; j < k; ++j) {
    const double* pt = points.data() + j * p;
    std::uint32_t count = 0;
    std::size_t r = 0;
    for (; r + 8 <= n; r += 8) {
      __m256d m0 = all;
      __m256d m1 = all;
      for (std::size_t c = 0; c < p; ++c) {
        const __m256d bound = _mm256_set1_pd(pt[c]);
        const double* col = columns.data() + c * n + r;
        m0 = _mm256_and_pd(m0, _mm256_cmp_pd(_mm256_loadu_pd(col), bound, _CMP_LE_OQ));
        m1 = _mm256_and_pd(m1, _mm256_cmp_pd(_mm256_loadu_pd(col + 4), bound, _CMP_LE_OQ));
      }
      count += static_cast<std::uint32_t>(__builtin_popcount(_mm256_movemask_pd(m0)) +
                                          __builtin_popcount(_mm256_movemask_pd(m1)));
    }
    for (; r < n; ++r) {
      bool below = true;
      for (std::size_t c = 0; c < p && below; ++c) below = columns[c * n + r] <= pt[c];
      count += below ? 1u : 0u;
    }
    counts[j] = count;
  }
}

#else  // no x86: forward to the scalar reference

void gamma_baseline(double shape, double scale, std::span<const double> x,
                    std::span<const double> log_x, const BaselineColumns& out) {
  scalar::gamma_baseline(shape, scale, x, log_x, out);
}
double dg_loglik_reduce(std::size_t n, const ReductionColumns& cols, std::span<const double> alpha) {
  return scalar::dg_loglik_reduce(n, cols, alpha);
}
void ecdf_counts(std::span<const double> columns, std::size_t n, std::size_t p,
                 std::span<const double> points, std::span<std::uint32_t> counts) {
  scalar::ecdf_counts(columns, n, p, points, counts);
}

#endif

}  // namespace dirgamma::simd::avx2
