#include "qtransport/simd.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>

namespace qt::simd::avx2 {

namespace {

#define QT_AVX2 __attribute__((target("avx2,fma")))

// exp(a) for a in [-inf, 0]; results below the normal range flush to zero.
QT_AVX2 inline __m256d exp_nonpositive(__m256d a) {
  const __m256d lo = _mm256_set1_pd(-708.0);
  const __m256d underflow = _mm256_cmp_pd(a, lo, _CMP_LT_OQ);
  a = _mm256_max_pd(a, lo);
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634);
  const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
  const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
  const __m256d nd = _mm256_round_pd(_mm256_mul_pd(a, log2e), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(nd, ln2_hi, a);
  r = _mm256_fnmadd_pd(nd, ln2_lo, r);
  // Taylor polynomial to degree 13 on |r| <= ln2/2.
  static constexpr double c[] = {1.0 / 6227020800.0, 1.0 / 479001600.0, 1.0 / 39916800.0, 1.0 / 3628800.0,
                                 1.0 / 362880.0,     1.0 / 40320.0,     1.0 / 5040.0,     1.0 / 720.0,
                                 1.0 / 120.0,        1.0 / 24.0,        1.0 / 6.0,        0.5,
                                 1.0,                1.0};
  __m256d p = _mm256_set1_pd(c[0]);
  for (int k = 1; k < 14; ++k) p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(c[k]));
  const __m256d magic = _mm256_set1_pd(6755399441055744.0);  // 2^52 + 2^51
  const __m256i ni = _mm256_sub_epi64(_mm256_castpd_si256(_mm256_add_pd(nd, magic)), _mm256_castpd_si256(magic));
  const __m256i bits = _mm256_slli_epi64(_mm256_add_epi64(ni, _mm256_set1_epi64x(1023)), 52);
  const __m256d res = _mm256_mul_pd(p, _mm256_castsi256_pd(bits));
  return _mm256_andnot_pd(underflow, res);
}

QT_AVX2 inline __m256d fermi4(__m256d x, __m256d mu, __m256d beta) {
  const __m256d y = _mm256_mul_pd(_mm256_sub_pd(x, mu), beta);
  const __m256d sign = _mm256_set1_pd(-0.0);
  const __m256d neg_abs = _mm256_or_pd(y, sign);
  const __m256d t = exp_nonpositive(neg_abs);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d denom = _mm256_add_pd(one, t);
  const __m256d pos = _mm256_cmp_pd(y, _mm256_setzero_pd(), _CMP_GT_OQ);
  const __m256d num = _mm256_blendv_pd(one, t, pos);
  return _mm256_div_pd(num, denom);
}

QT_AVX2 void fermi_impl(const double* x, std::size_t n, double mu, double temperature, double* out) {
  const __m256d vmu = _mm256_set1_pd(mu);
  const __m256d vbeta = _mm256_set1_pd(1.0 / temperature);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, fermi4(_mm256_loadu_pd(x + i), vmu, vbeta));
  if (i < n) scalar::fermi_batch(x + i, n - i, mu, temperature, out + i);
}

QT_AVX2 void fermi_lorentz_impl(const double* x, std::size_t n, double mu, double temperature, double center,
                                double width, double* out) {
  const __m256d vmu = _mm256_set1_pd(mu);
  const __m256d vbeta = _mm256_set1_pd(1.0 / temperature);
  const __m256d vc = _mm256_set1_pd(center);
  const __m256d vw = _mm256_set1_pd(width);
  const __m256d vhw2 = _mm256_set1_pd(0.25 * width * width);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xv = _mm256_loadu_pd(x + i);
    const __m256d d = _mm256_sub_pd(xv, vc);
    const __m256d lor = _mm256_div_pd(vw, _mm256_fmadd_pd(d, d, vhw2));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(fermi4(xv, vmu, vbeta), lor));
  }
  if (i < n) scalar::fermi_lorentz_batch(x + i, n - i, mu, temperature, center, width, out + i);
}

}  // namespace

bool supported() {
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok;
}

void fermi_batch(const double* x, std::size_t n, double mu, double temperature, double* out) {
  fermi_impl(x, n, mu, temperature, out);
}

void fermi_lorentz_batch(const double* x, std::size_t n, double mu, double temperature, double center,
                         double width, double* out) {
  fermi_lorentz_impl(x, n, mu, temperature, center, width, out);
}

}  // namespace qt::simd::avx2

#else

namespace qt::simd::avx2 {
bool supported() { return false; }
void fermi_batch(const double* x, std::size_t n, double mu, double temperature, double* out) {
  scalar::fermi_batch(x, n, mu, temperature, out);
}
void fermi_lorentz_batch(const double* x, std::size_t n, double mu, double temperature, double center,
                         double width, double* out) {
  scalar::fermi_lorentz_batch(x, n, mu, temperature, center, width, out);
}
}  // namespace qt::simd::avx2

#endif
