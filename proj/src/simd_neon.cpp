#include "qtransport/simd.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>

namespace qt::simd::neon {

namespace {

inline float64x2_t exp_nonpositive(float64x2_t a) {
  const float64x2_t lo = vdupq_n_f64(-708.0);
  const uint64x2_t underflow = vcltq_f64(a, lo);
  a = vmaxq_f64(a, lo);
  const float64x2_t nd = vrndnq_f64(vmulq_f64(a, vdupq_n_f64(1.4426950408889634)));
  float64x2_t r = vfmsq_f64(a, nd, vdupq_n_f64(6.93147180369123816490e-01));
  r = vfmsq_f64(r, nd, vdupq_n_f64(1.90821492927058770002e-10));
  static constexpr double c[] = {1.0 / 6227020800.0, 1.0 / 479001600.0, 1.0 / 39916800.0, 1.0 / 3628800.0,
                                 1.0 / 362880.0,     1.0 / 40320.0,     1.0 / 5040.0,     1.0 / 720.0,
                                 1.0 / 120.0,        1.0 / 24.0,        1.0 / 6.0,        0.5,
                                 1.0,                1.0};
  float64x2_t p = vdupq_n_f64(c[0]);
  for (int k = 1; k < 14; ++k) p = vfmaq_f64(vdupq_n_f64(c[k]), p, r);
  const int64x2_t ni = vcvtq_s64_f64(nd);
  const int64x2_t bits = vshlq_n_s64(vaddq_s64(ni, vdupq_n_s64(1023)), 52);
  const float64x2_t res = vmulq_f64(p, vreinterpretq_f64_s64(bits));
  return vreinterpretq_f64_u64(vbicq_u64(vreinterpretq_u64_f64(res), underflow));
}

inline float64x2_t fermi2(float64x2_t x, float64x2_t mu, float64x2_t beta) {
  const float64x2_t y = vmulq_f64(vsubq_f64(x, mu), beta);
  const float64x2_t t = exp_nonpositive(vnegq_f64(vabsq_f64(y)));
  const float64x2_t one = vdupq_n_f64(1.0);
  const uint64x2_t pos = vcgtq_f64(y, vdupq_n_f64(0.0));
  const float64x2_t num = vbslq_f64(pos, t, one);
  return vdivq_f64(num, vaddq_f64(one, t));
}

}  // namespace

bool supported() { return true; }

void fermi_batch(const double* x, std::size_t n, double mu, double temperature, double* out) {
  const float64x2_t vmu = vdupq_n_f64(mu);
  const float64x2_t vbeta = vdupq_n_f64(1.0 / temperature);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(out + i, fermi2(vld1q_f64(x + i), vmu, vbeta));
  if (i < n) scalar::fermi_batch(x + i, n - i, mu, temperature, out + i);
}

void fermi_lorentz_batch(const double* x, std::size_t n, double mu, double temperature, double center,
                         double width, double* out) {
  const float64x2_t vmu = vdupq_n_f64(mu);
  const float64x2_t vbeta = vdupq_n_f64(1.0 / temperature);
  const float64x2_t vc = vdupq_n_f64(center);
  const float64x2_t vw = vdupq_n_f64(width);
  const float64x2_t vhw2 = vdupq_n_f64(0.25 * width * width);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t xv = vld1q_f64(x + i);
    const float64x2_t d = vsubq_f64(xv, vc);
    const float64x2_t lor = vdivq_f64(vw, vfmaq_f64(vhw2, d, d));
    vst1q_f64(out + i, vmulq_f64(fermi2(xv, vmu, vbeta), lor));
  }
  if (i < n) scalar::fermi_lorentz_batch(x + i, n - i, mu, temperature, center, width, out + i);
}

}  // namespace qt::simd::neon

#else

namespace qt::simd::neon {
bool supported() { return false; }
void fermi_batch(const double* x, std::size_t n, double mu, double temperature, double* out) {
  scalar::fermi_batch(x, n, mu, temperature, out);
}
void fermi_lorentz_batch(const double* x, std::size_t n, double mu, double temperature, double center,
                         double width, double* out) {
  scalar::fermi_lorentz_batch(x, n, mu, temperature, center, width, out);
}
}  // namespace qt::simd::neon

#endif
