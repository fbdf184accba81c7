#include <cmath>

#include "qtransport/simd.hpp"

namespace qt::simd::scalar {

void fermi_batch(const double* x, std::size_t n, double mu, double temperature, double* out) {
  const double beta = 1.0 / temperature;
  for (std::size_t i = 0; i < n; ++i) {
    const double y = (x[i] - mu) * beta;
    const double t = std::exp(-std::abs(y));
    out[i] = y > 0.0 ? t / (1.0 + t) : 1.0 / (1.0 + t);
  }
}

void fermi_lorentz_batch(const double* x, std::size_t n, double mu, double temperature, double center,
                         double width, double* out) {
  fermi_batch(x, n, mu, temperature, out);
  const double hw2 = 0.25 * width * width;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - center;
    out[i] *= width / (hw2 + d * d);
  }
}

}  // namespace qt::simd::scalar
