#pragma once

#include <cstddef>
#include <string_view>

// Batch kernels for the energy integrands. Every kernel has a scalar
// reference implementation; vector variants are selected once at runtime.
namespace qt::simd {

enum class Isa { Scalar, Avx2, Neon };

Isa active_isa();
std::string_view isa_name(Isa isa);
bool isa_available(Isa isa);

// out[i] = 1 / (exp((x[i] - mu) / T) + 1)
void fermi_batch(const double* x, std::size_t n, double mu, double temperature, double* out);

// out[i] = fermi(x[i]) * width / ((width/2)^2 + (x[i] - center)^2)
void fermi_lorentz_batch(const double* x, std::size_t n, double mu, double temperature, double center,
                         double width, double* out);

// Explicit variants, for equivalence tests.
namespace scalar {
void fermi_batch(const double* x, std::size_t n, double mu, double temperature, double* out);
void fermi_lorentz_batch(const double* x, std::size_t n, double mu, double temperature, double center,
                         double width, double* out);
}  // namespace scalar

namespace avx2 {
bool supported();
void fermi_batch(const double* x, std::size_t n, double mu, double temperature, double* out);
void fermi_lorentz_batch(const double* x, std::size_t n, double mu, double temperature, double center,
                         double width, double* out);
}  // namespace avx2

namespace neon {
bool supported();
void fermi_batch(const double* x, std::size_t n, double mu, double temperature, double* out);
void fermi_lorentz_batch(const double* x, std::size_t n, double mu, double temperature, double center,
                         double width, double* out);
}  // namespace neon

}  // namespace qt::simd
