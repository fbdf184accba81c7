#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace qt {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class NonConvergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};
class NonFinite : public NumericalError {
 public:
  using NumericalError::NumericalError;
};
class DegenerateSpectrum : public NumericalError {
 public:
  using NumericalError::NumericalError;
};
class NotStationary : public NumericalError {
 public:
  using NumericalError::NumericalError;
};
class DimensionMismatch : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  int max_subdivisions = 2000;
  double window_halfwidth = 40.0;

  void validate() const;
};

// Fills out[i] = f(x[i]) for a batch of abscissae.
using BatchIntegrand = std::function<void(std::span<const double> x, std::span<cplx> out)>;

// One additive piece of an integrand. Outside the core window the piece is
// assumed to behave like R(x) * exp(+-i frequency x) with R smooth and
// decaying (at least like 1/|x|), which decides how its tails are summed.
struct IntegrandTerm {
  BatchIntegrand f;
  double frequency = 0.0;
};

// Core window [center - W, center + W] with W = spec.window_halfwidth * scale.
// Breakpoints inside the window split the initial panels.
struct EnergyWindow {
  double center = 0.0;
  double scale = 1.0;
  std::vector<double> breakpoints;
  // Smallest feature width near the breakpoints; 0 picks scale / 64.
  double resolution = 0.0;
};

struct QuadratureResult {
  cplx value;
  double error = 0.0;
  int evaluations = 0;
};

// Integral of sum_k terms[k].f over the real line. No 1/(2 pi) measure is applied.
QuadratureResult integrate_real_line(std::span<const IntegrandTerm> terms, const EnergyWindow& window,
                                     const QuadratureSpec& spec);
QuadratureResult integrate_real_line(const BatchIntegrand& f, const EnergyWindow& window,
                                     const QuadratureSpec& spec, double frequency = 0.0);

// Adaptive Gauss-Kronrod on a finite interval. `period` > 0 seeds panels no
// longer than one period.
QuadratureResult integrate_interval(const BatchIntegrand& f, double a, double b, const QuadratureSpec& spec,
                                    std::span<const double> breakpoints = {}, double period = 0.0);

// Scalar convenience wrappers.
QuadratureResult integrate_interval(const std::function<cplx(double)>& f, double a, double b,
                                    const QuadratureSpec& spec);

ComplexMatrix expm(const ComplexMatrix& a, double t);

struct Eig2x2 {
  cplx lambda_plus;
  cplx lambda_minus;
  ComplexMatrix s;      // columns are eigenvectors (plus, minus)
  ComplexMatrix s_inv;
};

// Eigenvalue ordering: larger real part first, ties broken by larger imaginary part.
Eig2x2 eig2x2(const ComplexMatrix& a);

}  // namespace qt
