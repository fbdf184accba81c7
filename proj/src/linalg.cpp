#include <cmath>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "qtransport/numerics.hpp"

namespace qt {

ComplexMatrix expm(const ComplexMatrix& a, double t) {
  if (a.rows() != a.cols()) throw DimensionMismatch("expm: matrix must be square");
  if (a.rows() > 64) throw DimensionMismatch("expm: dimension above 64");
  if (!std::isfinite(t)) throw NonFinite("expm: non-finite time");
  if (t == 0.0) return ComplexMatrix::Identity(a.rows(), a.cols());
  ComplexMatrix at = a * t;
  ComplexMatrix e = at.exp();
  if (!e.allFinite()) {
    std::ostringstream os;
    os << "expm overflow (dim " << a.rows() << ", t=" << t << ")";
    throw NonFinite(os.str());
  }
  return e;
}

namespace {

bool ordered_before(cplx x, cplx y) {
  if (x.real() != y.real()) return x.real() > y.real();
  return x.imag() > y.imag();
}

Eigen::Vector2cd eigenvector(const ComplexMatrix& a, cplx lambda) {
  const cplx b = a(0, 1), c = a(1, 0);
  Eigen::Vector2cd v1(b, lambda - a(0, 0));
  Eigen::Vector2cd v2(lambda - a(1, 1), c);
  Eigen::Vector2cd v = v1.norm() >= v2.norm() ? v1 : v2;
  const double n = v.norm();
  if (n == 0.0) {
    // Diagonal matrix: pick the axis matching lambda.
    return std::abs(a(0, 0) - lambda) <= std::abs(a(1, 1) - lambda) ? Eigen::Vector2cd(1.0, 0.0)
                                                                      : Eigen::Vector2cd(0.0, 1.0);
  }
  return v / n;
}

}  // namespace

Eig2x2 eig2x2(const ComplexMatrix& a) {
  if (a.rows() != 2 || a.cols() != 2) throw DimensionMismatch("eig2x2: matrix must be 2x2");
  const cplx half_tr = 0.5 * (a(0, 0) + a(1, 1));
  const cplx half_diff = 0.5 * (a(0, 0) - a(1, 1));
  const cplx disc = std::sqrt(half_diff * half_diff + a(0, 1) * a(1, 0));
  cplx l1 = half_tr + disc;
  cplx l2 = half_tr - disc;
  const double scale = a.norm();
  if (std::abs(l1 - l2) < 1e-10 * scale || scale == 0.0) {
    std::ostringstream os;
    os << "eig2x2: eigenvalues coincide (|dl|=" << std::abs(l1 - l2) << ", |A|=" << scale << ")";
    throw DegenerateSpectrum(os.str());
  }
  if (!ordered_before(l1, l2)) std::swap(l1, l2);
  Eig2x2 out;
  out.lambda_plus = l1;
  out.lambda_minus = l2;
  out.s = ComplexMatrix(2, 2);
  out.s.col(0) = eigenvector(a, l1);
  out.s.col(1) = eigenvector(a, l2);
  const cplx det = out.s(0, 0) * out.s(1, 1) - out.s(0, 1) * out.s(1, 0);
  if (std::abs(det) < 1e-14) throw DegenerateSpectrum("eig2x2: eigenvectors are parallel");
  out.s_inv = ComplexMatrix(2, 2);
  out.s_inv << out.s(1, 1) / det, -out.s(0, 1) / det, -out.s(1, 0) / det, out.s(0, 0) / det;
  return out;
}

}  // namespace qt
