#pragma once

#include "qtransport/numerics.hpp"

namespace oracle {

// Truncated power series sum_{k < terms} (A t)^k / k!.
inline qt::ComplexMatrix taylor_expm(const qt::ComplexMatrix& a, double t, int terms = 60) {
  const auto n = a.rows();
  qt::ComplexMatrix sum = qt::ComplexMatrix::Identity(n, n);
  qt::ComplexMatrix term = qt::ComplexMatrix::Identity(n, n);
  for (int k = 1; k < terms; ++k) {
    term = term * a * (t / k);
    sum += term;
  }
  return sum;
}

}  // namespace oracle
