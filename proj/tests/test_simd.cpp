#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"
#include "qtransport/simd.hpp"

using namespace qt::simd;

namespace {

using FermiFn = void (*)(const double*, std::size_t, double, double, double*);
using LorentzFn = void (*)(const double*, std::size_t, double, double, double, double, double*);

struct Variant {
  Isa isa;
  FermiFn fermi;
  LorentzFn lorentz;
};

std::vector<Variant> vector_variants() {
  std::vector<Variant> v;
  if (isa_available(Isa::Avx2)) v.push_back({Isa::Avx2, avx2::fermi_batch, avx2::fermi_lorentz_batch});
  if (isa_available(Isa::Neon)) v.push_back({Isa::Neon, neon::fermi_batch, neon::fermi_lorentz_batch});
  return v;
}

// The vector exp flushes results below exp(-708) to zero; the reference may
// return subnormals there.
double rel(double a, double b) {
  if (a == b || std::max(std::abs(a), std::abs(b)) < 1e-305) return 0.0;
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

std::vector<double> abscissae(std::size_t n, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-60.0, 60.0);
  std::vector<double> x(n);
  for (double& v : x) v = u(gen);
  // Extreme arguments land in the vector lanes and in the tail.
  const double special[] = {0.0, 1e-300, -1e-300, 700.0, -700.0, 745.0, -745.0, 1e6, -1e6, 35.9, -35.9};
  for (std::size_t i = 0; i < n && i < std::size(special); ++i) x[(i * 7) % n] = special[i];
  return x;
}

}  // namespace

TEST_CASE("scalar reference kernels") {
  const double x[] = {-3.0, 0.5, 0.5, 2.0, 40.0};
  double f[5], l[5];
  scalar::fermi_batch(x, 5, 0.5, 0.25, f);
  CHECK(f[1] == 0.5);
  CHECK(f[0] == doctest::Approx(1.0 / (std::exp(-14.0) + 1.0)).epsilon(1e-15));
  CHECK(f[3] == doctest::Approx(1.0 / (std::exp(6.0) + 1.0)).epsilon(1e-14));
  CHECK(f[4] >= 0.0);
  scalar::fermi_lorentz_batch(x, 5, 0.5, 0.25, 1.0, 2.0, l);
  for (int i = 0; i < 5; ++i) {
    const double d = x[i] - 1.0;
    CHECK(l[i] == doctest::Approx(f[i] * 2.0 / (1.0 + d * d)).epsilon(1e-15));
  }
}

TEST_CASE("vector kernels match the scalar reference") {
  const auto variants = vector_variants();
  if (variants.empty()) MESSAGE("no vector ISA available; only the scalar path is exercised");
  for (const Variant& v : variants) {
    CAPTURE(isa_name(v.isa));
    for (std::size_t n : {std::size_t{0}, std::size_t{1}, std::size_t{3}, std::size_t{4}, std::size_t{5},
                          std::size_t{7}, std::size_t{8}, std::size_t{31}, std::size_t{32}, std::size_t{257}}) {
      CAPTURE(n);
      const std::vector<double> x = abscissae(std::max<std::size_t>(n, 1), static_cast<unsigned>(n) + 1);
      for (double t : {1e-3, 0.02, 1.0, 7.5}) {
        for (double mu : {-1.5, 0.0, 2.25}) {
          std::vector<double> ref(n + 1, -1.0), got(n + 1, -1.0);
          scalar::fermi_batch(x.data(), n, mu, t, ref.data());
          v.fermi(x.data(), n, mu, t, got.data());
          double worst = 0.0;
          for (std::size_t i = 0; i < n; ++i) {
            CHECK(std::isfinite(got[i]));
            CHECK(got[i] >= 0.0);
            CHECK(got[i] <= 1.0);
            worst = std::max(worst, rel(got[i], ref[i]));
          }
          CHECK(worst < 1e-14);
          CHECK(got[n] == -1.0);

          scalar::fermi_lorentz_batch(x.data(), n, mu, t, 0.3, 0.8, ref.data());
          v.lorentz(x.data(), n, mu, t, 0.3, 0.8, got.data());
          worst = 0.0;
          for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, rel(got[i], ref[i]));
          CHECK(worst < 1e-14);
          CHECK(got[n] == -1.0);
        }
      }
    }
  }
}

TEST_CASE("runtime dispatch") {
  const Isa isa = active_isa();
  CHECK(isa_available(isa));
  CHECK(isa_available(Isa::Scalar));
  const char* forced = std::getenv("QT_SIMD");
  if (forced != nullptr && std::strcmp(forced, "scalar") == 0) CHECK(isa == Isa::Scalar);
  else if (isa_available(Isa::Avx2)) CHECK(isa == Isa::Avx2);
  else if (isa_available(Isa::Neon)) CHECK(isa == Isa::Neon);
  MESSAGE("active kernel set: " << isa_name(isa));

  const std::vector<double> x = abscissae(67, 99);
  std::vector<double> got(x.size()), ref(x.size());
  fermi_lorentz_batch(x.data(), x.size(), 0.4, 0.3, -0.2, 1.1, got.data());
  switch (isa) {
    case Isa::Avx2:
      avx2::fermi_lorentz_batch(x.data(), x.size(), 0.4, 0.3, -0.2, 1.1, ref.data());
      break;
    case Isa::Neon:
      neon::fermi_lorentz_batch(x.data(), x.size(), 0.4, 0.3, -0.2, 1.1, ref.data());
      break;
    case Isa::Scalar:
      scalar::fermi_lorentz_batch(x.data(), x.size(), 0.4, 0.3, -0.2, 1.1, ref.data());
      break;
  }
  CHECK(std::memcmp(got.data(), ref.data(), sizeof(double) * x.size()) == 0);
  CHECK(isa_name(Isa::Scalar) == "scalar");
}
