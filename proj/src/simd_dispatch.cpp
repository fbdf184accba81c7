#include <cstdlib>
#include <cstring>

#include "qtransport/simd.hpp"

namespace qt::simd {

namespace {

using FermiFn = void (*)(const double*, std::size_t, double, double, double*);
using FermiLorentzFn = void (*)(const double*, std::size_t, double, double, double, double, double*);

struct Table {
  Isa isa;
  FermiFn fermi;
  FermiLorentzFn fermi_lorentz;
};

Table select() {
  // QT_SIMD=scalar forces the reference path.
  const char* forced = std::getenv("QT_SIMD");
  const bool scalar_only = forced != nullptr && std::strcmp(forced, "scalar") == 0;
  if (!scalar_only && avx2::supported()) return {Isa::Avx2, avx2::fermi_batch, avx2::fermi_lorentz_batch};
  if (!scalar_only && neon::supported()) return {Isa::Neon, neon::fermi_batch, neon::fermi_lorentz_batch};
  return {Isa::Scalar, scalar::fermi_batch, scalar::fermi_lorentz_batch};
}

const Table& table() {
  static const Table t = select();
  return t;
}

}  // namespace

Isa active_isa() { return table().isa; }

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Avx2:
      return "avx2";
    case Isa::Neon:
      return "neon";
    case Isa::Scalar:
      break;
  }
  return "scalar";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Avx2:
      return avx2::supported();
    case Isa::Neon:
      return neon::supported();
    case Isa::Scalar:
      break;
  }
  return true;
}

void fermi_batch(const double* x, std::size_t n, double mu, double temperature, double* out) {
  table().fermi(x, n, mu, temperature, out);
}

void fermi_lorentz_batch(const double* x, std::size_t n, double mu, double temperature, double center,
                         double width, double* out) {
  table().fermi_lorentz(x, n, mu, temperature, center, width, out);
}

}  // namespace qt::simd
