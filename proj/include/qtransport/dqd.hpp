#pragma once

#include <array>

#include "qtransport/fcs.hpp"
#include "qtransport/model.hpp"
#include "qtransport/numerics.hpp"

namespace qt {

// Rate multiplier of the global master equation (2 Gamma_a f_a(e_+-)).
inline constexpr double kGlobalRateFactor = 2.0;

// Eigen-decomposition of the dot drift matrix A. Index 0 is the "+" mode,
// index 1 the "-" mode: Parallel lambda_+- = -Gamma/2 - i(e_d +- g),
// Series lambda_+- = -Gamma/4 +- eta - i e_d.
struct DqdEigenStructure {
  DqdConfiguration configuration = DqdConfiguration::Parallel;
  ComplexMatrix a;
  std::array<cplx, 2> lambda{};
  ComplexMatrix s;
  ComplexMatrix s_inv;
  double gamma_asym = 0.0;
  double eta = 0.0;
};

DqdEigenStructure dqd_eigenstructure(const DqdModel& m);

// exp(A (t - t0)).
ComplexMatrix dqd_propagator(const DqdModel& m, double t);

// Per-dot tunneling rates of one lead: Gamma^a_mm for m = 1, 2.
std::array<double, 2> dqd_lead_rates(const DqdModel& m, Lead a);

// [M_a(t)]_{ll'}, l, l' in (+, -).
ComplexMatrix dqd_m_matrix(const DqdModel& m, Lead a, double t, const QuadratureSpec& spec = {});

// Weight of [M_a]_{ll'} in the population of `dot` (1 or 2).
ComplexMatrix dqd_population_coefficients(const DqdModel& m, int dot, Lead a);

struct DqdPopulation {
  double initial = 0.0;  // depends on n1, n2 only
  double bath = 0.0;     // M-matrix part
  double total() const { return initial + bath; }
};

// Dot 2 is obtained from dot 1 with L <-> R and 1 <-> 2 exchanged.
DqdPopulation dqd_he_population_terms(const DqdModel& m, int dot, double t, const QuadratureSpec& spec = {});
double dqd_he_population(const DqdModel& m, int dot, double t, const QuadratureSpec& spec = {});

DqdPopulation dqd_me_population_local_terms(const DqdModel& m, int dot, double t);
double dqd_me_population_local(const DqdModel& m, int dot, double t);
DqdPopulation dqd_me_population_global_terms(const DqdModel& m, int dot, double t,
                                             double rate_factor = kGlobalRateFactor);
double dqd_me_population_global(const DqdModel& m, int dot, double t, double rate_factor = kGlobalRateFactor);

// Two-dot Fock space |n1 n2> in the order 00, 10, 01, 11 with sigma_- on
// each site. Jump levels: local 1, 2 (dot); global 0 (+), 1 (-).
LindbladSpec dqd_local_lindblad(const DqdModel& m);
LindbladSpec dqd_global_lindblad(const DqdModel& m, double rate_factor = kGlobalRateFactor);
ComplexVector dqd_initial_state(const DqdModel& m);
// Occupation of `dot` in a vectorized state.
double dqd_occupation(const ComplexVector& rho, int dot);

}  // namespace qt
