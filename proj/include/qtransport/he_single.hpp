#pragma once

#include <array>

#include "qtransport/model.hpp"
#include "qtransport/numerics.hpp"

namespace qt {

// Energy integrals of the exact single-level solution, s = t - t0, x = e - e_d,
// L(x) = Gamma^2/4 + x^2, measure de / 2pi:
//   A^m = Gamma int e^m f / L
//   B^m = Gamma int e^m cos(x s) f / L
//   C^m = 2 int e^m x sin(x s) f / L
//   D   = Gamma int (Gamma/2) sin(x s) f / L      (energy current only)
// A^1 and B^1 diverge logarithmically on their own. Both drop the same
// lead-independent piece Gamma int_{x<0} x [1, cos(x s)] / L, so only lead
// differences of A^1, B^1 are physical. C^1 is Abel summed.
struct AbcCoefficients {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
};

AbcCoefficients he_abc(const SingleDotModel& m, Lead lead, int moment, double t, const QuadratureSpec& spec = {});

// initial: n_d term, decays as exp(-Gamma s); stationary: t-independent;
// transient: everything else.
struct CurrentTerms {
  double initial = 0.0;
  double stationary = 0.0;
  double transient = 0.0;
  double total() const { return initial + stationary + transient; }
};

CurrentTerms he_current_particle_terms(const SingleDotModel& m, Lead lead, double t, const QuadratureSpec& spec = {});
double he_current_particle(const SingleDotModel& m, Lead lead, double t, const QuadratureSpec& spec = {});

inline constexpr double kWblShortTime = 0.1;  // in units of 1/Gamma

struct EnergyCurrent {
  double value = 0.0;
  bool wbl_shorttime_warning = false;
};

CurrentTerms he_current_energy_terms(const SingleDotModel& m, Lead lead, double t, const QuadratureSpec& spec = {});
EnergyCurrent he_current_energy(const SingleDotModel& m, Lead lead, double t, const QuadratureSpec& spec = {});

struct SteadyCurrents {
  double particle = 0.0;
  double energy = 0.0;
};
SteadyCurrents he_current_steady(const SingleDotModel& m, Lead lead, const QuadratureSpec& spec = {});

// Dot occupation <d^dagger d>(t).
double he_occupation(const SingleDotModel& m, double t, const QuadratureSpec& spec = {});

// Two-time functions, arguments (t, t'), tau = t - t'. Barred sets use
// n_d -> 1 - n_d and f -> 1 - f.
//   Lambda0    = 1/2 exp(-Gamma (s + s')/2) exp(i e_d tau) n_d
//   Lambda1_g  = 2 int exp(i e tau) g_-(x, s') f_g
//   Lambda2_g  = 2 Gamma int exp(i e tau) g_+(x, s) g_-(x, s') f_g
// with g_-(x, s) = (1 - exp(-z s)) / (2 z), z = Gamma/2 - i x, g_+ = conj(g_-).
struct LambdaSet {
  cplx lambda0;
  std::array<cplx, 2> lambda1{};
  std::array<cplx, 2> lambda2{};
};

cplx he_g_minus(double x, double s, double gamma);
LambdaSet he_lambda(const SingleDotModel& m, double t, double t_prime, bool barred, const QuadratureSpec& spec = {});

// Lambda_g = (2/Gamma) int exp(i e tau) f_g without its delta(tau) part:
// -i (T/Gamma) exp(i mu tau) / sinh(pi T tau); the barred form flips the sign.
cplx he_lambda_regular(const SingleDotModel& m, Lead lead, double tau, bool barred);

// Stationary Lambda1, Lambda2 (functions of tau only).
LambdaSet he_lambda_stationary(const SingleDotModel& m, double tau, bool barred, const QuadratureSpec& spec = {});

// Two-point correlators entering the Wick expansion of <I_a(t) I_b(t')>.
// B_a = sum_k t_k c_k is the lead operator coupled to the dot.
struct TwoPointCorrelators {
  std::array<cplx, 2> bd;                   // <B_a^dagger(t) d(t')>
  cplx dd;                                  // <d^dagger(t) d(t')>
  std::array<std::array<cplx, 2>, 2> bb;    // <B_a^dagger(t) B_b(t')>
};
TwoPointCorrelators he_correlators(const SingleDotModel& m, const LambdaSet& at, const LambdaSet& swapped, double tau,
                                   bool barred);

// Connected current correlation <I_a(t) I_b(t')> - <I_a(t)><I_b(t')>.
// Singular at t = t' (wide-band limit); throws NumericalError there.
cplx he_noise_two_time(const SingleDotModel& m, Lead a, Lead b, double t, double t_prime,
                       const QuadratureSpec& spec = {});

// All four lead pairs from one set of Lambda evaluations, indexed [a][b].
std::array<std::array<cplx, 2>, 2> he_noise_two_time_all(const SingleDotModel& m, double t, double t_prime,
                                                          const QuadratureSpec& spec = {});

// S(omega) = int dtau exp(-i omega tau) S_ss(tau), tau = t - t'.
cplx he_noise_frequency_ss(const SingleDotModel& m, Lead a, Lead b, double omega, const QuadratureSpec& spec = {});

// (S_ab(omega) + S_ba(-omega)) / 2.
cplx he_noise_frequency_symmetrized(const SingleDotModel& m, Lead a, Lead b, double omega,
                                    const QuadratureSpec& spec = {});

// -d/dt <H_T,a>, from -2 Gamma_a d/dt Im Lambda1_a(t, t).
double he_contact_energy_current(const SingleDotModel& m, Lead lead, double t, const QuadratureSpec& spec = {});

}  // namespace qt
