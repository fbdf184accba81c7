#pragma once

#include <array>

#include "qtransport/model.hpp"

namespace qt {

// Rates between the empty (0) and occupied (1) dot states. Column j holds the
// rates out of state j; columns sum to zero.
struct RateMatrix {
  std::array<std::array<double, 2>, 2> total{};
  std::array<std::array<std::array<double, 2>, 2>, 2> per_lead{};
};

RateMatrix me_rate_matrix(const SingleDotModel& m);

struct MePopulations {
  double p0 = 1.0;
  double p1 = 0.0;
};

MePopulations me_population(const SingleDotModel& m, double t);
double me_population_stationary(const SingleDotModel& m);

double me_current_particle(const SingleDotModel& m, Lead a, double t);
double me_current_energy(const SingleDotModel& m, Lead a, double t);
double me_current_particle_stationary(const SingleDotModel& m, Lead a);

double me_activity(const SingleDotModel& m, Lead a, double t);
// sum_{i != j} (W_a)_{ij} p_j(t)
double me_activity_from_rates(const SingleDotModel& m, Lead a, double t);

// Correlation split into a white-noise weight multiplying delta(t - t') and a
// regular part. The weight is nonzero only for a == b.
struct MeNoise {
  double delta_weight = 0.0;
  double regular = 0.0;
};

// At t == t' the regular part is the mean of the two one-sided limits.
MeNoise me_noise_two_time(const SingleDotModel& m, Lead a, Lead b, double t, double t_prime);

// Stationary limit of S(t, t + tau).
MeNoise me_noise_stationary(const SingleDotModel& m, Lead a, Lead b, double tau);

// tau -> 0+ minus tau -> 0- of the stationary regular part, closed form.
double me_noise_stationary_jump(const SingleDotModel& m, Lead a, Lead b);

// Integral of the stationary correlation over tau, delta weight included.
double me_noise_zero_frequency(const SingleDotModel& m, Lead a, Lead b);

}  // namespace qt
