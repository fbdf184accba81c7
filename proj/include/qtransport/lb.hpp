#pragma once

#include "qtransport/model.hpp"
#include "qtransport/numerics.hpp"

namespace qt {

// Breit-Wigner transmission of the single level.
double transmission(const SingleDotModel& m, double epsilon);

double lb_current_particle(const SingleDotModel& m, Lead a, const QuadratureSpec& spec = {});
double lb_current_energy(const SingleDotModel& m, Lead a, const QuadratureSpec& spec = {});

// Zero-temperature closed forms (arctan and log antiderivatives).
double lb_current_particle_zero_temperature(const SingleDotModel& m, Lead a);
double lb_current_energy_zero_temperature(const SingleDotModel& m, Lead a);

// Zero-frequency noise. Auto and cross correlations differ by sign only.
double lb_shot_noise(const SingleDotModel& m, Lead a, Lead b, const QuadratureSpec& spec = {});

// The two parts of the auto-correlation: thermal sum_b T f_b (1 - f_b) and
// shot T (1 - T) (f_L - f_R)^2.
struct ShotNoiseParts {
  double thermal = 0.0;
  double shot = 0.0;
};
ShotNoiseParts lb_shot_noise_parts(const SingleDotModel& m, const QuadratureSpec& spec = {});

}  // namespace qt
