#pragma once

#include "qtransport/model.hpp"
#include "qtransport/numerics.hpp"

namespace qt {

// Core integration window around the dot level: wide enough to hold every
// Fermi edge, with breakpoints at the level and at each chemical potential.
inline EnergyWindow dot_window(double epsilon_d, double gamma, const std::array<Reservoir, 2>& leads,
                               double extra_span = 0.0) {
  EnergyWindow w;
  w.center = epsilon_d;
  double scale = std::max(gamma, extra_span);
  double finest = gamma;
  for (const auto& r : leads) {
    scale = std::max(scale, std::abs(r.mu - epsilon_d) + 10.0 * r.temperature);
    finest = std::min(finest, r.temperature);
    w.breakpoints.push_back(r.mu);
  }
  w.breakpoints.push_back(epsilon_d);
  w.scale = scale;
  w.resolution = 0.25 * finest;
  return w;
}

}  // namespace qt
