#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "qtransport/dqd.hpp"
#include "qtransport/model.hpp"
#include "qtransport/numerics.hpp"
#include "qtransport/table.hpp"

namespace qt {

struct WeakCouplingPlan {
  std::vector<double> gamma_sequence{1e-1, 3e-2, 1e-2, 3e-3, 1e-3};  // strictly decreasing
  double scaled_time = 1.0;                                         // Gamma (t - t0)
  int order = 1;                                                    // divide by Gamma^order
  std::optional<double> eta_ratio;                                  // Series DQD: eta / Gamma
  std::optional<double> gamma_ref;                                  // defaults to gamma_sequence.front()

  void validate() const;
};

struct WeakCouplingResult {
  cplx limit_scaled;  // lim observable / Gamma^order
  cplx limit;         // limit_scaled * gamma_ref^order
  double gamma_ref = 0.0;
  double error = 0.0;  // change of limit_scaled when the largest Gamma is dropped
  double convergence_order = 0.0;
  bool monotone = true;  // successive differences shrink
  std::vector<double> gammas;
  std::vector<cplx> scaled_samples;
};

// observable(gamma, elapsed) with elapsed = scaled_time / gamma.
using WeakCouplingObservable = std::function<cplx(double gamma, double elapsed)>;

// Polynomial (Neville) extrapolation of observable / Gamma^order to Gamma = 0.
// The order estimate is the median log-log slope of successive differences.
WeakCouplingResult weak_coupling_limit(const WeakCouplingObservable& observable, const WeakCouplingPlan& plan,
                                       int workers = 1);

// Extrapolates samples y(x_i) to x = 0.
cplx neville_at_zero(const std::vector<double>& x, const std::vector<cplx>& y);

// Evaluates at Gamma (t - t0) = 40 and 60; throws NotStationary if they
// differ by more than 1e-8 max(1, |value|). Returns the latter.
cplx stationary_limit(const std::function<cplx(double elapsed)>& observable, double gamma);

// Model rescaled to total coupling `gamma`, keeping Gamma_L / Gamma_R.
SingleDotModel with_total_coupling(const SingleDotModel& m, double gamma);
// Same for the double dot; with eta_ratio set, g is chosen so that eta = eta_ratio * gamma.
DqdModel with_total_coupling(const DqdModel& m, double gamma, std::optional<double> eta_ratio = std::nullopt);

enum class ReportObservable { CurrentParticle, CurrentEnergy };
const char* report_observable_name(ReportObservable o);

struct ReportTolerances {
  double steady_relative = 1e-6;  // |HE_ss - LB| <= tol * max(|LB|, 1e-6 Gamma)
  double transient_fraction = 0.02;  // |HE - ME| <= tol * max_t |HE|
};

// HE / ME / LB comparison over scaled times Gamma (t - t0). One steady row
// and one row per time for each observable and lead. Columns: kind,
// observable, lead, t_gamma, he, me, lb, deviation, tolerance, pass, error.
// A failing evaluation fills the error column and leaves numbers as nan.
CurveTable framework_report(const SingleDotModel& m, const std::vector<ReportObservable>& observables,
                            const std::vector<double>& scaled_times, const ReportTolerances& tol = {},
                            const QuadratureSpec& spec = {}, int workers = 1);

}  // namespace qt
