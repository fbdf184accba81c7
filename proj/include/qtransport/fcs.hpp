#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "qtransport/model.hpp"
#include "qtransport/numerics.hpp"

namespace qt {

struct JumpSpec {
  Lead lead = Lead::L;
  int level = 0;
  ComplexMatrix lowering;  // d x d
  double rate_in = 0.0;    // multiplies L^dag rho L
  double rate_out = 0.0;   // multiplies L rho L^dag
  double weight = 1.0;     // quantum counted per jump
};

struct LindbladSpec {
  ComplexMatrix hamiltonian;
  std::vector<JumpSpec> jumps;
};

// Counting field per lead (L, R).
using CountingFields = std::array<double, 2>;

// Column-stacking convention: vec(X rho Y) = (Y^T kron X) vec(rho).
ComplexVector vectorize(const ComplexMatrix& rho);
ComplexMatrix unvectorize(const ComplexVector& v, int d);
ComplexMatrix left_right(const ComplexMatrix& x, const ComplexMatrix& y);  // superoperator rho -> X rho Y

class DressedLiouvillian {
 public:
  explicit DressedLiouvillian(const LindbladSpec& spec);

  int hilbert_dim() const { return d_; }
  const ComplexMatrix& base() const { return base_; }
  ComplexMatrix at(const CountingFields& chi) const;

  // d L / d(i chi_a) at chi = 0. With `weight` set, every jump of the lead
  // counts that quantum instead of its own.
  ComplexMatrix current(Lead a, std::optional<double> weight = std::nullopt) const;
  // -d^2 L / d chi_a^2 at chi = 0.
  ComplexMatrix activity(Lead a, std::optional<double> weight = std::nullopt) const;

  // Row vector r with r . vec(rho) = Tr rho.
  const Eigen::RowVectorXcd& trace_row() const { return trace_; }

 private:
  int d_ = 0;
  ComplexMatrix coherent_;
  ComplexMatrix base_;
  std::vector<JumpSpec> jumps_;
  std::vector<ComplexMatrix> in_;
  std::vector<ComplexMatrix> out_;
  Eigen::RowVectorXcd trace_;
};

DressedLiouvillian build_liouvillian(const LindbladSpec& spec);

ComplexVector propagate(const DressedLiouvillian& l, const CountingFields& chi, double elapsed,
                        const ComplexVector& rho0);

// P(chi, t; chi', t') for t0 <= t <= t'. Times are absolute.
cplx joint_probability(const DressedLiouvillian& l, const CountingFields& chi, double t,
                       const CountingFields& chi_prime, double t_prime, const ComplexVector& rho0, double t0 = 0.0);

// Multi-time generalization; points must be in ascending time order.
cplx joint_probability_multi(const DressedLiouvillian& l, const std::vector<std::pair<CountingFields, double>>& points,
                             const ComplexVector& rho0, double t0 = 0.0);

// Any time order; sorts before evaluating.
cplx joint_probability_time_ordered(const DressedLiouvillian& l,
                                    std::vector<std::pair<CountingFields, double>> points,
                                    const ComplexVector& rho0, double t0 = 0.0);

struct DetectionResponse {
  enum class Kind { InstantaneousDelta, Window };
  Kind kind = Kind::InstantaneousDelta;
  // Window support [0, width]; width <= 0 means the whole elapsed interval.
  double width = 0.0;

  static DetectionResponse delta() { return {}; }
  static DetectionResponse window(double w = 0.0) { return {Kind::Window, w}; }
  // (2/w) sin^2(pi u / w) on [0, w].
  double operator()(double u, double w) const;
};

struct FcsOptions {
  std::optional<double> weight;  // overrides jump weights for the counted lead
  QuadratureSpec quadrature{1e-12, 1e-11, 4000, 40.0};
};

double mean_transferred(const DressedLiouvillian& l, Lead a, double t, const DetectionResponse& f,
                        const ComplexVector& rho0, double t0 = 0.0, const FcsOptions& opt = {});
double current_via_fcs(const DressedLiouvillian& l, Lead a, double t, const DetectionResponse& f,
                       const ComplexVector& rho0, double t0 = 0.0, const FcsOptions& opt = {});
double activity_via_fcs(const DressedLiouvillian& l, Lead a, double t, const ComplexVector& rho0, double t0 = 0.0,
                        const FcsOptions& opt = {});

struct FcsCorrelation {
  double delta_weight = 0.0;
  double regular = 0.0;
};

// Connected current correlation <I_a(t) I_b(t')> - <I_a(t)><I_b(t')>.
FcsCorrelation two_time_correlation_via_fcs(const DressedLiouvillian& l, Lead a, Lead b, double t, double t_prime,
                                            const DetectionResponse& f, const ComplexVector& rho0, double t0 = 0.0,
                                            const FcsOptions& opt = {});

// Two-level dot with jump operator |0><1| per lead; weight 1 (particles) or
// the level energy (energy quanta).
LindbladSpec single_dot_lindblad(const SingleDotModel& m, bool energy_weight = false);
ComplexVector single_dot_initial_state(const SingleDotModel& m);

}  // namespace qt
