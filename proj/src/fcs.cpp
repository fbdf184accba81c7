#include "qtransport/fcs.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

namespace qt {

namespace {
cplx trace_of(const DressedLiouvillian& l, const ComplexVector& v) { return (l.trace_row() * v).value(); }
}  // namespace

ComplexVector vectorize(const ComplexMatrix& rho) {
  return Eigen::Map<const ComplexVector>(rho.data(), rho.size());
}

ComplexMatrix unvectorize(const ComplexVector& v, int d) {
  if (v.size() != static_cast<Eigen::Index>(d) * d) throw DimensionMismatch("unvectorize: size mismatch");
  return Eigen::Map<const ComplexMatrix>(v.data(), d, d);
}

ComplexMatrix left_right(const ComplexMatrix& x, const ComplexMatrix& y) {
  return Eigen::kroneckerProduct(y.transpose(), x).eval();
}

DressedLiouvillian::DressedLiouvillian(const LindbladSpec& spec) {
  const auto& h = spec.hamiltonian;
  if (h.rows() != h.cols() || h.rows() == 0) throw DimensionMismatch("Hamiltonian must be square and non-empty");
  d_ = static_cast<int>(h.rows());
  if (d_ * d_ > 64) throw DimensionMismatch("Liouville space above 64");
  const ComplexMatrix id = ComplexMatrix::Identity(d_, d_);
  const cplx i1(0.0, 1.0);
  coherent_ = -i1 * left_right(h, id) + i1 * left_right(id, h);
  base_ = coherent_;
  for (const auto& j : spec.jumps) {
    if (j.lowering.rows() != d_ || j.lowering.cols() != d_) {
      std::ostringstream os;
      os << "jump operator for lead " << lead_name(j.lead) << " level " << j.level << " is not " << d_ << "x" << d_;
      throw DimensionMismatch(os.str());
    }
    if (j.rate_in < 0.0 || j.rate_out < 0.0) throw InvalidModel("jumps", "rates must be >= 0");
    const ComplexMatrix& l = j.lowering;
    const ComplexMatrix ld = l.adjoint();
    const ComplexMatrix lin = j.rate_in * left_right(ld, l);
    const ComplexMatrix lout = j.rate_out * left_right(l, ld);
    const ComplexMatrix ldl = ld * l;
    const ComplexMatrix lld = l * ld;
    const ComplexMatrix anti_out = left_right(ldl, id) + left_right(id, ldl);
    const ComplexMatrix anti_in = left_right(lld, id) + left_right(id, lld);
    base_ += lin + lout - 0.5 * (j.rate_out * anti_out + j.rate_in * anti_in);
    jumps_.push_back(j);
    in_.push_back(lin);
    out_.push_back(lout);
  }
  trace_ = Eigen::RowVectorXcd::Zero(d_ * d_);
  for (int i = 0; i < d_; ++i) trace_(i + i * d_) = 1.0;
}

ComplexMatrix DressedLiouvillian::at(const CountingFields& chi) const {
  ComplexMatrix out = base_;
  const cplx i1(0.0, 1.0);
  for (std::size_t k = 0; k < jumps_.size(); ++k) {
    const double phase = chi[static_cast<std::size_t>(index(jumps_[k].lead))] * jumps_[k].weight;
    if (phase == 0.0) continue;
    out += (std::exp(i1 * phase) - 1.0) * in_[k] + (std::exp(-i1 * phase) - 1.0) * out_[k];
  }
  return out;
}

ComplexMatrix DressedLiouvillian::current(Lead a, std::optional<double> weight) const {
  ComplexMatrix out = ComplexMatrix::Zero(d_ * d_, d_ * d_);
  for (std::size_t k = 0; k < jumps_.size(); ++k) {
    if (jumps_[k].lead != a) continue;
    const double nu = weight.value_or(jumps_[k].weight);
    out += nu * (in_[k] - out_[k]);
  }
  return out;
}

ComplexMatrix DressedLiouvillian::activity(Lead a, std::optional<double> weight) const {
  ComplexMatrix out = ComplexMatrix::Zero(d_ * d_, d_ * d_);
  for (std::size_t k = 0; k < jumps_.size(); ++k) {
    if (jumps_[k].lead != a) continue;
    const double nu = weight.value_or(jumps_[k].weight);
    out += nu * nu * (in_[k] + out_[k]);
  }
  return out;
}

DressedLiouvillian build_liouvillian(const LindbladSpec& spec) { return DressedLiouvillian(spec); }

ComplexVector propagate(const DressedLiouvillian& l, const CountingFields& chi, double elapsed,
                        const ComplexVector& rho0) {
  if (elapsed < 0.0) throw InvalidModel("t", "propagation time must be >= 0");
  if (rho0.size() != l.base().rows()) throw DimensionMismatch("propagate: state size mismatch");
  if (elapsed == 0.0) return rho0;
  return expm(l.at(chi), elapsed) * rho0;
}

cplx joint_probability(const DressedLiouvillian& l, const CountingFields& chi, double t,
                       const CountingFields& chi_prime, double t_prime, const ComplexVector& rho0, double t0) {
  if (!(t0 <= t && t <= t_prime)) throw InvalidModel("t", "joint probability needs t0 <= t <= t'");
  const CountingFields both{chi[0] + chi_prime[0], chi[1] + chi_prime[1]};
  const ComplexVector mid = propagate(l, both, t - t0, rho0);
  return trace_of(l, propagate(l, chi_prime, t_prime - t, mid));
}

cplx joint_probability_multi(const DressedLiouvillian& l, const std::vector<std::pair<CountingFields, double>>& points,
                             const ComplexVector& rho0, double t0) {
  ComplexVector rho = rho0;
  double prev = t0;
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (points[k].second < prev) throw InvalidModel("t", "multi-time points must be ascending and >= t0");
    CountingFields acc{0.0, 0.0};
    for (std::size_t j = k; j < points.size(); ++j) {
      acc[0] += points[j].first[0];
      acc[1] += points[j].first[1];
    }
    rho = propagate(l, acc, points[k].second - prev, rho);
    prev = points[k].second;
  }
  return trace_of(l, rho);
}

cplx joint_probability_time_ordered(const DressedLiouvillian& l,
                                    std::vector<std::pair<CountingFields, double>> points,
                                    const ComplexVector& rho0, double t0) {
  std::stable_sort(points.begin(), points.end(), [](const auto& x, const auto& y) { return x.second < y.second; });
  return joint_probability_multi(l, points, rho0, t0);
}

double DetectionResponse::operator()(double u, double w) const {
  if (u < 0.0 || u > w) return 0.0;
  const double s = std::sin(kPi * u / w);
  return 2.0 / w * s * s;
}

namespace {

double window_width(const DetectionResponse& f, double elapsed) {
  return (f.width > 0.0 && f.width < elapsed) ? f.width : elapsed;
}

// Tr{X e^{L s} rho0}
double traced(const DressedLiouvillian& l, const ComplexMatrix& x, double s, const ComplexVector& rho0) {
  return trace_of(l, x * propagate(l, {0.0, 0.0}, s, rho0)).real();
}

// Tr{X int_0^s e^{L u} du rho0} through an augmented exponential.
double traced_integral(const DressedLiouvillian& l, const ComplexMatrix& x, double s, const ComplexVector& rho0) {
  const Eigen::Index n = l.base().rows();
  ComplexMatrix aug = ComplexMatrix::Zero(n + 1, n + 1);
  aug.topLeftCorner(n, n) = l.base();
  aug.topRightCorner(n, 1) = rho0;
  const ComplexMatrix e = expm(aug, s);
  const ComplexVector integral = e.topRightCorner(n, 1);
  return trace_of(l, x * integral).real();
}

}  // namespace

double mean_transferred(const DressedLiouvillian& l, Lead a, double t, const DetectionResponse& f,
                        const ComplexVector& rho0, double t0, const FcsOptions& opt) {
  const double elapsed = t - t0;
  if (elapsed < 0.0) throw InvalidModel("t", "t must not precede t0");
  if (elapsed == 0.0) return 0.0;
  const ComplexMatrix cur = l.current(a, opt.weight);
  if (f.kind == DetectionResponse::Kind::InstantaneousDelta) return traced_integral(l, cur, elapsed, rho0);
  const double w = window_width(f, elapsed);
  auto integrand = [&](double s) { return cplx(f(elapsed - s, w) * traced_integral(l, cur, s, rho0)); };
  return integrate_interval(integrand, elapsed - w, elapsed, opt.quadrature).value.real();
}

double current_via_fcs(const DressedLiouvillian& l, Lead a, double t, const DetectionResponse& f,
                       const ComplexVector& rho0, double t0, const FcsOptions& opt) {
  const double elapsed = t - t0;
  if (elapsed < 0.0) throw InvalidModel("t", "t must not precede t0");
  const ComplexMatrix cur = l.current(a, opt.weight);
  if (f.kind == DetectionResponse::Kind::InstantaneousDelta || elapsed == 0.0) return traced(l, cur, elapsed, rho0);
  const double w = window_width(f, elapsed);
  auto integrand = [&](double s) { return cplx(f(elapsed - s, w) * traced(l, cur, s, rho0)); };
  return integrate_interval(integrand, elapsed - w, elapsed, opt.quadrature).value.real();
}

double activity_via_fcs(const DressedLiouvillian& l, Lead a, double t, const ComplexVector& rho0, double t0,
                        const FcsOptions& opt) {
  return traced(l, l.activity(a, opt.weight), t - t0, rho0);
}

namespace {

// Connected correlation for instantaneous detection, s and sp elapsed times.
FcsCorrelation delta_correlation(const DressedLiouvillian& l, const ComplexMatrix& ia, const ComplexMatrix& ib,
                                 const ComplexMatrix& act_a, bool same, double s, double sp,
                                 const ComplexVector& rho0) {
  const CountingFields zero{0.0, 0.0};
  FcsCorrelation out;
  auto ordered = [&](const ComplexMatrix& late, const ComplexMatrix& early, double t_late, double t_early) {
    const ComplexVector rho_e = propagate(l, zero, t_early, rho0);
    const ComplexVector kicked = early * rho_e;
    const cplx joint = trace_of(l, late * propagate(l, zero, t_late - t_early, kicked));
    const double mean_late = trace_of(l, late * propagate(l, zero, t_late, rho0)).real();
    const double mean_early = trace_of(l, kicked).real();
    return joint.real() - mean_late * mean_early;
  };
  if (s > sp) {
    out.regular = ordered(ia, ib, s, sp);
  } else if (s < sp) {
    out.regular = ordered(ib, ia, sp, s);
  } else {
    out.regular = 0.5 * (ordered(ia, ib, s, sp) + ordered(ib, ia, sp, s));
  }
  if (same) out.delta_weight = trace_of(l, act_a * propagate(l, zero, s, rho0)).real();
  return out;
}

}  // namespace

FcsCorrelation two_time_correlation_via_fcs(const DressedLiouvillian& l, Lead a, Lead b, double t, double t_prime,
                                            const DetectionResponse& f, const ComplexVector& rho0, double t0,
                                            const FcsOptions& opt) {
  const double s = t - t0, sp = t_prime - t0;
  if (s < 0.0 || sp < 0.0) throw InvalidModel("t", "times must not precede t0");
  const ComplexMatrix ia = l.current(a, opt.weight);
  const ComplexMatrix ib = l.current(b, opt.weight);
  const ComplexMatrix act = l.activity(a, opt.weight);
  const bool same = a == b;
  if (f.kind == DetectionResponse::Kind::InstantaneousDelta) return delta_correlation(l, ia, ib, act, same, s, sp, rho0);

  // Smeared correlation: both detector windows applied; the white-noise part
  // becomes a regular contribution.
  const double w = window_width(f, std::min(s, sp));
  QuadratureSpec q = opt.quadrature;
  auto outer = [&](double u) {
    auto inner = [&](double up) {
      return cplx(f(sp - up, w) * delta_correlation(l, ia, ib, act, false, u, up, rho0).regular);
    };
    const double lo = sp - w, hi = sp;
    cplx v = 0.0;
    if (u > lo && u < hi) {
      v = integrate_interval(inner, lo, u, q).value + integrate_interval(inner, u, hi, q).value;
    } else {
      v = integrate_interval(inner, lo, hi, q).value;
    }
    double white = 0.0;
    if (same) white = f(sp - u, w) * delta_correlation(l, ia, ib, act, true, u, u, rho0).delta_weight;
    return cplx(f(s - u, w) * (v.real() + white));
  };
  FcsCorrelation out;
  out.regular = integrate_interval(outer, s - w, s, q).value.real();
  return out;
}

LindbladSpec single_dot_lindblad(const SingleDotModel& m, bool energy_weight) {
  LindbladSpec spec;
  spec.hamiltonian = ComplexMatrix::Zero(2, 2);
  spec.hamiltonian(1, 1) = m.epsilon_d;
  ComplexMatrix lower = ComplexMatrix::Zero(2, 2);
  lower(0, 1) = 1.0;
  for (Lead a : {Lead::L, Lead::R}) {
    const double f = fermi(m.lead(a), m.epsilon_d);
    JumpSpec j;
    j.lead = a;
    j.level = 0;
    j.lowering = lower;
    j.rate_in = m.lead(a).gamma * f;
    j.rate_out = m.lead(a).gamma * (1.0 - f);
    j.weight = energy_weight ? m.epsilon_d : 1.0;
    spec.jumps.push_back(j);
  }
  return spec;
}

ComplexVector single_dot_initial_state(const SingleDotModel& m) {
  ComplexMatrix rho = ComplexMatrix::Zero(2, 2);
  rho(0, 0) = 1.0 - m.n_d;
  rho(1, 1) = m.n_d;
  return vectorize(rho);
}

}  // namespace qt
