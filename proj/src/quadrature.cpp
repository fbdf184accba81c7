#include "qtransport/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace qt {

namespace {

constexpr int kNodes = 21;
constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Rule {
  std::array<double, kNodes> offset{};  // in [-1, 1]
  std::array<double, kNodes> wk{};
  std::array<double, kNodes> wg{};
};

const Rule& gk21() {
  static const Rule rule = [] {
    using boost::math::quadrature::gauss;
    using boost::math::quadrature::gauss_kronrod;
    const auto& xk = gauss_kronrod<double, kNodes>::abscissa();
    const auto& wk = gauss_kronrod<double, kNodes>::weights();
    const auto& wg = gauss<double, 10>::weights();
    Rule r;
    r.offset[0] = 0.0;
    r.wk[0] = wk[0];
    r.wg[0] = 0.0;
    for (int i = 1; i <= 10; ++i) {
      const double g = (i % 2 == 1) ? wg[static_cast<std::size_t>((i - 1) / 2)] : 0.0;
      r.offset[2 * i - 1] = -xk[i];
      r.offset[2 * i] = xk[i];
      r.wk[2 * i - 1] = r.wk[2 * i] = wk[i];
      r.wg[2 * i - 1] = r.wg[2 * i] = g;
    }
    return r;
  }();
  return rule;
}

struct Panel {
  double a = 0.0;
  double b = 0.0;
  cplx value;
  double error = 0.0;
  bool operator<(const Panel& o) const { return error < o.error; }
};

class PanelEvaluator {
 public:
  explicit PanelEvaluator(const BatchIntegrand& f) : f_(f) {}

  Panel eval(double a, double b) {
    const Rule& r = gk21();
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    for (int i = 0; i < kNodes; ++i) x_[i] = c + h * r.offset[i];
    f_(std::span<const double>(x_.data(), kNodes), std::span<cplx>(y_.data(), kNodes));
    ++calls_;
    cplx k = 0.0, g = 0.0;
    double resabs = 0.0;
    for (int i = 0; i < kNodes; ++i) {
      if (!std::isfinite(y_[i].real()) || !std::isfinite(y_[i].imag())) {
        std::ostringstream os;
        os << "integrand not finite at x=" << x_[i];
        throw NonFinite(os.str());
      }
      k += r.wk[i] * y_[i];
      g += r.wg[i] * y_[i];
      resabs += r.wk[i] * std::abs(y_[i]);
    }
    const cplx mean = 0.5 * k;
    double resasc = 0.0;
    for (int i = 0; i < kNodes; ++i) resasc += r.wk[i] * std::abs(y_[i] - mean);
    const double ah = std::abs(h);
    resabs *= ah;
    resasc *= ah;
    double err = std::abs((k - g) * h);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) err = std::max(50.0 * kEps * resabs, err);
    return Panel{a, b, k * h, err};
  }

  int calls() const { return calls_; }

 private:
  const BatchIntegrand& f_;
  std::array<double, kNodes> x_{};
  std::array<cplx, kNodes> y_{};
  int calls_ = 0;
};

double target_for(const QuadratureSpec& spec, cplx value) {
  return std::max(spec.abs_tol, spec.rel_tol * std::abs(value));
}

QuadratureResult adapt(PanelEvaluator& ev, std::vector<double> cuts, const QuadratureSpec& spec,
                       double abs_tol) {
  std::priority_queue<Panel> heap;
  cplx total = 0.0;
  double err = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i + 1] > cuts[i])) continue;
    Panel p = ev.eval(cuts[i], cuts[i + 1]);
    total += p.value;
    err += p.error;
    heap.push(p);
  }
  QuadratureSpec local = spec;
  local.abs_tol = abs_tol;
  double frozen = 0.0;
  int splits = 0;
  while (!heap.empty() && err > target_for(local, total)) {
    if (splits >= spec.max_subdivisions) break;
    Panel p = heap.top();
    heap.pop();
    const double mid = 0.5 * (p.a + p.b);
    if (!(mid > p.a && mid < p.b) || (p.b - p.a) < 64.0 * kEps * std::max(std::abs(p.a), std::abs(p.b))) {
      frozen += p.error;
      continue;
    }
    Panel l = ev.eval(p.a, mid);
    Panel r = ev.eval(mid, p.b);
    total += l.value + r.value - p.value;
    err += l.error + r.error - p.error;
    heap.push(l);
    heap.push(r);
    ++splits;
    // Resum periodically so the running error does not drift.
    if (splits % 256 == 0) {
      std::priority_queue<Panel> copy = heap;
      total = 0.0;
      err = frozen;
      while (!copy.empty()) {
        total += copy.top().value;
        err += copy.top().error;
        copy.pop();
      }
    }
  }
  if (err > target_for(local, total)) {
    std::ostringstream os;
    os << "adaptive quadrature on [" << cuts.front() << ", " << cuts.back() << "] stopped after " << splits
       << " subdivisions with error " << err << " > target " << target_for(local, total);
    throw NonConvergence(os.str());
  }
  return QuadratureResult{total, err, ev.calls() * kNodes};
}

std::vector<double> seed_cuts(double a, double b, std::span<const double> breakpoints, double period,
                              double resolution) {
  std::vector<double> cuts{a, b};
  for (double p : breakpoints) {
    if (!(p > a && p < b)) continue;
    cuts.push_back(p);
    if (resolution > 0.0) {
      for (double d = resolution; d < (b - a); d *= 2.0) {
        if (p - d > a) cuts.push_back(p - d);
        if (p + d < b) cuts.push_back(p + d);
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  if (period > 0.0) {
    std::vector<double> fine;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double len = cuts[i + 1] - cuts[i];
      const auto n = static_cast<long>(std::ceil(len / period));
      for (long k = 0; k < std::max(1L, n); ++k) fine.push_back(cuts[i] + len * static_cast<double>(k) / static_cast<double>(std::max(1L, n)));
    }
    fine.push_back(cuts.back());
    cuts = std::move(fine);
  }
  return cuts;
}

// Wynn epsilon extrapolation of a sequence of partial sums.
struct WynnEstimate {
  cplx value;
  double error;
};

WynnEstimate wynn(const std::vector<cplx>& sums) {
  const std::size_t n = sums.size();
  const std::size_t use = std::min<std::size_t>(n, 31);
  std::vector<cplx> prev(use + 1, cplx(0.0));
  std::vector<cplx> cur(sums.end() - static_cast<long>(use), sums.end());
  cplx best = cur.back();
  double best_err = n >= 2 ? std::abs(sums[n - 1] - sums[n - 2]) : std::abs(sums.back());
  for (std::size_t k = 1; cur.size() > 1; ++k) {
    std::vector<cplx> next(cur.size() - 1);
    bool ok = true;
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      const cplx d = cur[i + 1] - cur[i];
      if (std::abs(d) <= 1e-300 + 1e-15 * std::abs(cur[i + 1])) {
        ok = false;
        break;
      }
      next[i] = prev[i + 1] + 1.0 / d;
    }
    if (!ok) break;
    prev = std::move(cur);
    cur = std::move(next);
    if (k % 2 == 0 && cur.size() >= 3) {
      const std::size_t m = cur.size();
      const double e = std::abs(cur[m - 1] - cur[m - 2]) + std::abs(cur[m - 1] - cur[m - 3]);
      if (e < best_err) {
        best_err = e;
        best = cur[m - 1];
      }
    }
  }
  return WynnEstimate{best, best_err};
}

// Tail integral from `edge` to +/- infinity.
QuadratureResult tail(const BatchIntegrand& f, double edge, int direction, double frequency, double scale,
                      const QuadratureSpec& spec, double tol) {
  const double dir = static_cast<double>(direction);
  if (frequency <= 0.0) {
    // x = edge + dir * scale * (1 - u) / u, u in (0, 1].
    std::vector<double> xs;
    std::vector<double> jac;
    BatchIntegrand mapped = [&](std::span<const double> u, std::span<cplx> out) {
      xs.resize(u.size());
      jac.resize(u.size());
      for (std::size_t i = 0; i < u.size(); ++i) {
        xs[i] = edge + dir * scale * (1.0 - u[i]) / u[i];
        jac[i] = scale / (u[i] * u[i]);
      }
      f(xs, out);
      for (std::size_t i = 0; i < u.size(); ++i) out[i] *= jac[i];
    };
    PanelEvaluator ev(mapped);
    return adapt(ev, {0.0, 0.125, 0.25, 0.5, 1.0}, spec, tol);
  }
  const double half = kPi / frequency;
  std::vector<cplx> sums;
  cplx acc = 0.0;
  int calls = 0;
  int quiet = 0;
  cplx last_est = 0.0;
  int stable = 0;
  double err_sum = 0.0;
  for (int k = 0; k < 600; ++k) {
    const double x0 = edge + dir * half * k;
    const double x1 = edge + dir * half * (k + 1);
    PanelEvaluator ev(f);
    QuadratureResult p = adapt(ev, {std::min(x0, x1), std::max(x0, x1)}, spec, 0.05 * tol);
    calls += p.evaluations;
    err_sum += p.error;
    acc += p.value;
    sums.push_back(acc);
    if (std::abs(p.value) < 1e-3 * tol) {
      if (++quiet >= 2) return QuadratureResult{acc, err_sum, calls};
    } else {
      quiet = 0;
    }
    if (sums.size() >= 6) {
      WynnEstimate w = wynn(sums);
      if (std::abs(w.value - last_est) < 0.5 * tol && w.error < tol) {
        if (++stable >= 2) return QuadratureResult{w.value, w.error + err_sum, calls};
      } else {
        stable = 0;
      }
      last_est = w.value;
    }
  }
  std::ostringstream os;
  os << "oscillatory tail from " << edge << " (frequency " << frequency << ") did not converge";
  throw NonConvergence(os.str());
}

}  // namespace

void QuadratureSpec::validate() const {
  if (abs_tol < 0.0 || rel_tol < 0.0 || (abs_tol == 0.0 && rel_tol == 0.0))
    throw std::invalid_argument("tolerances: abs_tol and rel_tol must be >= 0 and not both zero");
  if (max_subdivisions <= 0) throw std::invalid_argument("tolerances: max_subdivisions must be positive");
  if (!(window_halfwidth >= 10.0)) throw std::invalid_argument("tolerances: window_halfwidth must be >= 10");
}

QuadratureResult integrate_interval(const BatchIntegrand& f, double a, double b, const QuadratureSpec& spec,
                                    std::span<const double> breakpoints, double period) {
  if (a == b) return {};
  const double sign = b > a ? 1.0 : -1.0;
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  PanelEvaluator ev(f);
  QuadratureResult r = adapt(ev, seed_cuts(lo, hi, breakpoints, period, 0.0), spec, spec.abs_tol);
  r.value *= sign;
  return r;
}

QuadratureResult integrate_interval(const std::function<cplx(double)>& f, double a, double b,
                                    const QuadratureSpec& spec) {
  BatchIntegrand batch = [&](std::span<const double> x, std::span<cplx> out) {
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = f(x[i]);
  };
  return integrate_interval(batch, a, b, spec);
}

QuadratureResult integrate_real_line(std::span<const IntegrandTerm> terms, const EnergyWindow& window,
                                     const QuadratureSpec& spec) {
  spec.validate();
  if (terms.empty()) return {};
  if (!(window.scale > 0.0) || !std::isfinite(window.center)) throw std::invalid_argument("invalid energy window");
  const double w = spec.window_halfwidth * window.scale;
  const double a = window.center - w;
  const double b = window.center + w;

  double fmax = 0.0;
  for (const auto& t : terms) fmax = std::max(fmax, std::abs(t.frequency));

  BatchIntegrand sum;
  std::vector<cplx> scratch;
  if (terms.size() == 1) {
    sum = terms[0].f;
  } else {
    sum = [&](std::span<const double> x, std::span<cplx> out) {
      std::fill(out.begin(), out.end(), cplx(0.0));
      scratch.resize(x.size());
      for (const auto& t : terms) {
        t.f(x, scratch);
        for (std::size_t i = 0; i < x.size(); ++i) out[i] += scratch[i];
      }
    };
  }

  // Resolve the narrowest feature near each breakpoint with a graded mesh.
  const double resolution = window.resolution > 0.0 ? window.resolution : window.scale / 64.0;
  std::vector<double> bps = window.breakpoints;
  bps.push_back(window.center);
  double period = 0.0;
  if (fmax > 0.0) {
    const double p = kTwoPi / fmax;
    if (2.0 * w / p > 50.0) period = p;
  }
  PanelEvaluator ev(sum);
  QuadratureResult core = adapt(ev, seed_cuts(a, b, bps, period, resolution), spec, 0.5 * spec.abs_tol);

  const double tail_tol = std::max(0.125 * spec.abs_tol / static_cast<double>(terms.size()),
                                   0.125 * spec.rel_tol * std::abs(core.value) / static_cast<double>(terms.size()));
  QuadratureResult out = core;
  for (const auto& t : terms) {
    for (int dir : {-1, +1}) {
      QuadratureResult r = tail(t.f, dir > 0 ? b : a, dir, std::abs(t.frequency), window.scale, spec, tail_tol);
      out.value += r.value;
      out.error += r.error;
      out.evaluations += r.evaluations;
    }
  }
  return out;
}

QuadratureResult integrate_real_line(const BatchIntegrand& f, const EnergyWindow& window,
                                     const QuadratureSpec& spec, double frequency) {
  IntegrandTerm t{f, frequency};
  return integrate_real_line(std::span<const IntegrandTerm>(&t, 1), window, spec);
}

}  // namespace qt
