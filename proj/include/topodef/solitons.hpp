#ifndef TOPODEF_SOLITONS_HPP
#define TOPODEF_SOLITONS_HPP

// (1+1)D double sine-Gordon dynamics for the microrotation angle:
//   Theta_tt - Theta_xx + m^2 sin Theta + (b/2) sin 2 Theta = 0.
// The travelling kink 4 arctan exp(+-k(x - vt) +- delta) solves it exactly
// when b = 0 and k^2 = m^2 / (1 - v^2).
//
// Time stepping is velocity Verlet (kick-drift-kick leapfrog): second order,
// symplectic, and with pinned edge values it keeps the topological sector
// fixed.

#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "topodef/errors.hpp"
#include "topodef/grid.hpp"
#include "topodef/report.hpp"

namespace topodef {

struct DsgParams {
  double m = 1.0;
  double b = 0.0;
  double v = 0.0;
  double k = 1.0;
  double delta = 0.0;
  int sign_k = +1;      // sign in front of k(x - vt)
  int sign_delta = +1;  // sign in front of delta

  void validate() const {
    if (!std::isfinite(m) || m < 0) throw std::invalid_argument("DsgParams: m must be >= 0");
    if (!std::isfinite(b)) throw std::invalid_argument("DsgParams: b must be finite");
    if (!std::isfinite(v) || std::abs(v) >= 1.0) throw std::invalid_argument("DsgParams: |v| must be < 1");
    if (!std::isfinite(k) || !std::isfinite(delta)) throw std::invalid_argument("DsgParams: non-finite k or delta");
    if ((sign_k != 1 && sign_k != -1) || (sign_delta != 1 && sign_delta != -1))
      throw std::invalid_argument("DsgParams: signs must be +1 or -1");
  }

  // Exact sine-Gordon kink (b = 0) with k fixed by the dispersion relation.
  static DsgParams sine_gordon(double m, double v, double delta = 0.0, int sign = +1) {
    DsgParams p;
    p.m = m;
    p.b = 0.0;
    p.v = v;
    p.delta = delta;
    p.sign_k = sign;
    if (!(std::abs(v) < 1.0)) throw std::invalid_argument("DsgParams: |v| must be < 1");
    p.k = m / std::sqrt(1.0 - v * v);
    p.validate();
    return p;
  }
};

inline double kink_phase(const DsgParams& p, double x, double t) {
  return p.sign_k * p.k * (x - p.v * t) + p.sign_delta * p.delta;
}

inline double kink(const DsgParams& p, double x, double t) {
  return 4.0 * std::atan(std::exp(kink_phase(p, x, t)));
}

struct ThetaJet {
  double value = 0.0, t = 0.0, x = 0.0, tt = 0.0, xx = 0.0;
};

// Exact derivatives: dTheta/dxi = 2 sech xi, d2Theta/dxi2 = -2 sech xi tanh xi.
inline ThetaJet kink_jet(const DsgParams& p, double x, double t) {
  const double xi = kink_phase(p, x, t);
  const double sech = 1.0 / std::cosh(xi);
  const double d1 = 2.0 * sech;
  const double d2 = -2.0 * sech * std::tanh(xi);
  const double xi_x = p.sign_k * p.k;
  const double xi_t = -p.sign_k * p.k * p.v;
  ThetaJet j;
  j.value = 4.0 * std::atan(std::exp(xi));
  j.x = d1 * xi_x;
  j.t = d1 * xi_t;
  j.xx = d2 * xi_x * xi_x;
  j.tt = d2 * xi_t * xi_t;
  return j;
}

inline double dsg_lhs(const DsgParams& p, const ThetaJet& j) {
  return j.tt - j.xx + p.m * p.m * std::sin(j.value) + 0.5 * p.b * std::sin(2.0 * j.value);
}

struct Sample {
  double x, t;
};

// max |LHS| over samples with exact derivatives from `jet`.
inline double dsg_residual(const DsgParams& p, const std::function<ThetaJet(double, double)>& jet,
                           const std::vector<Sample>& samples) {
  double worst = 0.0;
  for (const auto& s : samples) worst = std::max(worst, std::abs(dsg_lhs(p, jet(s.x, s.t))));
  return worst;
}

// Same with second-order central differences of a plain Theta(x, t).
inline double dsg_residual_fd(const DsgParams& p, const std::function<double(double, double)>& theta,
                              const std::vector<Sample>& samples, double h) {
  if (!(h > 0)) throw std::invalid_argument("dsg_residual_fd: step must be positive");
  double worst = 0.0;
  for (const auto& s : samples) {
    ThetaJet j;
    j.value = theta(s.x, s.t);
    j.xx = (theta(s.x + h, s.t) - 2.0 * j.value + theta(s.x - h, s.t)) / (h * h);
    j.tt = (theta(s.x, s.t + h) - 2.0 * j.value + theta(s.x, s.t - h)) / (h * h);
    worst = std::max(worst, std::abs(dsg_lhs(p, j)));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Wave state and evolution

struct WaveState {
  Grid grid;
  std::vector<double> theta;
  std::vector<double> theta_t;
  double t = 0.0;

  WaveState(Grid g, std::vector<double> th, std::vector<double> th_t, double time = 0.0)
      : grid(std::move(g)), theta(std::move(th)), theta_t(std::move(th_t)), t(time) {
    if (grid.dim() != 1) throw std::invalid_argument("WaveState needs a 1D grid");
    if (theta.size() != grid.size() || theta_t.size() != grid.size())
      throw std::invalid_argument("WaveState sample count does not match the grid");
    check_finite();
  }

  void check_finite() const {
    for (std::size_t i = 0; i < theta.size(); ++i)
      if (!std::isfinite(theta[i]) || !std::isfinite(theta_t[i]))
        throw NumericalError("wave state became non-finite at t = " + std::to_string(t));
  }

  double x(std::size_t i) const { return grid.coordinate(0, static_cast<int>(i)); }
};

inline WaveState make_state(const Grid& g, const std::function<double(double)>& theta,
                            const std::function<double(double)>& theta_t, double t0 = 0.0) {
  if (g.dim() != 1) throw std::invalid_argument("make_state needs a 1D grid");
  std::vector<double> a(g.size()), b(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.coordinate(0, static_cast<int>(i));
    a[i] = theta(x);
    b[i] = theta_t(x);
  }
  return WaveState(g, std::move(a), std::move(b), t0);
}

inline WaveState kink_state(const DsgParams& p, const Grid& g, double t0 = 0.0) {
  return make_state(
      g, [&](double x) { return kink(p, x, t0); }, [&](double x) { return kink_jet(p, x, t0).t; }, t0);
}

namespace detail {

inline void acceleration(const DsgParams& p, const std::vector<double>& th, double h,
                         std::vector<double>& a) {
  const std::size_t n = th.size();
  const double m2 = p.m * p.m, inv_h2 = 1.0 / (h * h);
  a[0] = 0.0;
  a[n - 1] = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i)
    a[i] = (th[i + 1] - 2.0 * th[i] + th[i - 1]) * inv_h2 - m2 * std::sin(th[i]) -
           0.5 * p.b * std::sin(2.0 * th[i]);
}

}  // namespace detail

// Kick-drift-kick leapfrog with edge values pinned to their initial sector
// values. Requires dt <= h / 2.
inline WaveState evolve(WaveState state, const DsgParams& p, double dt, long steps) {
  p.validate();
  const double h = state.grid.spacing(0);
  if (!(dt > 0)) throw std::invalid_argument("evolve: dt must be positive");
  if (dt > 0.5 * h * (1.0 + 1e-12))
    throw NumericalError("CFL violation: dt = " + std::to_string(dt) + " exceeds h/2 = " +
                         std::to_string(0.5 * h));
  if (steps < 0) throw std::invalid_argument("evolve: negative step count");
  auto& th = state.theta;
  auto& v = state.theta_t;
  const std::size_t n = th.size();
  v[0] = 0.0;
  v[n - 1] = 0.0;
  std::vector<double> a(n);
  detail::acceleration(p, th, h, a);
  for (long s = 0; s < steps; ++s) {
    for (std::size_t i = 1; i + 1 < n; ++i) {
      v[i] += 0.5 * dt * a[i];
      th[i] += dt * v[i];
    }
    detail::acceleration(p, th, h, a);
    for (std::size_t i = 1; i + 1 < n; ++i) v[i] += 0.5 * dt * a[i];
    state.t += dt;
    if (!std::isfinite(th[n / 2])) state.check_finite();
  }
  state.check_finite();
  return state;
}

// Discrete energy: kinetic and potential terms by the trapezoid rule, the
// gradient term on cell differences (the form the leapfrog scheme conserves).
inline double energy(const WaveState& s, const DsgParams& p) {
  const std::size_t n = s.theta.size();
  const double h = s.grid.spacing(0), m2 = p.m * p.m;
  double e = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = (i == 0 || i + 1 == n) ? 0.5 * h : h;
    const double th = s.theta[i];
    e += w * (0.5 * s.theta_t[i] * s.theta_t[i] + m2 * (1.0 - std::cos(th)) +
              0.25 * p.b * (1.0 - std::cos(2.0 * th)));
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double d = (s.theta[i + 1] - s.theta[i]) / h;
    e += 0.5 * h * d * d;
  }
  return e;
}

// (Theta(+edge) - Theta(-edge)) / 2 pi. Edges whose slope exceeds
// `settle_tol` are flagged as unsettled.
inline ChargeReport sector_charge(const WaveState& s, double settle_tol = 1e-3) {
  const std::size_t n = s.theta.size();
  const double h = s.grid.spacing(0);
  ChargeReport r;
  r.quantity = "sector_charge";
  r.method = ChargeMethod::asymptotic_phase;
  r.value = (s.theta[n - 1] - s.theta[0]) / (2.0 * pi);
  r.grid = grid_json(s.grid);
  r.grid["t"] = s.t;
  r.settle();
  const double left = std::abs(s.theta[1] - s.theta[0]) / h;
  const double right = std::abs(s.theta[n - 1] - s.theta[n - 2]) / h;
  if (left > settle_tol || right > settle_tol)
    r.warnings.push_back("unsettled boundary: edge slope exceeds " + std::to_string(settle_tol));
  return r;
}

// Rows t, x, Theta.
inline void write_snapshot(std::ostream& os, const WaveState& s, bool header) {
  if (header) os << "t,x,theta\n";
  char buf[96];
  for (std::size_t i = 0; i < s.theta.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", s.t, s.x(i), s.theta[i]);
    os << buf;
  }
}

}  // namespace topodef

#endif
