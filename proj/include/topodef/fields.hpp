#ifndef TOPODEF_FIELDS_HPP
#define TOPODEF_FIELDS_HPP

// Analytic field constructors. Every constructor returns a closure that maps
// a point to the field value, or std::nullopt where the field is undefined
// (vortex core, hedgehog origin, Higgs zero). Sampling onto a Grid is a
// separate step.

#include <cmath>
#include <cstdio>
#include <limits>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "topodef/errors.hpp"
#include "topodef/grid.hpp"
#include "topodef/rotations.hpp"

namespace topodef {

struct WindingInt {
  int value = 0;
  constexpr WindingInt() = default;
  constexpr explicit WindingInt(int n) : value(n) {}
  constexpr operator int() const { return value; }
};

template <int K, int D>
using FieldFn = std::function<std::optional<VecD<K>>(const VecD<D>&)>;

// Unwraps a closure value, turning the singular marker into an exception.
template <int K, int D>
VecD<K> evaluate_or_throw(const FieldFn<K, D>& f, const VecD<D>& x) {
  auto v = f(x);
  if (!v) throw SingularPoint("field is undefined at the requested point");
  return *v;
}

// ---------------------------------------------------------------------------
// Radial profiles

struct RadialProfile {
  std::string name;
  std::function<double(double)> value;
  double at_zero = 0.0;
  double at_infinity = 0.0;
  double scale = 1.0;

  double operator()(double r) const { return value(r); }
};

struct ProfileParams {
  double scale = 1.0;      // core radius a
  double amplitude = 1.0;  // Higgs vev F
  double coupling = 1.0;   // gauge coupling g
};

inline RadialProfile profile_library(const std::string& name, const ProfileParams& p = {}) {
  const double a = p.scale;
  if (!(a > 0) || !std::isfinite(a)) throw std::invalid_argument("profile scale must be positive");
  if (name == "skyrme-exp")
    return {name, [a](double r) { return pi * std::exp(-r / a); }, pi, 0.0, a};
  if (name == "skyrme-arctan")
    return {name, [a](double r) { return 4.0 * std::atan(std::exp(-r / a)); }, pi, 0.0, a};
  if (name == "higgs-tanh") {
    const double F = p.amplitude;
    return {name, [a, F](double r) { return F * std::tanh(r / a); }, 0.0, F, a};
  }
  if (name == "gauge-bps") {
    const double g = p.coupling;
    if (!(g > 0)) throw std::invalid_argument("gauge coupling must be positive");
    return {name,
            [a, g](double r) {
              const double s = r / a;
              if (s < 1e-4) return (s / (6.0 * a)) * (1.0 - 7.0 * s * s / 60.0) / g;
              if (s > 700.0) return 1.0 / (g * r);
              return (1.0 / r - 1.0 / (a * std::sinh(s))) / g;
            },
            0.0, 0.0, a};
  }
  if (name == "constant") return {name, [a](double) { return a; }, a, a, 1.0};
  throw std::invalid_argument("unknown profile '" + name +
                              "' (expected skyrme-exp, skyrme-arctan, higgs-tanh, gauge-bps)");
}

inline RadialProfile constant_profile(double c) {
  return {"constant", [c](double) { return c; }, c, c, 1.0};
}

// ---------------------------------------------------------------------------
// Angle helpers

inline double polar_angle(const Vec3& x) {
  return std::atan2(std::hypot(x[0], x[1]), x[2]);
}

inline double azimuth(const Vec3& x) { return std::atan2(x[1], x[0]); }

// ---------------------------------------------------------------------------
// Vortex (k = 2)

inline Vec2 vortex_value(WindingInt N, double phi) {
  return Vec2(std::cos(N * phi), std::sin(N * phi));
}

// Static vortex (cos N phi, sin N phi), phi = atan2(y, x) about `center`.
inline FieldFn<2, 2> vortex(WindingInt N, const Vec2& center = Vec2::Zero()) {
  return [N, center](const Vec2& x) -> std::optional<Vec2> {
    const Vec2 d = x - center;
    if (d.squaredNorm() == 0.0) {
      if (N == 0) return Vec2(1.0, 0.0);
      return std::nullopt;
    }
    return vortex_value(N, std::atan2(d[1], d[0]));
  };
}

// Dynamic vortex with a supplied phase phi(t, x); points are (t, x).
inline FieldFn<2, 2> vortex(WindingInt N, std::function<double(const Vec2&)> phase) {
  return [N, phase = std::move(phase)](const Vec2& p) -> std::optional<Vec2> {
    const double phi = phase(p);
    if (!std::isfinite(phi)) return std::nullopt;
    return vortex_value(N, phi);
  };
}

// ---------------------------------------------------------------------------
// Anisotropic n3 and the hedgehog

inline Vec3 n3_value(WindingInt N, double theta, double phi) {
  const double s = std::sin(theta);
  return Vec3(s * std::cos(N * phi), s * std::sin(N * phi), std::cos(theta));
}

// n3 with theta and phi taken as the spherical angles of the position.
// N = 1 is the hedgehog r_hat.
inline FieldFn<3, 3> n3(WindingInt N, const Vec3& center = Vec3::Zero()) {
  return [N, center](const Vec3& x) -> std::optional<Vec3> {
    const Vec3 d = x - center;
    const double r = d.norm();
    if (r == 0.0) return std::nullopt;
    if (N == 1) return Vec3(d / r);
    return n3_value(N, polar_angle(d), azimuth(d));
  };
}

inline FieldFn<3, 3> hedgehog(const Vec3& center = Vec3::Zero()) { return n3(WindingInt(1), center); }

// n3 with caller-supplied angle functions of position.
inline FieldFn<3, 3> n3(WindingInt N, std::function<double(const Vec3&)> theta,
                        std::function<double(const Vec3&)> phi) {
  return [N, theta = std::move(theta), phi = std::move(phi)](const Vec3& x) -> std::optional<Vec3> {
    const double t = theta(x), p = phi(x);
    if (!std::isfinite(t) || !std::isfinite(p)) return std::nullopt;
    return n3_value(N, t, p);
  };
}

// Constant field.
template <int K, int D>
FieldFn<K, D> constant_field(const VecD<K>& v) {
  return [v](const VecD<D>&) -> std::optional<VecD<K>> { return v; };
}

// ---------------------------------------------------------------------------
// Recursive n_d

// Angle function of a point with any number of coordinates; NaN marks a
// point where the angle is undefined.
using AngleFn = std::function<double(const Eigen::VectorXd&)>;

namespace angles {

inline AngleFn radial(RadialProfile profile) {
  return [profile = std::move(profile)](const Eigen::VectorXd& x) { return profile(x.norm()); };
}

// Angle between the first k coordinates of x and the positive k-th axis
// (k = 3 gives the spherical polar angle).
inline AngleFn polar(int k) {
  return [k](const Eigen::VectorXd& x) {
    if (x.size() < k) return std::numeric_limits<double>::quiet_NaN();
    const double perp = x.head(k - 1).norm();
    if (perp == 0.0 && x[k - 1] == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return std::atan2(perp, x[k - 1]);
  };
}

inline AngleFn constant(double c) {
  return [c](const Eigen::VectorXd&) { return c; };
}

}  // namespace angles

// n_2 = vortex in the first two coordinates; n_k = (sin w_k n_{k-1}, cos w_k).
// `levels` holds w_3, ..., w_d in order.
inline std::optional<Eigen::VectorXd> nd(int d, const std::vector<AngleFn>& levels, WindingInt N,
                                         const Eigen::VectorXd& point) {
  if (d < 3 || d > 4) throw std::invalid_argument("nd supports d = 3, 4");
  if (static_cast<int>(levels.size()) != d - 2)
    throw std::invalid_argument("nd needs one angle function per level (" + std::to_string(d - 2) +
                                " for d = " + std::to_string(d) + ")");
  if (point.size() < 2) throw std::invalid_argument("nd needs at least two coordinates");
  Eigen::VectorXd n(d);
  n.setZero();
  std::vector<double> w;
  for (const auto& f : levels) {
    const double v = f(point);
    if (!std::isfinite(v)) return std::nullopt;
    w.push_back(v);
  }
  // Product of sines above level 2 decides whether the planar phase matters.
  double weight = 1.0;
  for (double v : w) weight *= std::sin(v);
  Vec2 base(1.0, 0.0);
  if (point[0] != 0.0 || point[1] != 0.0) {
    base = vortex_value(N, std::atan2(point[1], point[0]));
  } else if (N != 0 && weight != 0.0) {
    return std::nullopt;
  }
  n[0] = base[0];
  n[1] = base[1];
  for (int k = 3; k <= d; ++k) {
    const double wk = w[static_cast<std::size_t>(k - 3)];
    n.head(k - 1) *= std::sin(wk);
    n[k - 1] = std::cos(wk);
  }
  return n;
}

// Unit quaternion field (sin w(r) n3, cos w(r)) of the Skyrme type.
inline FieldFn<4, 3> skyrme_field(WindingInt N, RadialProfile profile,
                                  const Vec3& center = Vec3::Zero()) {
  return [N, profile = std::move(profile), center](const Vec3& x) -> std::optional<Vec4> {
    const Vec3 d = x - center;
    const double r = d.norm();
    const double w = profile(r);
    const double s = std::sin(w);
    Vec4 q;
    if (r == 0.0) {
      if (std::abs(s) > 1e-14) return std::nullopt;
      q << 0.0, 0.0, 0.0, std::cos(w) >= 0 ? 1.0 : -1.0;
      return q;
    }
    const Vec3 axis = (N == 1) ? Vec3(d / r) : n3_value(N, polar_angle(d), azimuth(d));
    q.head<3>() = s * axis;
    q[3] = std::cos(w);
    return q;
  };
}

// ---------------------------------------------------------------------------
// Higgs / gauge configuration

struct MonopoleFields {
  FieldFn<3, 3> higgs;                          // phi^a
  std::function<Mat3(const Vec3&)> gauge;       // A(a, i), static gauge A^a_0 = 0
  FieldFn<3, 3> direction;                      // n = phi / |phi|
};

// phi^a = n_a F(r), A^a_i = eps_{a i b} n_b W(r). N = 0 is the vacuum sector
// with n frozen at (1, 0, 0).
inline MonopoleFields monopole_config(WindingInt N, RadialProfile F, RadialProfile W,
                                      const Vec3& center = Vec3::Zero()) {
  auto dir = (N == 0) ? constant_field<3, 3>(Vec3(1.0, 0.0, 0.0)) : n3(N, center);
  MonopoleFields m;
  m.direction = dir;
  m.higgs = [dir, F, center](const Vec3& x) -> std::optional<Vec3> {
    auto n = dir(x);
    if (!n) return std::nullopt;
    const double f = F((x - center).norm());
    if (f == 0.0) return std::nullopt;
    return Vec3(*n * f);
  };
  m.gauge = [dir, W, center](const Vec3& x) -> Mat3 {
    const double w = W((x - center).norm());
    if (w == 0.0) return Mat3::Zero();
    auto n = dir(x);
    if (!n) throw SingularPoint("gauge field undefined at the configuration centre");
    Mat3 A;
    for (int a = 0; a < 3; ++a)
      for (int i = 0; i < 3; ++i) {
        double acc = 0.0;
        for (int b = 0; b < 3; ++b) acc += levi_civita(a, i, b) * (*n)[b];
        A(a, i) = acc * w;
      }
    return A;
  };
  return m;
}

// ---------------------------------------------------------------------------
// Sampling and CSV

template <int K, int D>
SampledField<VecD<K>> sample(const Grid& grid, const FieldFn<K, D>& f) {
  if (grid.dim() != D) throw std::invalid_argument("sample: grid dimension does not match field");
  std::vector<VecD<K>> out;
  out.reserve(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto p = grid.multi(k);
    auto v = f(grid.point_fixed<D>(p));
    if (!v) throw SingularPoint("sample: field is singular at a grid node");
    out.push_back(*v);
  }
  return SampledField<VecD<K>>(grid, std::move(out));
}

// One row per node: coordinates then components. Singular nodes are written
// as nan so the row count always matches the grid.
template <int K, int D>
void write_csv(std::ostream& os, const Grid& grid, const FieldFn<K, D>& f) {
  static const char* axis_names[] = {"x", "y", "z", "w"};
  for (int a = 0; a < D; ++a) os << axis_names[a] << ',';
  for (int c = 0; c < K; ++c) os << 'n' << (c + 1) << (c + 1 < K ? "," : "\n");
  char buf[32];
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto x = grid.point_fixed<D>(grid.multi(k));
    for (int a = 0; a < D; ++a) {
      std::snprintf(buf, sizeof buf, "%.17g", x[a]);
      os << buf << ',';
    }
    auto v = f(x);
    for (int c = 0; c < K; ++c) {
      if (v) {
        std::snprintf(buf, sizeof buf, "%.17g", (*v)[c]);
        os << buf;
      } else {
        os << "nan";
      }
      os << (c + 1 < K ? "," : "\n");
    }
  }
}

}  // namespace topodef

#endif
