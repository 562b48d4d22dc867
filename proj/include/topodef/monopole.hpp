#ifndef TOPODEF_MONOPOLE_HPP
#define TOPODEF_MONOPOLE_HPP

// 't Hooft's gauge-invariant field tensor for static SU(2) Higgs/gauge
// configurations (A^a_0 = 0), its dual, the magnetic current and the
// monopole charge.
//
// Spacetime conventions: index 0 is time, the metric is (+,-,-,-) and
// eps_{0123} = +1, so eps^{0ijk} = -eps_{ijk} and the dual time row is
// Ftilde^{0i} = -1/2 eps_{ijk} F_{jk}.

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "topodef/charges.hpp"
#include "topodef/errors.hpp"
#include "topodef/fields.hpp"
#include "topodef/grid.hpp"
#include "topodef/report.hpp"

namespace topodef {

using Mat4 = Eigen::Matrix4d;

struct GaugeConfig {
  FieldFn<3, 3> higgs;                     // phi^a
  std::function<Mat3(const Vec3&)> gauge;  // A(a, i)
  double g = 1.0;
  double F = 1.0;
  double lambda = 0.0;  // carried as metadata only
  double fd_step = closure_step;

  GaugeConfig(FieldFn<3, 3> phi, std::function<Mat3(const Vec3&)> A, double coupling, double vev,
              double quartic = 0.0)
      : higgs(std::move(phi)), gauge(std::move(A)), g(coupling), F(vev), lambda(quartic) {
    if (!(g > 0) || !std::isfinite(g)) throw std::invalid_argument("gauge coupling g must be positive");
    if (!higgs || !gauge) throw std::invalid_argument("gauge configuration needs both fields");
  }

  static GaugeConfig from(const MonopoleFields& m, double coupling, double vev, double quartic = 0.0) {
    return GaugeConfig(m.higgs, m.gauge, coupling, vev, quartic);
  }

  // n = phi / |phi|; undefined at Higgs zeros.
  std::optional<Vec3> direction(const Vec3& x) const {
    auto p = higgs(x);
    if (!p) return std::nullopt;
    const double len = p->norm();
    if (!(len > 0)) return std::nullopt;
    return Vec3(*p / len);
  }

  FieldFn<3, 3> direction_field() const {
    return [cfg = *this](const Vec3& x) { return cfg.direction(x); };
  }
};

namespace detail {

// g eps^{abc} A^b_i v^c, column i.
inline Mat3 gauge_rotation(const Mat3& A, const Vec3& v, double g) {
  Mat3 out;
  for (int i = 0; i < 3; ++i) out.col(i) = g * Vec3(A.col(i)).cross(v);
  return out;
}

inline std::array<Mat3, 3> gauge_partials(const GaugeConfig& cfg, const Vec3& x) {
  std::array<Mat3, 3> dA;
  const double h = cfg.fd_step;
  for (int m = 0; m < 3; ++m) {
    Vec3 xp = x, xm = x;
    xp[m] += h;
    xm[m] -= h;
    dA[static_cast<std::size_t>(m)] = (cfg.gauge(xp) - cfg.gauge(xm)) / (2.0 * h);
  }
  return dA;
}

}  // namespace detail

// D_i phi^a = d_i phi^a + g eps^{abc} A^b_i phi^c, as a (a, i) matrix.
inline Mat3 covariant_derivative(const GaugeConfig& cfg, const Vec3& x) {
  const Vec3 phi = evaluate_or_throw(cfg.higgs, x);
  const Mat3 dphi = fd_jacobian<3, 3>(cfg.higgs, x, cfg.fd_step);
  return dphi + detail::gauge_rotation(cfg.gauge(x), phi, cfg.g);
}

// Spatial block of F_{mu nu} = n_a G^a_{mu nu} - (1/g) eps^{abc} n_a D_mu n_b D_nu n_c;
// the time row and column vanish in the static gauge.
inline Mat4 thooft_tensor(const GaugeConfig& cfg, const Vec3& x) {
  const auto n = cfg.direction(x);
  if (!n) throw SingularPoint("'t Hooft tensor is undefined at a Higgs zero");
  const FieldFn<3, 3> dir = cfg.direction_field();
  const Mat3 dn = fd_jacobian<3, 3>(dir, x, cfg.fd_step);
  const Mat3 A = cfg.gauge(x);
  const auto dA = detail::gauge_partials(cfg, x);
  const Mat3 Dn = dn + detail::gauge_rotation(A, *n, cfg.g);
  Mat4 Fmn = Mat4::Zero();
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      // G^a_ij = d_i A^a_j - d_j A^a_i + g eps^{abc} A^b_i A^c_j
      const Vec3 G = dA[static_cast<std::size_t>(i)].col(j) - dA[static_cast<std::size_t>(j)].col(i) +
                     cfg.g * Vec3(A.col(i)).cross(Vec3(A.col(j)));
      const double v = n->dot(G) - n->dot(Vec3(Dn.col(i)).cross(Vec3(Dn.col(j)))) / cfg.g;
      Fmn(i + 1, j + 1) = v;
      Fmn(j + 1, i + 1) = -v;
    }
  return Fmn;
}

// Time row of the dual: Ftilde^{0i} = -1/2 eps_{ijk} F_{jk}.
inline Vec3 dual_time_row(const Mat4& Fmn) {
  return -Vec3(Fmn(2, 3), Fmn(3, 1), Fmn(1, 2));
}

struct MagneticCurrent {
  double j0 = 0.0;             // topological density of n
  double div_dual = 0.0;       // d_i Ftilde^{0i}, finite differences
  double div_dual_gross = 0.0; // sum of |d_i Ftilde^{0i}| term by term
  double prefactor = 0.0;      // 4 pi / g
  Vec3 dual_field = Vec3::Zero();    // Ftilde^{0i}
  Vec3 flux_current = Vec3::Zero();  // (4 pi / g) J^i from the current of n
  Vec4 j = Vec4::Zero();             // (j^0, 0, 0, 0) in the static sector
};

// Both sides of d_nu Ftilde^{mu nu} = (4 pi / g) j^mu at a point: the left
// from finite differences of the 't Hooft tensor, the right from the
// topological current of n = phi / |phi|. The spatial components of j vanish
// for static fields.
inline MagneticCurrent magnetic_current(const GaugeConfig& cfg, const Vec3& x) {
  MagneticCurrent out;
  const FieldFn<3, 3> dir = cfg.direction_field();
  const double h = cfg.fd_step;
  out.prefactor = 4.0 * pi / cfg.g;
  out.j0 = charge_density_3d(dir, x, h);
  out.j[0] = out.j0;
  out.dual_field = dual_time_row(thooft_tensor(cfg, x));
  out.flux_current = out.prefactor * current_general<3>(dir, x, h);
  for (int i = 0; i < 3; ++i) {
    Vec3 xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    const double term = (dual_time_row(thooft_tensor(cfg, xp))[i] -
                         dual_time_row(thooft_tensor(cfg, xm))[i]) / (2.0 * h);
    out.div_dual += term;
    out.div_dual_gross += std::abs(term);
  }
  return out;
}

// m = (flux charge of n) / g on a sphere in the asymptotic region.
inline ChargeReport monopole_charge(const GaugeConfig& cfg, const Sphere& sphere, int n_quad = 64) {
  ChargeReport flux = flux_charge<3>(cfg.direction_field(), sphere, n_quad);
  ChargeReport r;
  r.quantity = "magnetic_charge";
  r.method = ChargeMethod::surface_flux;
  r.value = flux.value / cfg.g;
  r.grid = flux.grid;
  r.grid["coupling"] = cfg.g;
  r.grid["charge_quantum"] = 1.0 / cfg.g;
  r.nearest_integer = round_half_away(flux.value);
  r.error_estimate = std::abs(r.value - static_cast<double>(r.nearest_integer) / cfg.g);
  r.quantized = std::abs(flux.value - static_cast<double>(r.nearest_integer)) < 0.5;
  if (!r.quantized) r.warnings.push_back("non-quantized: m g is not close to an integer");
  return r;
}

}  // namespace topodef

#endif
