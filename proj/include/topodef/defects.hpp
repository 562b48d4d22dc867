#ifndef TOPODEF_DEFECTS_HPP
#define TOPODEF_DEFECTS_HPP

// Micropolar defect tensors built from rotation fields with trivial stretch:
// contortion K_mu = R^T d_mu R, dislocation density R^T Curl R, the Nye
// tensor, the Skyrme B field, the compatibility and Maurer-Cartan residuals,
// and the three equivalent baryon-number integrals.
//
// Index conventions: contortion slice mu holds the antisymmetric matrix
// (K_mu)_{bc} = R_{db} d_mu R_{dc}; the Nye tensor is
// Gamma_{a mu} = -1/2 eps_{abc} (K_mu)_{bc}, so Gamma = 2 B.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "topodef/charges.hpp"
#include "topodef/errors.hpp"
#include "topodef/fields.hpp"
#include "topodef/grid.hpp"
#include "topodef/report.hpp"
#include "topodef/rotations.hpp"

namespace topodef {

using RotationField = MatrixField;
using SU2Field = VectorField<4>;

struct Contortion {
  std::array<Mat3, 3> slice{Mat3::Zero(), Mat3::Zero(), Mat3::Zero()};

  static Contortion Zero() { return {}; }
  bool allFinite() const {
    return slice[0].allFinite() && slice[1].allFinite() && slice[2].allFinite();
  }
  // K_{b mu c}
  double operator()(int b, int mu, int c) const { return slice[static_cast<std::size_t>(mu)](b, c); }

  Contortion operator+(const Contortion& o) const {
    Contortion r;
    for (int m = 0; m < 3; ++m) r.slice[m] = slice[m] + o.slice[m];
    return r;
  }
  Contortion operator-(const Contortion& o) const {
    Contortion r;
    for (int m = 0; m < 3; ++m) r.slice[m] = slice[m] - o.slice[m];
    return r;
  }
  Contortion operator*(double s) const {
    Contortion r;
    for (int m = 0; m < 3; ++m) r.slice[m] = slice[m] * s;
    return r;
  }
};

using ContortionField = SampledField<Contortion>;

// Largest |K_{b mu c} + K_{c mu b}| over a slice set.
inline double antisymmetry_defect(const Contortion& k) {
  double d = 0.0;
  for (const auto& s : k.slice) d = std::max(d, (s + s.transpose()).cwiseAbs().maxCoeff());
  return d;
}

namespace detail {

inline void require_3d(const Grid& g, const char* what) {
  if (g.dim() != 3) throw std::invalid_argument(std::string(what) + " requires a 3D grid");
}

inline void require_rotations(const RotationField& R, double tol = 1e-8) {
  for (std::size_t k = 0; k < R.size(); ++k) {
    const Mat3& m = R[k];
    if ((m.transpose() * m - Mat3::Identity()).cwiseAbs().maxCoeff() > tol ||
        std::abs(m.determinant() - 1.0) > tol)
      throw std::invalid_argument("rotation field sample " + std::to_string(k) +
                                  " is not a proper rotation");
  }
}

// -1/2 eps_{abc} A_{bc}; for antisymmetric A this is the axial vector.
inline Vec3 nye_column(const Mat3& A) {
  Vec3 v;
  for (int a = 0; a < 3; ++a) {
    double acc = 0.0;
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) acc += levi_civita(a, b, c) * A(b, c);
    v[a] = -0.5 * acc;
  }
  return v;
}

}  // namespace detail

// Samples a rotation-valued closure.
inline RotationField sample_rotations(const Grid& g, const std::function<Mat3(const Vec3&)>& R) {
  detail::require_3d(g, "sample_rotations");
  std::vector<Mat3> out;
  out.reserve(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) out.push_back(R(g.point_fixed<3>(g.multi(k))));
  return RotationField(g, std::move(out));
}

// ---------------------------------------------------------------------------
// Dislocation density, contortion, Nye tensor

// K = R^T Curl R
inline MatrixField dislocation_density(const RotationField& R) {
  detail::require_3d(R.grid(), "dislocation_density");
  detail::require_rotations(R);
  const MatrixField c = curl_matrix(R);
  MatrixField out(R.grid());
  for (std::size_t k = 0; k < R.size(); ++k) out[k] = R[k].transpose() * c[k];
  return out;
}

// K_mu = R^T d_mu R, projected onto its antisymmetric part so that the
// stored slices are exactly antisymmetric; the symmetric remainder of the
// difference quotient is O(h^2).
inline ContortionField contortion_from_rotation(const RotationField& R) {
  const Grid& g = R.grid();
  detail::require_3d(g, "contortion_from_rotation");
  detail::require_rotations(R);
  ContortionField out(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const MultiIndex p = g.multi(k);
    Contortion c;
    for (int mu = 0; mu < 3; ++mu) {
      const Mat3 a = R[k].transpose() * partial(R, mu, p, Stencil::automatic);
      c.slice[static_cast<std::size_t>(mu)] = 0.5 * (a - a.transpose());
    }
    out[k] = c;
  }
  return out;
}

// (R^T Curl R)_{ij} = eps_{jmn} K_{i m n}
inline MatrixField dislocation_from_contortion(const ContortionField& K) {
  MatrixField out(K.grid());
  for (std::size_t k = 0; k < K.size(); ++k) {
    Mat3 d = Mat3::Zero();
    for (int j = 0; j < 3; ++j)
      for (int m = 0; m < 3; ++m)
        for (int n = 0; n < 3; ++n) {
          const int e = levi_civita(j, m, n);
          if (e != 0) d.col(j) += e * K[k].slice[static_cast<std::size_t>(m)].col(n);
        }
    out[k] = d;
  }
  return out;
}

inline Mat3 nye_tensor(const Contortion& K) {
  Mat3 G;
  for (int mu = 0; mu < 3; ++mu) G.col(mu) = detail::nye_column(K.slice[static_cast<std::size_t>(mu)]);
  return G;
}

inline MatrixField nye_tensor(const ContortionField& K) {
  return map_field(K, [](const Contortion& c) { return nye_tensor(c); });
}

// ---------------------------------------------------------------------------
// Skyrme B field

struct BFields {
  MatrixField trace_form;     // 1/(2i) tr(U^dagger sigma^a d_mu U)
  MatrixField rotation_form;  // -1/4 eps_{abc} (R^T d_mu R)_{bc}, R from the Skyrme correspondence
};

inline Mat3 b_trace_form(const Vec4& q, const std::array<Vec4, 3>& dq) {
  const auto s = pauli();
  const Mat2c Ud = SU2Element(q).matrix().adjoint();
  const cplx I(0.0, 1.0);
  Mat3 B;
  for (int mu = 0; mu < 3; ++mu) {
    const Vec4& d = dq[static_cast<std::size_t>(mu)];
    Mat2c dU;
    dU << d[3] + I * d[2], I * d[0] + d[1], I * d[0] - d[1], d[3] - I * d[2];
    for (int a = 0; a < 3; ++a) B(a, mu) = ((Ud * s[a] * dU).trace() / (2.0 * I)).real();
  }
  return B;
}

// Quaternion expansion of the trace form: B_mu = q4 dq - dq4 q + dq x q.
inline Mat3 b_from_quaternion(const Vec4& q, const Eigen::Matrix<double, 4, 3>& dq) {
  const Vec3 v = q.head<3>();
  Mat3 B;
  for (int mu = 0; mu < 3; ++mu) {
    const Vec3 dv = dq.col(mu).head<3>();
    B.col(mu) = q[3] * dv - dq(3, mu) * v + dv.cross(v);
  }
  return B;
}

inline BFields skyrme_b(const SU2Field& U) {
  const Grid& g = U.grid();
  detail::require_3d(g, "skyrme_b");
  for (std::size_t k = 0; k < U.size(); ++k)
    if (std::abs(U[k].squaredNorm() - 1.0) > 1e-10)
      throw std::invalid_argument("skyrme_b: sample " + std::to_string(k) + " is not unit");
  const RotationField R = map_field(U, [](const Vec4& q) { return skyrme_matrix(q); });
  BFields out{MatrixField(g), MatrixField(g)};
  for (std::size_t k = 0; k < g.size(); ++k) {
    const MultiIndex p = g.multi(k);
    std::array<Vec4, 3> dq;
    Mat3 Brot;
    for (int mu = 0; mu < 3; ++mu) {
      dq[static_cast<std::size_t>(mu)] = partial(U, mu, p, Stencil::automatic);
      const Mat3 K = R[k].transpose() * partial(R, mu, p, Stencil::automatic);
      Brot.col(mu) = 0.5 * detail::nye_column(K);
    }
    out.trace_form[k] = b_trace_form(U[k], dq);
    out.rotation_form[k] = Brot;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Residuals

struct ResidualNorms {
  double max = 0.0;
  double mean = 0.0;
  long count = 0;
};

struct CompatResidual {
  MatrixField residual;
  ResidualNorms norms;
};

// Curl M + Cof M with max / mean Frobenius norms over nodes at least two
// samples away from every face.
inline CompatResidual compat_residual(const MatrixField& M) {
  const Grid& g = M.grid();
  detail::require_3d(g, "compat_residual");
  MatrixField curl = curl_matrix(M);
  CompatResidual out{MatrixField(g), {}};
  double sum = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    out.residual[k] = curl[k] + cof_matrix(M[k]);
    if (!g.interior(g.multi(k), 2)) continue;
    const double n = out.residual[k].norm();
    out.norms.max = std::max(out.norms.max, n);
    sum += n;
    ++out.norms.count;
  }
  if (out.norms.count == 0) throw std::invalid_argument("compat_residual: grid has no interior nodes");
  out.norms.mean = sum / static_cast<double>(out.norms.count);
  return out;
}

// d_mu K_nu - d_nu K_mu + [K_mu, K_nu] for mu < nu, Frobenius norm summed
// over the three planes, on nodes at least two samples from every face.
inline ResidualNorms maurer_cartan_residual(const ContortionField& K) {
  const Grid& g = K.grid();
  detail::require_3d(g, "maurer_cartan_residual");
  ResidualNorms out;
  double sum = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const MultiIndex p = g.multi(k);
    if (!g.interior(p, 2)) continue;
    std::array<Contortion, 3> dK;
    for (int m = 0; m < 3; ++m) dK[static_cast<std::size_t>(m)] = partial(K, m, p, Stencil::central);
    double sq = 0.0;
    for (int mu = 0; mu < 3; ++mu)
      for (int nu = mu + 1; nu < 3; ++nu) {
        const Mat3& Km = K[k].slice[static_cast<std::size_t>(mu)];
        const Mat3& Kn = K[k].slice[static_cast<std::size_t>(nu)];
        const Mat3 r = dK[static_cast<std::size_t>(mu)].slice[static_cast<std::size_t>(nu)] -
                       dK[static_cast<std::size_t>(nu)].slice[static_cast<std::size_t>(mu)] +
                       Km * Kn - Kn * Km;
        sq += r.squaredNorm();
      }
    const double n = std::sqrt(sq);
    out.max = std::max(out.max, n);
    sum += n;
    ++out.count;
  }
  if (out.count == 0) throw std::invalid_argument("maurer_cartan_residual: grid has no interior nodes");
  out.mean = sum / static_cast<double>(out.count);
  return out;
}

// ---------------------------------------------------------------------------
// Baryon number

enum class BaryonFormula { det_b, det_gamma, kkk };

inline std::string to_string(BaryonFormula f) {
  switch (f) {
    case BaryonFormula::det_b: return "det-B";
    case BaryonFormula::det_gamma: return "det-Gamma";
    case BaryonFormula::kkk: return "KKK";
  }
  return "unknown";
}

inline BaryonFormula parse_formula(const std::string& s) {
  if (s == "det-B") return BaryonFormula::det_b;
  if (s == "det-Gamma") return BaryonFormula::det_gamma;
  if (s == "KKK") return BaryonFormula::kkk;
  throw std::invalid_argument("unknown formula '" + s + "' (expected det-B, det-Gamma, KKK)");
}

// eps^{mu nu rho} tr(K_mu K_nu K_rho)
inline double kkk_density(const std::array<Mat3, 3>& K) {
  const double a = (K[0] * K[1] * K[2]).trace();
  const double b = (K[0] * K[2] * K[1]).trace();
  return 3.0 * (a - b);
}

// The three integrands at one node. B uses the quaternion form of the trace
// formula; Gamma and K go through the Skyrme rotation and its chain-rule
// derivative, so they share only the derivative stencil of q.
struct BaryonDensities {
  double det_b = 0.0;      // -1/(2 pi^2) det B
  double det_gamma = 0.0;  // -1/(16 pi^2) det Gamma
  double kkk = 0.0;        // 1/(96 pi^2) eps tr(KKK)
};

inline BaryonDensities baryon_densities(const Vec4& q, const Eigen::Matrix<double, 4, 3>& dq) {
  BaryonDensities d;
  d.det_b = -b_from_quaternion(q, dq).determinant() / (2.0 * pi * pi);
  const Mat3 R = skyrme_matrix(q);
  std::array<Mat3, 3> K;
  Mat3 G;
  for (int mu = 0; mu < 3; ++mu) {
    K[static_cast<std::size_t>(mu)] = R.transpose() * skyrme_matrix_derivative(q, dq.col(mu));
    G.col(mu) = detail::nye_column(K[static_cast<std::size_t>(mu)]);
  }
  d.det_gamma = -G.determinant() / (16.0 * pi * pi);
  d.kkk = kkk_density(K) / (96.0 * pi * pi);
  return d;
}

struct BaryonOptions {
  double half_width = 8.0;  // lattice [-L, L]^3
  double h = 0.05;
  // Derivative step on the closure; 0 differentiates on the lattice itself.
  double derivative_step = closure_step;
  std::optional<RadialProfile> profile;  // enables the analytic tail estimate
};

struct BaryonResult {
  ChargeReport det_b, det_gamma, kkk;

  const ChargeReport& get(BaryonFormula f) const {
    return f == BaryonFormula::det_b ? det_b : f == BaryonFormula::det_gamma ? det_gamma : kkk;
  }
};

namespace detail {

inline void finish_baryon(BaryonResult& res, const json& grid_meta, const BaryonOptions& opt) {
  double tail = 0.0;
  if (opt.profile) {
    const double w = std::abs((*opt.profile)(opt.half_width));
    tail = 2.0 * w * w * w / (3.0 * pi);
  }
  for (auto* r : {&res.det_b, &res.det_gamma, &res.kkk}) {
    r->quantity = "baryon_number";
    r->method = ChargeMethod::volume_density;
    r->grid = grid_meta;
    if (opt.profile) r->grid["tail_estimate"] = tail;
    r->settle();
    if (std::abs(r->value - static_cast<double>(r->nearest_integer)) > 0.1)
      r->warnings.push_back("truncation: |value - integer| > 0.1, enlarge the domain");
    if (tail > 1e-4 * std::max(1.0, std::abs(static_cast<double>(r->nearest_integer))))
      r->warnings.push_back("truncation: profile tail beyond the domain exceeds 1e-4 of N");
  }
  res.det_b.grid["formula"] = "det-B";
  res.det_gamma.grid["formula"] = "det-Gamma";
  res.kkk.grid["formula"] = "KKK";
}

}  // namespace detail

// All three integrals in one streaming pass over [-L, L]^3; the field is
// evaluated once per node (plus one ghost layer) and differentiated with
// central differences.
inline BaryonResult baryon_number(const FieldFn<4, 3>& U, const BaryonOptions& opt = {}) {
  const Grid g = Grid::centred(3, opt.half_width, opt.h);
  double sb = 0.0, sg = 0.0, sk = 0.0;
  visit_lattice<4>(g, U, opt.derivative_step, [&](const MultiIndex& p, const Vec4& q, const Jacobian<4, 3>& dq, bool ok) {
    if (!ok) throw SingularPoint("baryon_number: SU(2) field is singular at a lattice node");
    const double w = trapezoid_weight(g, p);
    const BaryonDensities d = baryon_densities(q, dq);
    sb += w * d.det_b;
    sg += w * d.det_gamma;
    sk += w * d.kkk;
  });
  BaryonResult res;
  res.det_b.value = sb;
  res.det_gamma.value = sg;
  res.kkk.value = sk;
  json meta = grid_json(g);
  meta["derivative"] = opt.derivative_step > 0 ? "closure" : "lattice";
  if (opt.derivative_step > 0) meta["derivative_step"] = opt.derivative_step;
  detail::finish_baryon(res, meta, opt);
  return res;
}

inline ChargeReport baryon_number(const FieldFn<4, 3>& U, BaryonFormula f,
                                  const BaryonOptions& opt = {}) {
  return baryon_number(U, opt).get(f);
}

// Sampled SU(2) field; second-order one-sided stencils on the faces.
inline BaryonResult baryon_number(const SU2Field& U) {
  const Grid& g = U.grid();
  detail::require_3d(g, "baryon_number");
  double sb = 0.0, sg = 0.0, sk = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const MultiIndex p = g.multi(k);
    Jacobian<4, 3> dq;
    for (int mu = 0; mu < 3; ++mu) dq.col(mu) = partial(U, mu, p, Stencil::automatic);
    const double w = trapezoid_weight(g, p);
    const BaryonDensities d = baryon_densities(U[k], dq);
    sb += w * d.det_b;
    sg += w * d.det_gamma;
    sk += w * d.kkk;
  }
  BaryonResult res;
  res.det_b.value = sb;
  res.det_gamma.value = sg;
  res.kkk.value = sk;
  detail::finish_baryon(res, grid_json(g), BaryonOptions{});
  return res;
}

// ---------------------------------------------------------------------------
// Chern-Simons density

// eps^{mu nu rho} tr(K_mu d_nu K_rho + 2/3 K_mu K_nu K_rho)
inline double chern_simons_density(const ContortionField& K, const MultiIndex& p) {
  const Grid& g = K.grid();
  detail::require_3d(g, "chern_simons_density");
  if (!g.interior(p, 1)) throw std::out_of_range("chern_simons_density: point on the boundary");
  const std::size_t k = g.linear(p);
  std::array<Contortion, 3> dK;
  for (int m = 0; m < 3; ++m) dK[static_cast<std::size_t>(m)] = partial(K, m, p, Stencil::central);
  double acc = 0.0;
  for (int mu = 0; mu < 3; ++mu)
    for (int nu = 0; nu < 3; ++nu)
      for (int rho = 0; rho < 3; ++rho) {
        const int e = levi_civita(mu, nu, rho);
        if (e == 0) continue;
        acc += e * (K[k].slice[static_cast<std::size_t>(mu)] *
                    dK[static_cast<std::size_t>(nu)].slice[static_cast<std::size_t>(rho)])
                       .trace();
      }
  return acc + (2.0 / 3.0) * kkk_density(K[k].slice);
}

// Trapezoid integral of the density over nodes one sample inside the faces.
inline double chern_simons_integral(const ContortionField& K) {
  const Grid& g = K.grid();
  double total = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const MultiIndex p = g.multi(k);
    if (!g.interior(p, 1)) continue;
    double w = 1.0;
    for (int a = 0; a < 3; ++a) w *= g.spacing(a);
    total += w * chern_simons_density(K, p);
  }
  return total;
}

// Contortion K_mu = R^T d_mu R of an SU(2) closure at a point.
inline std::array<Mat3, 3> contortion_at(const FieldFn<4, 3>& U, const Vec3& x, double step = closure_step) {
  const Vec4 q = evaluate_or_throw(U, x);
  const Jacobian<4, 3> dq = fd_jacobian<4, 3>(U, x, step);
  const Mat3 Rt = skyrme_matrix(q).transpose();
  std::array<Mat3, 3> K;
  for (int mu = 0; mu < 3; ++mu)
    K[static_cast<std::size_t>(mu)] = Rt * skyrme_matrix_derivative(q, dq.col(mu));
  return K;
}

// Density of an SU(2) closure, derivatives of K taken on the closure.
inline double chern_simons_density(const FieldFn<4, 3>& U, const Vec3& x, double step = closure_step) {
  const auto K = contortion_at(U, x, step);
  double acc = 0.0;
  for (int nu = 0; nu < 3; ++nu) {
    Vec3 xp = x, xm = x;
    xp[nu] += step;
    xm[nu] -= step;
    const auto Kp = contortion_at(U, xp, step), Km = contortion_at(U, xm, step);
    for (int mu = 0; mu < 3; ++mu)
      for (int rho = 0; rho < 3; ++rho) {
        const int e = levi_civita(mu, nu, rho);
        if (e == 0) continue;
        const auto r = static_cast<std::size_t>(rho);
        acc += e * (K[static_cast<std::size_t>(mu)] * (Kp[r] - Km[r])).trace() / (2.0 * step);
      }
  }
  return acc + (2.0 / 3.0) * kkk_density(K);
}

// Trapezoid integral over [-L, L]^3 at spacing h.
inline double chern_simons_integral(const FieldFn<4, 3>& U, double half_width, double h,
                                    double step = closure_step) {
  const Grid g = Grid::centred(3, half_width, h);
  double total = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const MultiIndex p = g.multi(k);
    total += trapezoid_weight(g, p) * chern_simons_density(U, g.point_fixed<3>(p), step);
  }
  return total;
}

}  // namespace topodef

#endif
