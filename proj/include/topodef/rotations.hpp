#ifndef TOPODEF_ROTATIONS_HPP
#define TOPODEF_ROTATIONS_HPP

// SO(3)/SU(2) algebra. SU(2) elements are unit quaternions (n1, n2, n3, n4)
// standing for U = n4 I + i n.sigma; the 2x2 complex matrix is only built on
// demand.

#include <array>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "topodef/errors.hpp"
#include "topodef/grid.hpp"

namespace topodef {

using cplx = std::complex<double>;
using Mat2c = Eigen::Matrix2cd;
using Vec2c = Eigen::Vector2cd;

inline constexpr double unit_tolerance = 1e-12;

inline std::array<Mat2c, 3> pauli() {
  const cplx I(0.0, 1.0);
  Mat2c s1, s2, s3;
  s1 << 0, 1, 1, 0;
  s2 << 0, -I, I, 0;
  s3 << 1, 0, 0, -1;
  return {s1, s2, s3};
}

// Antisymmetric matrix with [v]x w = v x w.
inline Mat3 cross_matrix(const Vec3& v) {
  Mat3 m;
  m << 0, -v[2], v[1], v[2], 0, -v[0], -v[1], v[0], 0;
  return m;
}

inline Vec3 axial_vector(const Mat3& a) {
  return 0.5 * Vec3(a(2, 1) - a(1, 2), a(0, 2) - a(2, 0), a(1, 0) - a(0, 1));
}

struct AxisAngle {
  Vec3 axis;
  double angle;

  AxisAngle(const Vec3& n, double theta) : axis(n), angle(theta) {
    if (!n.allFinite() || std::abs(n.squaredNorm() - 1.0) > unit_tolerance)
      throw std::invalid_argument("rotation axis must be a unit vector");
    if (!std::isfinite(theta)) throw std::invalid_argument("rotation angle must be finite");
  }
};

class SU2Element {
 public:
  SU2Element() : q_(0, 0, 0, 1) {}

  // Accepts (n1, n2, n3, n4). Inputs within 1e-6 of the unit sphere are
  // projected back onto it (counted as a renormalisation); anything further
  // off is rejected.
  explicit SU2Element(const Vec4& q) : q_(q) {
    if (!q.allFinite()) throw std::invalid_argument("SU2Element: non-finite components");
    const double dev = std::abs(q.squaredNorm() - 1.0);
    if (dev > 1e-6)
      throw std::invalid_argument("SU2Element: quaternion is not unit (|n|^2 - 1 = " +
                                  std::to_string(dev) + ")");
    if (dev > unit_tolerance) {
      q_.normalize();
      ++diag::renormalisations();
      diag::note("renormalised SU(2) element");
    }
  }

  static SU2Element identity() { return SU2Element(); }
  static SU2Element minus_identity() { return SU2Element(Vec4(0, 0, 0, -1)); }

  const Vec4& quaternion() const { return q_; }
  Vec3 vector_part() const { return q_.head<3>(); }
  double scalar_part() const { return q_[3]; }

  SU2Element operator-() const { return SU2Element(Vec4(-q_)); }

  // U V with U = a4 + i a.sigma, V = b4 + i b.sigma:
  // (a4 b4 - a.b) + i (a4 b + b4 a - a x b).sigma
  SU2Element operator*(const SU2Element& o) const {
    const Vec3 a = vector_part(), b = o.vector_part();
    const double a4 = q_[3], b4 = o.q_[3];
    Vec4 r;
    r.head<3>() = a4 * b + b4 * a - a.cross(b);
    r[3] = a4 * b4 - a.dot(b);
    return SU2Element(r);
  }

  SU2Element adjoint() const { return SU2Element(Vec4(-q_[0], -q_[1], -q_[2], q_[3])); }

  Mat2c matrix() const {
    const cplx I(0.0, 1.0);
    Mat2c u;
    u << q_[3] + I * q_[2], I * q_[0] + q_[1], I * q_[0] - q_[1], q_[3] - I * q_[2];
    return u;
  }

  static SU2Element from_matrix(const Mat2c& u) {
    // u = n4 I + i n.sigma: n4 = Re u00, n3 = Im u00, n1 = Im u01, n2 = Re u01
    return SU2Element(Vec4(u(0, 1).imag(), u(0, 1).real(), u(0, 0).imag(), u(0, 0).real()));
  }

 private:
  Vec4 q_;
};

class Rotation3 {
 public:
  explicit Rotation3(const Mat3& m, double tol = 1e-10) : m_(m) {
    if (!m.allFinite() || (m.transpose() * m - Mat3::Identity()).cwiseAbs().maxCoeff() > tol ||
        std::abs(m.determinant() - 1.0) > tol)
      throw std::invalid_argument("Rotation3: matrix is not a proper rotation");
  }
  static Rotation3 identity() { return Rotation3(Mat3::Identity()); }
  const Mat3& matrix() const { return m_; }
  Vec3 operator*(const Vec3& v) const { return m_ * v; }

 private:
  Mat3 m_;
};

// R_ij = cos T d_ij + (1 - cos T) n_i n_j - eps_ijk n_k sin T
inline Rotation3 rodrigues(const AxisAngle& aa) {
  const double c = std::cos(aa.angle), s = std::sin(aa.angle);
  const Vec3& n = aa.axis;
  Mat3 r = c * Mat3::Identity() + (1.0 - c) * n * n.transpose() + s * cross_matrix(n);
  return Rotation3(r);
}

// exp(i w n.sigma) = (sin w n, cos w)
inline SU2Element su2_from_axis(const AxisAngle& half) {
  Vec4 q;
  q.head<3>() = std::sin(half.angle) * half.axis;
  q[3] = std::cos(half.angle);
  return SU2Element(q);
}

// R_ij = 2 n_i n_j - 2 eps_ijk n_k n4 + d_ij (2 n4^2 - 1)
inline Mat3 skyrme_matrix(const Vec4& q) {
  const Vec3 n = q.head<3>();
  const double n4 = q[3];
  return 2.0 * n * n.transpose() + 2.0 * n4 * cross_matrix(n) +
         (2.0 * n4 * n4 - 1.0) * Mat3::Identity();
}

inline Rotation3 skyrme_correspondence(const SU2Element& u) {
  return Rotation3(skyrme_matrix(u.quaternion()));
}

// R_ij = 1/2 tr(sigma_i U^dagger sigma_j U), evaluated with complex matrices.
inline Mat3 skyrme_trace_form(const SU2Element& u) {
  const auto s = pauli();
  const Mat2c U = u.matrix();
  const Mat2c Ud = U.adjoint();
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = 0.5 * (s[i] * Ud * s[j] * U).trace().real();
  return r;
}

// Directional derivative of the degree-two extension
// 2 n n^T + 2 n4 [n]x + (n4^2 - |n|^2) I, which equals skyrme_matrix on the
// unit sphere. Being homogeneous, it maps a radial dq to 2 R dq-length and
// so drops out of R^T dR exactly like the trace form does.
inline Mat3 skyrme_matrix_derivative(const Vec4& q, const Vec4& dq) {
  const Vec3 n = q.head<3>(), dn = dq.head<3>();
  const double n4 = q[3], dn4 = dq[3];
  return 2.0 * (dn * n.transpose() + n * dn.transpose()) +
         2.0 * (dn4 * cross_matrix(n) + n4 * cross_matrix(dn)) +
         2.0 * (n4 * dn4 - n.dot(dn)) * Mat3::Identity();
}

// z = U (1, 0)^T
inline Vec2c doublet(const SU2Element& u) {
  const Vec4& q = u.quaternion();
  return Vec2c(cplx(q[3], q[2]), cplx(-q[1], q[0]));
}

// H(z) = z^dagger sigma z
inline Vec3 hopf(const Vec2c& z) {
  if (!z.allFinite() || std::abs(z.squaredNorm() - 1.0) > unit_tolerance)
    throw std::invalid_argument("hopf: doublet must satisfy z^dagger z = 1");
  const auto s = pauli();
  Vec3 h;
  for (int a = 0; a < 3; ++a) h[a] = (z.adjoint() * s[a] * z)(0, 0).real();
  return h;
}

// (sigma.r + iI)(sigma.r - iI)^{-1} = ((r^2 - 1) I + 2i sigma.r) / (1 + r^2)
inline SU2Element point_to_su2(const Vec3& r) {
  if (!r.allFinite()) throw std::invalid_argument("point_to_su2: non-finite point");
  const double r2 = r.squaredNorm();
  Vec4 q;
  if (r2 > 1e150) {
    q = Vec4(0, 0, 0, 1);
  } else {
    const double d = 1.0 + r2;
    q.head<3>() = (2.0 / d) * r;
    q[3] = (r2 - 1.0) / d;
  }
  return SU2Element(q);
}

// The same map evaluated literally as a product of 2x2 complex matrices.
inline Mat2c point_to_su2_matrix(const Vec3& r) {
  const auto s = pauli();
  const cplx I(0.0, 1.0);
  Mat2c sr = r[0] * s[0] + r[1] * s[1] + r[2] * s[2];
  return (sr + I * Mat2c::Identity()) * (sr - I * Mat2c::Identity()).inverse();
}

// Q_ab = (n_a n_b - d_ab / 3) Theta
inline Mat3 order_parameter_q(const AxisAngle& aa) {
  return (aa.axis * aa.axis.transpose() - Mat3::Identity() / 3.0) * aa.angle;
}

}  // namespace topodef

#endif
