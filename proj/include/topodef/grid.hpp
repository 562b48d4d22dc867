#ifndef TOPODEF_GRID_HPP
#define TOPODEF_GRID_HPP

// Uniform Cartesian lattices, sampled fields, second-order finite
// differences, the Curl/Cof matrix operators and the quadrature rules used
// by every charge integral in the library.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "topodef/errors.hpp"

namespace topodef {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;
template <int D>
using VecD = Eigen::Matrix<double, D, 1>;

using MultiIndex = std::array<int, 4>;

inline constexpr double pi = std::numbers::pi;

// ---------------------------------------------------------------------------
// Levi-Civita symbols

inline constexpr int levi_civita(int i, int j, int k) {
  if (i == j || j == k || i == k) return 0;
  return ((j - i + 3) % 3 == 1) ? 1 : -1;
}

// Sign of an arbitrary index sequence (0 when an index repeats).
inline int permutation_sign(std::span<const int> idx) {
  int sign = 1;
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      if (idx[a] == idx[b]) return 0;
      if (idx[a] > idx[b]) sign = -sign;
    }
  return sign;
}

// ---------------------------------------------------------------------------
// Grid

struct AxisSpec {
  double lo = 0.0;
  double hi = 1.0;
  int n = 4;
};

class Grid {
 public:
  explicit Grid(std::vector<AxisSpec> axes) : axes_(std::move(axes)) {
    if (axes_.empty() || axes_.size() > 4)
      throw std::invalid_argument("grid dimension must be 1..4, got " +
                                  std::to_string(axes_.size()));
    std::size_t stride = 1;
    for (int a = static_cast<int>(axes_.size()) - 1; a >= 0; --a) {
      const auto& ax = axes_[a];
      if (ax.n < 4)
        throw std::invalid_argument("grid axis " + std::to_string(a) +
                                    " needs at least 4 samples");
      if (!(ax.hi > ax.lo) || !std::isfinite(ax.lo) || !std::isfinite(ax.hi))
        throw std::invalid_argument("grid axis " + std::to_string(a) +
                                    " requires finite hi > lo");
      strides_[a] = stride;
      stride *= static_cast<std::size_t>(ax.n);
    }
    size_ = stride;
  }

  static Grid uniform(int dim, double lo, double hi, int n) {
    return Grid(std::vector<AxisSpec>(static_cast<std::size_t>(std::max(dim, 0)),
                                      AxisSpec{lo, hi, n}));
  }

  // Cube [-half_width, half_width]^dim with spacing as close to h as the
  // integer sample count allows; the origin is a node when the count is odd.
  static Grid centred(int dim, double half_width, double h) {
    int n = 2 * static_cast<int>(std::lround(half_width / h)) + 1;
    return uniform(dim, -half_width, half_width, std::max(n, 5));
  }

  int dim() const { return static_cast<int>(axes_.size()); }
  const AxisSpec& axis(int a) const { return axes_.at(static_cast<std::size_t>(a)); }
  int count(int a) const { return axis(a).n; }
  double spacing(int a) const {
    const auto& ax = axis(a);
    return (ax.hi - ax.lo) / (ax.n - 1);
  }
  std::size_t size() const { return size_; }
  double coordinate(int a, int i) const { return axis(a).lo + i * spacing(a); }

  bool contains(const MultiIndex& p) const {
    for (int a = 0; a < dim(); ++a)
      if (p[a] < 0 || p[a] >= axes_[a].n) return false;
    return true;
  }

  // At least `margin` samples away from every face.
  bool interior(const MultiIndex& p, int margin) const {
    for (int a = 0; a < dim(); ++a)
      if (p[a] < margin || p[a] >= axes_[a].n - margin) return false;
    return true;
  }

  bool contains_point(const Eigen::VectorXd& x) const {
    if (x.size() != dim()) return false;
    for (int a = 0; a < dim(); ++a)
      if (x[a] < axes_[a].lo || x[a] > axes_[a].hi) return false;
    return true;
  }

  std::size_t linear(const MultiIndex& p) const {
    std::size_t k = 0;
    for (int a = 0; a < dim(); ++a) k += strides_[a] * static_cast<std::size_t>(p[a]);
    return k;
  }

  MultiIndex multi(std::size_t k) const {
    MultiIndex p{0, 0, 0, 0};
    for (int a = 0; a < dim(); ++a) {
      p[a] = static_cast<int>(k / strides_[a]);
      k %= strides_[a];
    }
    return p;
  }

  Eigen::VectorXd point(const MultiIndex& p) const {
    Eigen::VectorXd x(dim());
    for (int a = 0; a < dim(); ++a) x[a] = coordinate(a, p[a]);
    return x;
  }

  template <int D>
  VecD<D> point_fixed(const MultiIndex& p) const {
    VecD<D> x;
    for (int a = 0; a < D; ++a) x[a] = coordinate(a, p[a]);
    return x;
  }

  std::size_t stride(int a) const { return strides_[a]; }

  bool operator==(const Grid& o) const {
    if (dim() != o.dim()) return false;
    for (int a = 0; a < dim(); ++a)
      if (axes_[a].lo != o.axes_[a].lo || axes_[a].hi != o.axes_[a].hi ||
          axes_[a].n != o.axes_[a].n)
        return false;
    return true;
  }

 private:
  std::vector<AxisSpec> axes_;
  std::array<std::size_t, 4> strides_{};
  std::size_t size_ = 0;
};

// ---------------------------------------------------------------------------
// Sample value traits

namespace detail {

template <class T>
struct value_traits {
  static T zero() { return T::Zero(); }
  static bool finite(const T& v) { return v.allFinite(); }
};

template <>
struct value_traits<double> {
  static double zero() { return 0.0; }
  static bool finite(double v) { return std::isfinite(v); }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Sampled fields

template <class T>
class SampledField {
 public:
  using value_type = T;

  explicit SampledField(Grid grid)
      : grid_(std::move(grid)),
        samples_(grid_.size(), detail::value_traits<T>::zero()) {}

  SampledField(Grid grid, std::vector<T> samples)
      : grid_(std::move(grid)), samples_(std::move(samples)) {
    if (samples_.size() != grid_.size())
      throw std::invalid_argument("sample count " + std::to_string(samples_.size()) +
                                  " does not match grid size " +
                                  std::to_string(grid_.size()));
    for (const auto& s : samples_)
      if (!detail::value_traits<T>::finite(s))
        throw std::invalid_argument("sampled field contains non-finite entries");
  }

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return samples_.size(); }

  T& operator[](std::size_t k) { return samples_[k]; }
  const T& operator[](std::size_t k) const { return samples_[k]; }
  T& at(const MultiIndex& p) { return samples_[grid_.linear(p)]; }
  const T& at(const MultiIndex& p) const { return samples_[grid_.linear(p)]; }

  std::span<const T> samples() const { return samples_; }

 private:
  Grid grid_;
  std::vector<T> samples_;
};

using ScalarField = SampledField<double>;
template <int K>
using VectorField = SampledField<VecD<K>>;
using MatrixField = SampledField<Mat3>;

// Evaluates fn(point) at every node. fn receives an Eigen::VectorXd.
template <class T, class Fn>
SampledField<T> sample_field(const Grid& grid, Fn&& fn) {
  std::vector<T> out;
  out.reserve(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) out.push_back(fn(grid.point(grid.multi(k))));
  return SampledField<T>(grid, std::move(out));
}

template <class T, class Fn>
auto map_field(const SampledField<T>& f, Fn&& fn) {
  using R = std::decay_t<decltype(fn(f[0]))>;
  std::vector<R> out;
  out.reserve(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) out.push_back(fn(f[k]));
  return SampledField<R>(f.grid(), std::move(out));
}

// ---------------------------------------------------------------------------
// Finite differences

enum class Stencil { central, forward, backward, automatic };

// Second-order derivative of a sampled field along `axis` at node p.
// Central stencils are exact on quadratics; one-sided stencils are the
// three-point second-order forms and must be requested (or chosen by
// Stencil::automatic at the faces).
template <class T>
T partial(const SampledField<T>& f, int axis, const MultiIndex& p,
          Stencil stencil = Stencil::central) {
  const Grid& g = f.grid();
  if (axis < 0 || axis >= g.dim())
    throw std::out_of_range("partial: axis " + std::to_string(axis) + " out of range");
  if (!g.contains(p)) throw std::out_of_range("partial: point outside grid");

  const int n = g.count(axis);
  const int i = p[axis];
  if (stencil == Stencil::automatic)
    stencil = (i == 0) ? Stencil::forward : (i == n - 1) ? Stencil::backward : Stencil::central;

  const double h = g.spacing(axis);
  const auto s = static_cast<std::ptrdiff_t>(g.stride(axis));
  const auto k = static_cast<std::ptrdiff_t>(g.linear(p));
  auto v = [&](std::ptrdiff_t off) -> const T& { return f[static_cast<std::size_t>(k + off * s)]; };

  switch (stencil) {
    case Stencil::central:
      if (i < 1 || i > n - 2)
        throw std::out_of_range("partial: central stencil needs a neighbour on both sides");
      return (v(1) - v(-1)) * (0.5 / h);
    case Stencil::forward:
      if (i > n - 3) throw std::out_of_range("partial: forward stencil runs off the grid");
      return (v(0) * -3.0 + v(1) * 4.0 - v(2)) * (0.5 / h);
    case Stencil::backward:
      if (i < 2) throw std::out_of_range("partial: backward stencil runs off the grid");
      return (v(0) * 3.0 - v(-1) * 4.0 + v(-2)) * (0.5 / h);
    default:
      break;
  }
  throw std::logic_error("partial: unhandled stencil");
}

// Central difference of an analytic evaluator at an arbitrary point.
template <int D, class Fn>
auto central_difference(Fn&& fn, const VecD<D>& x, int axis, double h) {
  VecD<D> xp = x, xm = x;
  xp[axis] += h;
  xm[axis] -= h;
  return (fn(xp) - fn(xm)) * (0.5 / h);
}

// ---------------------------------------------------------------------------
// Curl and Cof

// (Curl M)_ij = eps_jmn d_m M_in, pointwise from the three partials.
inline Mat3 curl_from_partials(const std::array<Mat3, 3>& dM) {
  Mat3 c = Mat3::Zero();
  for (int j = 0; j < 3; ++j)
    for (int m = 0; m < 3; ++m)
      for (int n = 0; n < 3; ++n) {
        const int e = levi_civita(j, m, n);
        if (e != 0) c.col(j) += e * dM[m].col(n);
      }
  return c;
}

inline MatrixField curl_matrix(const MatrixField& M) {
  const Grid& g = M.grid();
  if (g.dim() != 3) throw std::invalid_argument("curl_matrix requires a 3D grid");
  MatrixField out(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const MultiIndex p = g.multi(k);
    std::array<Mat3, 3> dM;
    for (int m = 0; m < 3; ++m) dM[m] = partial(M, m, p, Stencil::automatic);
    out[k] = curl_from_partials(dM);
  }
  return out;
}

// (Cof M)_ij = 1/2 eps_ims eps_jnt M_mn M_st
inline Mat3 cof_matrix(const Mat3& M) {
  Mat3 c = Mat3::Zero();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double acc = 0.0;
      for (int m = 0; m < 3; ++m)
        for (int s = 0; s < 3; ++s) {
          const int e1 = levi_civita(i, m, s);
          if (e1 == 0) continue;
          for (int n = 0; n < 3; ++n)
            for (int t = 0; t < 3; ++t) {
              const int e2 = levi_civita(j, n, t);
              if (e2 != 0) acc += e1 * e2 * M(m, n) * M(s, t);
            }
        }
      c(i, j) = 0.5 * acc;
    }
  return c;
}

inline MatrixField cof_matrix(const MatrixField& M) { return map_field(M, [](const Mat3& m) { return cof_matrix(m); }); }

// ---------------------------------------------------------------------------
// Quadrature

// Area of the unit (d-1)-sphere embedded in d dimensions: 2 pi^(d/2) / Gamma(d/2).
inline double sphere_area(int d) {
  if (d < 2 || d > 4) throw std::invalid_argument("sphere_area supports d = 2, 3, 4");
  return 2.0 * std::pow(pi, 0.5 * d) / std::tgamma(0.5 * d);
}

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
inline QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre needs n >= 1");
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  return rule;
}

template <int D>
struct Ball {
  VecD<D> center = VecD<D>::Zero();
  double radius = 1.0;
};
using Circle = Ball<2>;
using Sphere = Ball<3>;

// Flux of a vector field through the sphere S^{D-1}: the integral of v.rhat dS.
//   D = 2: uniform-angle rule with 4*n_quad points (periodic, spectrally exact)
//   D = 3: Gauss-Legendre in cos(theta) x uniform azimuth (2*n_quad points)
//   D = 4: Gauss-Legendre in chi (weight sin^2 chi) x the D = 3 rule
template <int D>
double sphere_flux(const std::function<VecD<D>(const VecD<D>&)>& v, const Ball<D>& ball,
                   int n_quad) {
  static_assert(D >= 2 && D <= 4, "sphere_flux supports D = 2, 3, 4");
  if (n_quad < 16) throw std::invalid_argument("sphere quadrature needs n_quad >= 16");
  if (!(ball.radius > 0)) throw std::invalid_argument("sphere radius must be positive");
  const double R = ball.radius;
  double total = 0.0;
  if constexpr (D == 2) {
    const int m = 4 * n_quad;
    for (int k = 0; k < m; ++k) {
      const double phi = 2.0 * pi * k / m;
      const Vec2 rhat(std::cos(phi), std::sin(phi));
      total += v(ball.center + R * rhat).dot(rhat);
    }
    total *= 2.0 * pi * R / m;
  } else {
    const QuadratureRule gl = gauss_legendre(n_quad);
    const int m = 2 * n_quad;
    auto s2_sum = [&](auto&& body) {
      double acc = 0.0;
      for (int i = 0; i < n_quad; ++i) {
        const double u = gl.nodes[static_cast<std::size_t>(i)];
        const double st = std::sqrt(std::max(0.0, 1.0 - u * u));
        double ring = 0.0;
        for (int k = 0; k < m; ++k) {
          const double phi = 2.0 * pi * (k + 0.5) / m;
          ring += body(Vec3(st * std::cos(phi), st * std::sin(phi), u));
        }
        acc += gl.weights[static_cast<std::size_t>(i)] * ring * (2.0 * pi / m);
      }
      return acc;
    };
    if constexpr (D == 3) {
      total = R * R * s2_sum([&](const Vec3& rhat) { return v(ball.center + R * rhat).dot(rhat); });
    } else {
      const QuadratureRule glc = gauss_legendre(n_quad);
      for (int c = 0; c < n_quad; ++c) {
        const double chi = 0.5 * pi * (glc.nodes[static_cast<std::size_t>(c)] + 1.0);
        const double wchi = 0.5 * pi * glc.weights[static_cast<std::size_t>(c)];
        const double sc = std::sin(chi), cc = std::cos(chi);
        const double shell = s2_sum([&](const Vec3& w) {
          Vec4 rhat(sc * w[0], sc * w[1], sc * w[2], cc);
          return v(ball.center + R * rhat).dot(rhat);
        });
        total += wchi * sc * sc * shell;
      }
      total *= R * R * R;
    }
  }
  return total;
}

inline double surface_integral(const std::function<Vec3(const Vec3&)>& v, const Sphere& sphere,
                               int n_quad) {
  return sphere_flux<3>(v, sphere, n_quad);
}

// Multilinear interpolation of a sampled field at an off-lattice point.
template <class T>
T interpolate(const SampledField<T>& f, const Eigen::VectorXd& x) {
  const Grid& g = f.grid();
  if (!g.contains_point(x)) throw std::out_of_range("interpolate: point outside grid bounds");
  const int d = g.dim();
  MultiIndex base{0, 0, 0, 0};
  std::array<double, 4> frac{};
  for (int a = 0; a < d; ++a) {
    const double s = (x[a] - g.axis(a).lo) / g.spacing(a);
    int i = static_cast<int>(std::floor(s));
    i = std::clamp(i, 0, g.count(a) - 2);
    base[a] = i;
    frac[a] = s - i;
  }
  T acc = detail::value_traits<T>::zero();
  for (int corner = 0; corner < (1 << d); ++corner) {
    double w = 1.0;
    MultiIndex p = base;
    for (int a = 0; a < d; ++a) {
      const bool up = (corner >> a) & 1;
      p[a] += up ? 1 : 0;
      w *= up ? frac[a] : 1.0 - frac[a];
    }
    if (w != 0.0) acc = acc + f.at(p) * w;
  }
  return acc;
}

// Flux of a sampled 3-vector field through a sphere, via trilinear interpolation.
inline double surface_integral(const VectorField<3>& v, const Sphere& sphere, int n_quad) {
  const Grid& g = v.grid();
  if (g.dim() != 3) throw std::invalid_argument("surface_integral needs a 3D field");
  for (int a = 0; a < 3; ++a)
    if (sphere.center[a] - sphere.radius < g.axis(a).lo ||
        sphere.center[a] + sphere.radius > g.axis(a).hi)
      throw std::out_of_range("surface_integral: sphere exceeds grid bounds");
  return sphere_flux<3>([&](const Vec3& x) { return interpolate(v, Eigen::VectorXd(x)); }, sphere,
                        n_quad);
}

// Sum of increments df(p_k, p_{k+1}) over n_quad uniformly spaced points on
// a circle, closing the loop.
inline double contour_integral(const std::function<double(const Vec2&, const Vec2&)>& df,
                               const Circle& circle, int n_quad) {
  if (n_quad < 16) throw std::invalid_argument("contour quadrature needs n_quad >= 16");
  auto at = [&](int k) {
    const double phi = 2.0 * pi * k / n_quad;
    return Vec2(circle.center + circle.radius * Vec2(std::cos(phi), std::sin(phi)));
  };
  double total = 0.0;
  Vec2 prev = at(0);
  for (int k = 1; k <= n_quad; ++k) {
    const Vec2 next = at(k % n_quad);
    total += df(prev, next);
    prev = next;
  }
  return total;
}

// Trapezoid weight of node p (product of 1D weights).
inline double trapezoid_weight(const Grid& g, const MultiIndex& p) {
  double w = 1.0;
  for (int a = 0; a < g.dim(); ++a) {
    const double h = g.spacing(a);
    w *= (p[a] == 0 || p[a] == g.count(a) - 1) ? 0.5 * h : h;
  }
  return w;
}

inline double volume_integral(const ScalarField& f) {
  const Grid& g = f.grid();
  double total = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) total += trapezoid_weight(g, g.multi(k)) * f[k];
  return total;
}

}  // namespace topodef

#endif
