#ifndef TOPODEF_CHARGES_HPP
#define TOPODEF_CHARGES_HPP

// Topological currents and integer charges of unit-vector fields: the
// (1+1)D / 2D vortex currents, contour winding numbers, the general
// d-dimensional current and its sphere flux, and lattice volume integrals of
// the topological density.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "topodef/errors.hpp"
#include "topodef/fields.hpp"
#include "topodef/grid.hpp"
#include "topodef/report.hpp"

namespace topodef {

template <int K, int D>
using Jacobian = Eigen::Matrix<double, K, D>;

// Central-difference Jacobian d_mu n_a (column mu) of a closure at x.
template <int K, int D>
Jacobian<K, D> fd_jacobian(const FieldFn<K, D>& f, const VecD<D>& x, double h) {
  if (!(h > 0)) throw std::invalid_argument("finite-difference step must be positive");
  Jacobian<K, D> J;
  for (int mu = 0; mu < D; ++mu) {
    VecD<D> xp = x, xm = x;
    xp[mu] += h;
    xm[mu] -= h;
    auto fp = f(xp), fm = f(xm);
    if (!fp || !fm) throw SingularPoint("derivative stencil touches a singular point");
    J.col(mu) = (*fp - *fm) / (2.0 * h);
  }
  return J;
}

// Default derivative step for closures: small against the unit length scale
// while keeping cancellation error near 1e-12.
inline constexpr double closure_step = 1e-4;

// ---------------------------------------------------------------------------
// (1+1) dimensions; points are (t, x)

inline Vec2 current_from_jacobian_2(const Vec2& n, const Jacobian<2, 2>& dn) {
  // J^mu = 1/(2 pi) eps^{mu nu} (n x d_nu n)
  auto cross = [&](int nu) { return n[0] * dn(1, nu) - n[1] * dn(0, nu); };
  return Vec2(cross(1), -cross(0)) / (2.0 * pi);
}

inline Vec2 current_1p1(const FieldFn<2, 2>& n, const Vec2& point, double h = closure_step) {
  return current_from_jacobian_2(evaluate_or_throw(n, point), fd_jacobian(n, point, h));
}

// Sampled variant; grid axis 0 is t, axis 1 is x.
inline Vec2 current_1p1(const VectorField<2>& n, const MultiIndex& p) {
  if (n.grid().dim() != 2) throw std::invalid_argument("current_1p1 needs a 2D (t, x) grid");
  Jacobian<2, 2> dn;
  for (int mu = 0; mu < 2; ++mu) dn.col(mu) = partial(n, mu, p, Stencil::central);
  return current_from_jacobian_2(n.at(p), dn);
}

// Static 2D: J^i = 1/(2 pi) eps^{ij} eps^{ab} n_a d_j n_b.
inline Vec2 current_2d_static(const FieldFn<2, 2>& n, const Vec2& point, double h = closure_step) {
  return current_1p1(n, point, h);
}

// ---------------------------------------------------------------------------
// Winding number

namespace detail {

inline double signed_angle(const Vec2& a, const Vec2& b) {
  return std::atan2(a[0] * b[1] - a[1] * b[0], a.dot(b));
}

}  // namespace detail

// Sum of unwrapped phase increments of a planar field around a circle,
// divided by 2 pi. The sample count doubles from n_quad until every
// increment is below pi/4.
inline ChargeReport winding_number(const FieldFn<2, 2>& n, const Circle& circle, int n_quad = 64,
                                   int max_quad = 1 << 20) {
  if (n_quad < 16) throw std::invalid_argument("contour quadrature needs n_quad >= 16");
  if (!(circle.radius > 0)) throw std::invalid_argument("contour radius must be positive");
  int m = n_quad;
  double total = 0.0, max_step = 0.0;
  for (;;) {
    std::vector<Vec2> ring(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
      const double phi = 2.0 * pi * k / m;
      const Vec2 x = circle.center + circle.radius * Vec2(std::cos(phi), std::sin(phi));
      auto v = n(x);
      if (!v) throw SingularPoint("contour passes through a singular point of the field");
      const double len = v->norm();
      if (!(len > 0)) throw SingularPoint("field vanishes on the contour");
      ring[static_cast<std::size_t>(k)] = *v / len;
    }
    total = 0.0;
    max_step = 0.0;
    for (int k = 0; k < m; ++k) {
      const double d = detail::signed_angle(ring[static_cast<std::size_t>(k)],
                                            ring[static_cast<std::size_t>((k + 1) % m)]);
      total += d;
      max_step = std::max(max_step, std::abs(d));
    }
    if (max_step < pi / 4 || m >= max_quad) break;
    m *= 2;
  }
  ChargeReport r;
  r.quantity = "winding_number";
  r.method = ChargeMethod::contour;
  r.value = total / (2.0 * pi);
  r.grid = {{"kind", "contour"},
            {"center", {circle.center[0], circle.center[1]}},
            {"radius", circle.radius},
            {"n_quad", m},
            {"max_increment", max_step}};
  r.settle();
  // Increments are branch-reduced into (-pi, pi], so an undersampled contour
  // shows up as increments that stay large at the sample cap.
  if (max_step >= pi / 4) {
    r.quantized = false;
    r.warnings.push_back("unreliable: phase increment above pi/4 at the sample cap, increments >= pi alias");
  }
  return r;
}

inline ChargeReport winding_number(const std::function<double(const Vec2&)>& phase,
                                   const Circle& circle, int n_quad = 64) {
  FieldFn<2, 2> f = [&phase](const Vec2& x) -> std::optional<Vec2> {
    const double p = phase(x);
    if (!std::isfinite(p)) return std::nullopt;
    return Vec2(std::cos(p), std::sin(p));
  };
  return winding_number(f, circle, n_quad);
}

// Sampled planar field: bilinear interpolation between nodes.
inline ChargeReport winding_number(const VectorField<2>& n, const Circle& circle, int n_quad = 64) {
  const Grid& g = n.grid();
  if (g.dim() != 2) throw std::invalid_argument("winding_number needs a 2D sampled field");
  for (int a = 0; a < 2; ++a)
    if (circle.center[a] - circle.radius < g.axis(a).lo ||
        circle.center[a] + circle.radius > g.axis(a).hi)
      throw std::out_of_range("winding_number: contour exceeds grid bounds");
  FieldFn<2, 2> f = [&n](const Vec2& x) -> std::optional<Vec2> {
    return interpolate(n, Eigen::VectorXd(x));
  };
  return winding_number(f, circle, n_quad, std::max(n_quad, 4096));
}

// ---------------------------------------------------------------------------
// General d-dimensional current

// Signed determinant sum: J^mu = 1/|S^{D-1}| sum over the ordered complement
// (nu_1 < ... < nu_{D-1}) of eps^{mu nu...} det[n, d_nu1 n, ...]. The (D-1)!
// orderings of the complement cancel the factorial of the full contraction.
template <int D>
VecD<D> current_from_jacobian(const VecD<D>& n, const Jacobian<D, D>& dn) {
  VecD<D> J;
  for (int mu = 0; mu < D; ++mu) {
    Eigen::Matrix<double, D, D> M;
    M.col(0) = n;
    std::array<int, D> idx{};
    idx[0] = mu;
    int c = 1;
    for (int nu = 0; nu < D; ++nu)
      if (nu != mu) {
        M.col(c) = dn.col(nu);
        idx[static_cast<std::size_t>(c)] = nu;
        ++c;
      }
    J[mu] = permutation_sign(std::span<const int>(idx.data(), idx.size())) * M.determinant();
  }
  return J / sphere_area(D);
}

template <int D>
VecD<D> current_general(const FieldFn<D, D>& n, const VecD<D>& point, double h = closure_step) {
  static_assert(D >= 2 && D <= 4, "current_general supports d = 2, 3, 4");
  return current_from_jacobian<D>(evaluate_or_throw(n, point), fd_jacobian(n, point, h));
}

// Runtime-dimension entry point.
inline Eigen::VectorXd current_general(int d, const std::function<std::optional<Eigen::VectorXd>(
                                                  const Eigen::VectorXd&)>& n,
                                       const Eigen::VectorXd& point, double h = closure_step) {
  auto run = [&](auto tag) -> Eigen::VectorXd {
    constexpr int D = decltype(tag)::value;
    FieldFn<D, D> f = [&n](const VecD<D>& x) -> std::optional<VecD<D>> {
      auto v = n(Eigen::VectorXd(x));
      if (!v) return std::nullopt;
      if (v->size() != D) throw std::invalid_argument("field has the wrong number of components");
      return VecD<D>(*v);
    };
    return current_general<D>(f, VecD<D>(point), h);
  };
  if (point.size() != d) throw std::invalid_argument("point dimension does not match d");
  switch (d) {
    case 2: return run(std::integral_constant<int, 2>{});
    case 3: return run(std::integral_constant<int, 3>{});
    case 4: return run(std::integral_constant<int, 4>{});
    default: throw std::invalid_argument("current_general supports d = 2, 3, 4");
  }
}

// Density d_mu J^mu = (D / |S^{D-1}|) det(d n) of a D-component field on D dims.
template <int D>
double divergence_density(const Jacobian<D, D>& dn) {
  return D * dn.determinant() / sphere_area(D);
}

// j^0 = 1/(8 pi) eps^{ijk} eps^{abc} d_i n_a d_j n_b d_k n_c = 6 det(dn) / (8 pi)
inline double charge_density_3d(const Jacobian<3, 3>& dn) { return 6.0 * dn.determinant() / (8.0 * pi); }

inline double charge_density_3d(const FieldFn<3, 3>& n, const Vec3& point, double h = closure_step) {
  return charge_density_3d(fd_jacobian(n, point, h));
}

// Time component of the (K)-dimensional current for a static K-component
// field on K-1 spatial dims: J^0 = 1/|S^{K-1}| det[n, d_1 n, ..., d_{K-1} n].
template <int K>
double static_density_from_jacobian(const VecD<K>& n, const Jacobian<K, K - 1>& dn) {
  Eigen::Matrix<double, K, K> M;
  M.col(0) = n;
  M.template rightCols<K - 1>() = dn;
  return M.determinant() / sphere_area(K);
}

template <int K>
double static_charge_density(const FieldFn<K, K - 1>& n, const VecD<K - 1>& point,
                             double h = closure_step) {
  return static_density_from_jacobian<K>(evaluate_or_throw(n, point), fd_jacobian(n, point, h));
}

// ---------------------------------------------------------------------------
// Surface (flux) charges

template <int D>
double flux_of_current(const FieldFn<D, D>& n, const Ball<D>& ball, int n_quad, double h) {
  std::function<VecD<D>(const VecD<D>&)> J = [&](const VecD<D>& x) {
    return current_general<D>(n, x, h);
  };
  return sphere_flux<D>(J, ball, n_quad);
}

template <int D>
ChargeReport flux_charge(const FieldFn<D, D>& n, const Ball<D>& ball, int n_quad = 64,
                         double h = -1.0) {
  if (h <= 0) h = closure_step * ball.radius;
  ChargeReport r;
  r.method = ChargeMethod::surface_flux;
  r.value = flux_of_current<D>(n, ball, n_quad, h);
  std::vector<double> c(ball.center.data(), ball.center.data() + D);
  r.grid = {{"kind", "sphere"}, {"dim", D}, {"center", c}, {"radius", ball.radius},
            {"n_quad", n_quad}, {"fd_step", h}};
  r.settle();
  return r;
}

// N = flux of J^i through a circle enclosing the vortex core.
inline ChargeReport charge_2d(const FieldFn<2, 2>& n, const Circle& circle, int n_quad = 64) {
  return flux_charge<2>(n, circle, n_quad);
}

// ---------------------------------------------------------------------------
// Lattice streaming

// Evaluates a closure on a 3D lattice plus one ghost layer, keeping three
// planes in memory, and hands every node its value and central-difference
// Jacobian. Nodes whose stencil touches a singular point are reported with
// valid = false.
template <int K, class Visit>
void stream_lattice(const Grid& g, const FieldFn<K, 3>& f, Visit&& visit) {
  if (g.dim() != 3) throw std::invalid_argument("stream_lattice needs a 3D grid");
  const int n0 = g.count(0), n1 = g.count(1), n2 = g.count(2);
  const double h0 = g.spacing(0), h1 = g.spacing(1), h2 = g.spacing(2);
  const int m1 = n1 + 2, m2 = n2 + 2;
  using V = VecD<K>;
  struct Node {
    V v;
    bool ok;
  };
  auto fill = [&](std::vector<Node>& plane, int i) {
    const double x = g.axis(0).lo + i * h0;
    for (int j = 0; j < m1; ++j)
      for (int k = 0; k < m2; ++k) {
        const Vec3 p(x, g.axis(1).lo + (j - 1) * h1, g.axis(2).lo + (k - 1) * h2);
        auto v = f(p);
        auto& node = plane[static_cast<std::size_t>(j * m2 + k)];
        node.ok = v.has_value();
        if (node.ok) node.v = *v;
      }
  };
  std::array<std::vector<Node>, 3> ring;
  for (auto& p : ring) p.resize(static_cast<std::size_t>(m1 * m2));
  fill(ring[0], -1);
  fill(ring[1], 0);
  for (int i = 0; i < n0; ++i) {
    auto& prev = ring[static_cast<std::size_t>((i) % 3)];
    auto& cur = ring[static_cast<std::size_t>((i + 1) % 3)];
    auto& next = ring[static_cast<std::size_t>((i + 2) % 3)];
    fill(next, i + 1);
    for (int j = 0; j < n1; ++j)
      for (int k = 0; k < n2; ++k) {
        auto at = [&](const std::vector<Node>& pl, int dj, int dk) -> const Node& {
          return pl[static_cast<std::size_t>((j + 1 + dj) * m2 + (k + 1 + dk))];
        };
        const Node& c = at(cur, 0, 0);
        const Node* st[6] = {&at(next, 0, 0), &at(prev, 0, 0), &at(cur, 1, 0),
                             &at(cur, -1, 0), &at(cur, 0, 1),  &at(cur, 0, -1)};
        bool ok = c.ok;
        for (auto* s : st) ok = ok && s->ok;
        Jacobian<K, 3> J;
        if (ok) {
          J.col(0) = (st[0]->v - st[1]->v) / (2.0 * h0);
          J.col(1) = (st[2]->v - st[3]->v) / (2.0 * h1);
          J.col(2) = (st[4]->v - st[5]->v) / (2.0 * h2);
        } else {
          J.setZero();
        }
        const MultiIndex p{i, j, k, 0};
        visit(p, ok ? c.v : V::Zero().eval(), J, ok);
      }
  }
}

// Same visiting contract, but each node's Jacobian comes from central
// differences of the closure with a small step instead of the lattice
// spacing; the lattice then only sets the quadrature.
template <int K, class Visit>
void visit_lattice(const Grid& g, const FieldFn<K, 3>& f, double step, Visit&& visit) {
  if (!(step > 0)) {
    stream_lattice<K>(g, f, std::forward<Visit>(visit));
    return;
  }
  if (g.dim() != 3) throw std::invalid_argument("visit_lattice needs a 3D grid");
  using V = VecD<K>;
  const int n0 = g.count(0), n1 = g.count(1), n2 = g.count(2);
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < n1; ++j)
      for (int k = 0; k < n2; ++k) {
        const MultiIndex p{i, j, k, 0};
        const Vec3 x = g.point_fixed<3>(p);
        auto v = f(x);
        Jacobian<K, 3> J = Jacobian<K, 3>::Zero();
        bool ok = v.has_value();
        for (int mu = 0; ok && mu < 3; ++mu) {
          Vec3 xp = x, xm = x;
          xp[mu] += step;
          xm[mu] -= step;
          auto fp = f(xp), fm = f(xm);
          ok = fp && fm;
          if (ok) J.col(mu) = (*fp - *fm) / (2.0 * step);
        }
        visit(p, ok ? *v : V::Zero().eval(), J, ok);
      }
}

// ---------------------------------------------------------------------------
// Dispatcher

struct ChargeOptions {
  ChargeMethod method = ChargeMethod::surface_flux;
  double radius = 1.0;     // contour / flux sphere radius
  int n_quad = 64;
  double half_width = 4.0; // volume lattice [-L, L]^d
  double h = 0.05;         // volume lattice spacing
  double fd_step = -1.0;   // closure derivative step (default: 1e-4 * radius)
};

namespace detail {

inline ChargeReport finish_volume(double lattice_sum, double ball_flux, double eps, const Grid& g,
                                  long excluded) {
  ChargeReport r;
  r.method = ChargeMethod::volume_density;
  r.value = lattice_sum + ball_flux;
  r.grid = grid_json(g);
  r.grid["exclusion_radius"] = eps;
  r.grid["exclusion_flux"] = ball_flux;
  r.grid["excluded_nodes"] = excluded;
  r.settle();
  return r;
}

}  // namespace detail

// Volume integral of d_i J^i over the lattice with an exclusion ball of
// radius 3h around the origin; the enclosed charge is the flux of J through
// the ball surface. Derivatives are taken on the closure, so lattice
// truncation near the ball does not accumulate.
template <int D>
ChargeReport volume_charge(const FieldFn<D, D>& n, const ChargeOptions& opt) {
  static_assert(D == 2 || D == 3, "volume_charge supports d = 2, 3");
  const Grid g = Grid::centred(D, opt.half_width, opt.h);
  const double eps = 3.0 * g.spacing(0);
  const double step = opt.fd_step > 0 ? opt.fd_step : closure_step;
  double sum = 0.0;
  long excluded = 0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const MultiIndex p = g.multi(k);
    const VecD<D> x = g.point_fixed<D>(p);
    if (x.norm() < eps) {
      ++excluded;
      continue;
    }
    sum += trapezoid_weight(g, p) * divergence_density<D>(fd_jacobian<D, D>(n, x, step));
  }
  const double flux = flux_of_current<D>(n, Ball<D>{VecD<D>::Zero(), eps}, opt.n_quad,
                                         closure_step * eps);
  return detail::finish_volume(sum, flux, eps, g, excluded);
}

// Static K = 4 field on three spatial dims: lattice integral of J^0 with
// derivatives taken on the closure.
inline ChargeReport volume_charge(const FieldFn<4, 3>& n, const ChargeOptions& opt) {
  const Grid g = Grid::centred(3, opt.half_width, opt.h);
  double sum = 0.0;
  const double step = opt.fd_step > 0 ? opt.fd_step : closure_step;
  visit_lattice<4>(g, n, step, [&](const MultiIndex& p, const Vec4& v, const Jacobian<4, 3>& J, bool ok) {
    if (!ok) throw SingularPoint("static density is undefined at a lattice node");
    sum += trapezoid_weight(g, p) * static_density_from_jacobian<4>(v, J);
  });
  ChargeReport r;
  r.method = ChargeMethod::volume_density;
  r.value = sum;
  r.grid = grid_json(g);
  r.settle();
  return r;
}

inline ChargeReport charge(const FieldFn<2, 2>& n, const ChargeOptions& opt) {
  switch (opt.method) {
    case ChargeMethod::contour:
      return winding_number(n, Circle{Vec2::Zero(), opt.radius}, opt.n_quad);
    case ChargeMethod::surface_flux:
      return flux_charge<2>(n, Circle{Vec2::Zero(), opt.radius}, opt.n_quad, opt.fd_step);
    case ChargeMethod::volume_density:
      return volume_charge<2>(n, opt);
    default:
      break;
  }
  throw std::invalid_argument("method " + to_string(opt.method) + " is not available for d = 2");
}

inline ChargeReport charge(const FieldFn<3, 3>& n, const ChargeOptions& opt) {
  switch (opt.method) {
    case ChargeMethod::surface_flux:
      return flux_charge<3>(n, Sphere{Vec3::Zero(), opt.radius}, opt.n_quad, opt.fd_step);
    case ChargeMethod::volume_density:
      return volume_charge<3>(n, opt);
    default:
      break;
  }
  throw std::invalid_argument("method " + to_string(opt.method) + " is not available for d = 3");
}

inline ChargeReport charge(const FieldFn<4, 4>& n, const ChargeOptions& opt) {
  if (opt.method != ChargeMethod::surface_flux)
    throw std::invalid_argument("method " + to_string(opt.method) +
                                " is not available for a 4-component field on four dims");
  return flux_charge<4>(n, Ball<4>{Vec4::Zero(), opt.radius}, opt.n_quad, opt.fd_step);
}

inline ChargeReport charge(const FieldFn<4, 3>& n, const ChargeOptions& opt) {
  if (opt.method != ChargeMethod::volume_density)
    throw std::invalid_argument("method " + to_string(opt.method) +
                                " is not available for a static 4-component field; use volume-density");
  return volume_charge(n, opt);
}

}  // namespace topodef

#endif
