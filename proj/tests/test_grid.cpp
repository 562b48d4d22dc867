#include <gtest/gtest.h>

#include <random>

#include "topodef/grid.hpp"

using namespace topodef;

TEST(LeviCivita, CyclicAndAnticyclic) {
  EXPECT_EQ(levi_civita(0, 1, 2), 1);
  EXPECT_EQ(levi_civita(1, 2, 0), 1);
  EXPECT_EQ(levi_civita(2, 0, 1), 1);
  EXPECT_EQ(levi_civita(0, 2, 1), -1);
  EXPECT_EQ(levi_civita(2, 1, 0), -1);
  EXPECT_EQ(levi_civita(0, 0, 1), 0);
}

TEST(LeviCivita, PermutationSign) {
  const std::array<int, 4> even{1, 0, 3, 2};
  const std::array<int, 4> odd{1, 0, 2, 3};
  const std::array<int, 3> repeated{0, 0, 1};
  EXPECT_EQ(permutation_sign(even), 1);
  EXPECT_EQ(permutation_sign(odd), -1);
  EXPECT_EQ(permutation_sign(repeated), 0);
}

TEST(Grid, RejectsBadAxes) {
  EXPECT_THROW(Grid::uniform(3, 0.0, 1.0, 3), std::invalid_argument);
  EXPECT_THROW(Grid::uniform(2, 1.0, 0.0, 10), std::invalid_argument);
  EXPECT_THROW(Grid::uniform(0, 0.0, 1.0, 10), std::invalid_argument);
  EXPECT_THROW(Grid::uniform(5, 0.0, 1.0, 10), std::invalid_argument);
}

TEST(Grid, CentredGridContainsOrigin) {
  const Grid g = Grid::centred(3, 8.0, 0.05);
  EXPECT_EQ(g.count(0), 321);
  EXPECT_NEAR(g.spacing(0), 0.05, 1e-15);
  EXPECT_DOUBLE_EQ(g.coordinate(0, 160), 0.0);
}

TEST(Grid, LinearMultiRoundTrip) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> dim(1, 4), n(4, 9);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<AxisSpec> axes;
    const int d = dim(rng);
    for (int a = 0; a < d; ++a) axes.push_back({-1.0, 2.0, n(rng)});
    const Grid g(axes);
    for (std::size_t k = 0; k < g.size(); ++k) ASSERT_EQ(g.linear(g.multi(k)), k);
  }
}

TEST(SampledField, RejectsNonFiniteAndSizeMismatch) {
  const Grid g = Grid::uniform(1, 0.0, 1.0, 4);
  EXPECT_THROW(ScalarField(g, {1, 2, 3}), std::invalid_argument);
  EXPECT_THROW(ScalarField(g, {1, 2, 3, std::nan("")}), std::invalid_argument);
}

TEST(Partial, ExactOnQuadratics) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  const Grid g = Grid::uniform(2, -1.0, 1.0, 9);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = U(rng), b = U(rng), c = U(rng), e = U(rng);
    auto f = sample_field<double>(g, [&](const Eigen::VectorXd& x) {
      return a * x[0] * x[0] + b * x[0] * x[1] + c * x[1] + e;
    });
    for (std::size_t k = 0; k < g.size(); ++k) {
      const MultiIndex p = g.multi(k);
      const Eigen::VectorXd x = g.point(p);
      EXPECT_NEAR(partial(f, 0, p, Stencil::automatic), 2 * a * x[0] + b * x[1], 1e-12);
      EXPECT_NEAR(partial(f, 1, p, Stencil::automatic), b * x[0] + c, 1e-12);
    }
  }
}

TEST(Partial, StencilBoundsAreChecked) {
  const Grid g = Grid::uniform(1, 0.0, 1.0, 5);
  const ScalarField f(g);
  EXPECT_THROW(partial(f, 0, {0, 0, 0, 0}, Stencil::central), std::out_of_range);
  EXPECT_THROW(partial(f, 0, {4, 0, 0, 0}, Stencil::forward), std::out_of_range);
  EXPECT_THROW(partial(f, 0, {1, 0, 0, 0}, Stencil::backward), std::out_of_range);
  EXPECT_THROW(partial(f, 1, {1, 0, 0, 0}), std::out_of_range);
}

TEST(Partial, SecondOrderConvergence) {
  std::vector<double> err;
  for (int n : {21, 41, 81}) {
    const Grid g = Grid::uniform(1, 0.0, 2.0, n);
    auto f = sample_field<double>(g, [](const Eigen::VectorXd& x) { return std::sin(2 * x[0]); });
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      const MultiIndex p{i, 0, 0, 0};
      worst = std::max(worst, std::abs(partial(f, 0, p, Stencil::automatic) -
                                       2 * std::cos(2 * g.coordinate(0, i))));
    }
    err.push_back(worst);
  }
  EXPECT_NEAR(err[0] / err[1], 4.0, 0.4);
  EXPECT_NEAR(err[1] / err[2], 4.0, 0.4);
}

TEST(Curl, ExactOnLinearMatrixField) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::array<Mat3, 3> C;
  for (auto& m : C) m = Mat3::NullaryExpr([&](Eigen::Index, Eigen::Index) { return U(rng); });
  const Grid g = Grid::uniform(3, -1.0, 1.0, 5);
  auto M = sample_field<Mat3>(g, [&](const Eigen::VectorXd& x) {
    return Mat3(C[0] * x[0] + C[1] * x[1] + C[2] * x[2]);
  });
  Mat3 expected = Mat3::Zero();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int m = 0; m < 3; ++m)
        for (int n = 0; n < 3; ++n) expected(i, j) += levi_civita(j, m, n) * C[m](i, n);
  const MatrixField curl = curl_matrix(M);
  for (std::size_t k = 0; k < g.size(); ++k) ASSERT_LT((curl[k] - expected).norm(), 1e-12);
}

TEST(Curl, GradientFieldIsCurlFree) {
  const Grid g = Grid::uniform(3, -1.0, 1.0, 9);
  // M_in = d_n f_i for a quadratic f: central differences are exact.
  auto M = sample_field<Mat3>(g, [](const Eigen::VectorXd& x) {
    Mat3 m;
    m << 2 * x[0], x[2], x[1], 0, 2 * x[1], 1, x[1], x[0], 0;
    return m;
  });
  const MatrixField curl = curl_matrix(M);
  for (std::size_t k = 0; k < g.size(); ++k) ASSERT_LT(curl[k].norm(), 1e-12);
}

TEST(Cof, MatchesAdjugateTranspose) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Mat3 M = Mat3::NullaryExpr([&](Eigen::Index, Eigen::Index) { return U(rng); });
    if (std::abs(M.determinant()) < 1e-3) continue;
    const Mat3 oracle = M.determinant() * M.inverse().transpose();
    ASSERT_LT((cof_matrix(M) - oracle).norm(), 1e-10 * (1 + oracle.norm()));
  }
}

TEST(Quadrature, SphereAreas) {
  EXPECT_NEAR(sphere_area(2), 2 * pi, 1e-14);
  EXPECT_NEAR(sphere_area(3), 4 * pi, 1e-14);
  EXPECT_NEAR(sphere_area(4), 2 * pi * pi, 1e-13);
}

TEST(Quadrature, GaussLegendreExactness) {
  for (int n : {1, 2, 5, 16, 64}) {
    const auto rule = gauss_legendre(n);
    for (int deg = 0; deg <= 2 * n - 1; ++deg) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += rule.weights[i] * std::pow(rule.nodes[i], deg);
      const double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
      ASSERT_NEAR(s, exact, 1e-12) << "n=" << n << " deg=" << deg;
    }
  }
}

TEST(Quadrature, SphereFluxOfCoulombFieldIsArea) {
  EXPECT_NEAR(sphere_flux<2>([](const Vec2& x) { return Vec2(x / x.squaredNorm()); }, {Vec2::Zero(), 1.7}, 16),
              2 * pi, 1e-12);
  EXPECT_NEAR(sphere_flux<3>([](const Vec3& x) { return Vec3(x / std::pow(x.norm(), 3)); }, {Vec3::Zero(), 0.3}, 32),
              4 * pi, 1e-12);
  EXPECT_NEAR(sphere_flux<4>([](const Vec4& x) { return Vec4(x / std::pow(x.norm(), 4)); }, {Vec4::Zero(), 2.0}, 16),
              2 * pi * pi, 1e-12);
}

TEST(Quadrature, SphereFluxDivergenceTheorem) {
  // div x = 3, volume 4/3 pi R^3.
  const double R = 1.3;
  const Sphere s{Vec3(0.2, -0.1, 0.4), R};
  EXPECT_NEAR(surface_integral([](const Vec3& x) { return x; }, s, 16), 4 * pi * R * R * R, 1e-11);
  EXPECT_NEAR(surface_integral([](const Vec3&) { return Vec3(1, 2, 3); }, s, 16), 0.0, 1e-12);
  EXPECT_THROW(surface_integral([](const Vec3& x) { return x; }, s, 8), std::invalid_argument);
}

TEST(Quadrature, SampledSurfaceIntegralBoundsChecked) {
  const Grid g = Grid::uniform(3, -1.0, 1.0, 11);
  auto v = sample_field<Vec3>(g, [](const Eigen::VectorXd& x) { return Vec3(x); });
  EXPECT_NEAR(surface_integral(v, {Vec3::Zero(), 0.8}, 32), 4 * pi * 0.512, 1e-10);
  EXPECT_THROW(surface_integral(v, {Vec3::Zero(), 1.2}, 32), std::out_of_range);
}

TEST(Interpolate, ExactOnMultilinear) {
  const Grid g = Grid::uniform(3, -1.0, 1.0, 6);
  auto f = sample_field<double>(g, [](const Eigen::VectorXd& x) { return 1 + x[0] - 2 * x[1] * x[2] + x[0] * x[1] * x[2]; });
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd x(3);
    x << U(rng), U(rng), U(rng);
    ASSERT_NEAR(interpolate(f, x), 1 + x[0] - 2 * x[1] * x[2] + x[0] * x[1] * x[2], 1e-12);
  }
  Eigen::VectorXd out(3);
  out << 1.5, 0, 0;
  EXPECT_THROW(interpolate(f, out), std::out_of_range);
}

TEST(Quadrature, ContourOfAngleIncrements) {
  auto dtheta = [](const Vec2& a, const Vec2& b) { return std::atan2(a[0] * b[1] - a[1] * b[0], a.dot(b)); };
  EXPECT_NEAR(contour_integral(dtheta, {Vec2::Zero(), 1.0}, 32), 2 * pi, 1e-12);
  EXPECT_NEAR(contour_integral(dtheta, {Vec2(3.0, 0.0), 1.0}, 32), 0.0, 1e-12);
}

TEST(Quadrature, TrapezoidExactOnLinear) {
  const Grid g({AxisSpec{0.0, 1.0, 5}, AxisSpec{0.0, 2.0, 7}});
  auto f = sample_field<double>(g, [](const Eigen::VectorXd& x) { return 1 + x[0] + 2 * x[1]; });
  EXPECT_NEAR(volume_integral(f), 7.0, 1e-12);
}
