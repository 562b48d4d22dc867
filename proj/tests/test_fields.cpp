#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "topodef/fields.hpp"

using namespace topodef;

namespace {

Eigen::VectorXd vx(std::initializer_list<double> v) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double c : v) x[i++] = c;
  return x;
}

}  // namespace

TEST(Vortex, Examples) {
  const auto zero = vortex(WindingInt(0));
  EXPECT_LT((*zero(Vec2(0.3, -2.0)) - Vec2(1, 0)).norm(), 1e-15);
  EXPECT_LT((*zero(Vec2::Zero()) - Vec2(1, 0)).norm(), 1e-15);
  const auto one = vortex(WindingInt(1));
  EXPECT_LT((*one(Vec2(1, 0)) - Vec2(1, 0)).norm(), 1e-15);
  EXPECT_LT((*one(Vec2(0, 1)) - Vec2(0, 1)).norm(), 1e-15);
  EXPECT_LT((*vortex(WindingInt(2))(Vec2(0, 1)) - Vec2(-1, 0)).norm(), 1e-15);
}

TEST(Vortex, OriginIsSingular) {
  EXPECT_FALSE(vortex(WindingInt(1))(Vec2::Zero()).has_value());
  EXPECT_FALSE(vortex(WindingInt(-3), Vec2(1, 1))(Vec2(1, 1)).has_value());
}

TEST(Vortex, PhaseAdvancesByTwoPiN) {
  for (int N = -3; N <= 3; ++N) {
    const auto f = vortex(WindingInt(N));
    double total = 0.0;
    const int m = 512;
    Vec2 prev = *f(Vec2(1, 0));
    for (int k = 1; k <= m; ++k) {
      const double phi = 2 * pi * k / m;
      const Vec2 next = *f(Vec2(std::cos(phi), std::sin(phi)));
      total += std::atan2(prev[0] * next[1] - prev[1] * next[0], prev.dot(next));
      prev = next;
    }
    EXPECT_NEAR(total, 2 * pi * N, 1e-12);
  }
}

TEST(Vortex, DynamicPhase) {
  const auto f = vortex(WindingInt(1), [](const Vec2& tx) { return tx[1] - 0.5 * tx[0]; });
  EXPECT_LT((*f(Vec2(2.0, 1.0)) - Vec2(1, 0)).norm(), 1e-15);
}

TEST(N3, Examples) {
  for (int N : {-2, 1, 3}) {
    const auto f = n3(WindingInt(N), [](const Vec3&) { return 0.0; }, [](const Vec3& x) { return x[0]; });
    EXPECT_LT((*f(Vec3(0.7, 0, 0)) - Vec3(0, 0, 1)).norm(), 1e-15);
  }
  EXPECT_LT((*hedgehog()(Vec3(0, 0, -1)) - Vec3(0, 0, -1)).norm(), 1e-15);
  EXPECT_LT((n3_value(WindingInt(2), pi / 2, pi / 4) - Vec3(0, 1, 0)).norm(), 1e-15);
  EXPECT_FALSE(hedgehog()(Vec3::Zero()).has_value());
}

TEST(N3, UnitNormEverywhere) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> Nd(0.0, 2.0);
  for (int N = -2; N <= 3; ++N) {
    const auto f = n3(WindingInt(N));
    for (int t = 0; t < 200; ++t) {
      const Vec3 x(Nd(rng), Nd(rng), Nd(rng));
      ASSERT_NEAR(f(x)->squaredNorm(), 1.0, 1e-12);
    }
  }
}

TEST(N3, HedgehogIsRadial) {
  std::mt19937_64 rng(22);
  std::normal_distribution<double> Nd(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    const Vec3 x(Nd(rng), Nd(rng), Nd(rng));
    EXPECT_LT((*n3(WindingInt(1))(x) - x.normalized()).norm(), 1e-15);
    EXPECT_LT((n3_value(WindingInt(1), polar_angle(x), azimuth(x)) - x.normalized()).norm(), 1e-14);
  }
}

TEST(Nd, ZeroAnglesGiveNorthPole) {
  const auto n = nd(4, {angles::constant(0.0), angles::constant(0.0)}, WindingInt(2), vx({0.3, 0.1, -0.2}));
  ASSERT_TRUE(n.has_value());
  EXPECT_LT(((*n) - vx({0, 0, 0, 1})).norm(), 1e-15);
}

TEST(Nd, ReducesToN3) {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> Nd(0.0, 1.0);
  for (int N = -2; N <= 2; ++N)
    for (int t = 0; t < 50; ++t) {
      const Vec3 x(Nd(rng), Nd(rng), Nd(rng));
      const auto n = nd(3, {angles::polar(3)}, WindingInt(N), Eigen::VectorXd(x));
      ASSERT_TRUE(n.has_value());
      EXPECT_LT((Vec3(*n) - *n3(WindingInt(N))(x)).norm(), 1e-14);
    }
}

TEST(Nd, FrozenUpperLevelReducesToN3) {
  std::mt19937_64 rng(24);
  std::normal_distribution<double> Nd(0.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    const Vec3 x(Nd(rng), Nd(rng), Nd(rng));
    const auto n = nd(4, {angles::polar(3), angles::constant(pi / 2)}, WindingInt(1), Eigen::VectorXd(x));
    ASSERT_TRUE(n.has_value());
    EXPECT_LT((n->head<3>() - x.normalized()).norm(), 1e-14);
    EXPECT_NEAR((*n)[3], 0.0, 1e-15);
  }
}

TEST(Nd, FourDimensionalSkyrmeForm) {
  const auto prof = profile_library("skyrme-exp");
  const Vec3 x(0.4, -0.3, 0.9);
  const auto n = nd(4, {angles::polar(3), angles::radial(prof)}, WindingInt(1), Eigen::VectorXd(x));
  ASSERT_TRUE(n.has_value());
  const double w = prof(x.norm());
  EXPECT_LT((n->head<3>() - std::sin(w) * x.normalized()).norm(), 1e-14);
  EXPECT_NEAR((*n)[3], std::cos(w), 1e-15);
  EXPECT_NEAR(n->squaredNorm(), 1.0, 1e-12);
}

TEST(Nd, RejectsBadArguments) {
  EXPECT_THROW(nd(5, {}, WindingInt(1), vx({1, 0})), std::invalid_argument);
  EXPECT_THROW(nd(4, {angles::constant(0)}, WindingInt(1), vx({1, 0, 0})), std::invalid_argument);
}

TEST(Profiles, Endpoints) {
  const ProfileParams p{1.5, 2.0, 0.5};
  EXPECT_NEAR(profile_library("skyrme-exp", p)(0.0), pi, 1e-15);
  EXPECT_NEAR(profile_library("skyrme-exp", p)(80.0), 0.0, 1e-20);
  EXPECT_NEAR(profile_library("skyrme-arctan", p)(0.0), pi, 1e-15);
  EXPECT_NEAR(profile_library("skyrme-arctan", p)(80.0), 0.0, 1e-20);
  EXPECT_NEAR(profile_library("higgs-tanh", p)(0.0), 0.0, 1e-15);
  EXPECT_NEAR(profile_library("higgs-tanh", p)(100.0), 2.0, 1e-15);
  const auto W = profile_library("gauge-bps", p);
  EXPECT_NEAR(W(0.0), 0.0, 1e-15);
  EXPECT_NEAR(1e4 * W(1e4), 1.0 / 0.5, 1e-12);
  EXPECT_THROW(profile_library("nope"), std::invalid_argument);
  EXPECT_THROW(profile_library("skyrme-exp", {-1.0, 1.0, 1.0}), std::invalid_argument);
}

TEST(Profiles, GaugeBpsTaylorBranchIsContinuous) {
  const auto W = profile_library("gauge-bps", {1.0, 1.0, 1.0});
  const double s = 1e-4;
  const double direct = 1.0 / s - 1.0 / std::sinh(s);
  EXPECT_NEAR(W(s * 0.999999), direct, 1e-10);
  EXPECT_NEAR(W(s * 1.000001), direct, 1e-8);
}

TEST(SkyrmeField, UnitQuaternionAndOrigin) {
  const auto U = skyrme_field(WindingInt(1), profile_library("skyrme-exp"));
  EXPECT_LT((*U(Vec3::Zero()) - Vec4(0, 0, 0, -1)).norm(), 1e-15);
  std::mt19937_64 rng(25);
  std::normal_distribution<double> Nd(0.0, 2.0);
  for (int t = 0; t < 100; ++t) ASSERT_NEAR(U(Vec3(Nd(rng), Nd(rng), Nd(rng)))->squaredNorm(), 1.0, 1e-12);
  const auto half = skyrme_field(WindingInt(1), constant_profile(pi / 2));
  EXPECT_FALSE(half(Vec3::Zero()).has_value());
}

TEST(Monopole, Examples) {
  const auto cfg = monopole_config(WindingInt(1), constant_profile(2.0), profile_library("gauge-bps"));
  EXPECT_LT((*cfg.higgs(Vec3(0, 0, 3)) - Vec3(0, 0, 2)).norm(), 1e-15);
  const auto vac = monopole_config(WindingInt(0), constant_profile(1.5), constant_profile(0.0));
  EXPECT_LT((*vac.higgs(Vec3(0.3, 2, -1)) - Vec3(1.5, 0, 0)).norm(), 1e-15);
  EXPECT_LT((*vac.higgs(Vec3(-4, 0.1, 7)) - Vec3(1.5, 0, 0)).norm(), 1e-15);
  EXPECT_LT(vac.gauge(Vec3(1, 2, 3)).norm(), 1e-15);
}

TEST(Monopole, GaugeAnsatzStructure) {
  const auto cfg = monopole_config(WindingInt(1), profile_library("higgs-tanh"), constant_profile(0.7));
  const Vec3 x(0.5, -1.0, 2.0);
  const Vec3 n = x.normalized();
  const Mat3 A = cfg.gauge(x);
  for (int a = 0; a < 3; ++a)
    for (int i = 0; i < 3; ++i) {
      double e = 0.0;
      for (int b = 0; b < 3; ++b) e += levi_civita(a, i, b) * n[b];
      EXPECT_NEAR(A(a, i), 0.7 * e, 1e-15);
    }
  EXPECT_LT((A.transpose() * n).norm(), 1e-15);  // n . A_i = 0
  EXPECT_FALSE(cfg.higgs(Vec3::Zero()).has_value());
}

TEST(Sampling, SingularNodeThrowsAndCsvMarksNan) {
  const Grid g = Grid::uniform(2, -1.0, 1.0, 5);
  EXPECT_THROW((sample<2, 2>(g, vortex(WindingInt(1)))), SingularPoint);
  std::ostringstream os;
  write_csv<2, 2>(os, g, vortex(WindingInt(1)));
  const std::string s = os.str();
  EXPECT_EQ(s.substr(0, s.find('\n')), "x,y,n1,n2");
  EXPECT_NE(s.find("0,0,nan,nan"), std::string::npos);
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 26);
}
