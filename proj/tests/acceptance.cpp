// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "topodef/cli.hpp"
#include "topodef/topodef.hpp"

using namespace topodef;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

Vec4 random_unit_quaternion(std::mt19937_64& rng) {
  std::normal_distribution<double> N(0.0, 1.0);
  return Vec4(N(rng), N(rng), N(rng), N(rng)).normalized();
}

GaugeConfig bps(int N, double g) {
  const ProfileParams p{1.0, 1.0, g};
  return GaugeConfig::from(monopole_config(WindingInt(N), profile_library("higgs-tanh", p), profile_library("gauge-bps", p)), g, 1.0);
}

Outcome charge_quantization() {
  double worst = 0.0, slowest = 0.0;
  for (int N = -2; N <= 3; ++N) {
    const auto t0 = std::chrono::steady_clock::now();
    const ChargeReport r = charge(n3(WindingInt(N)), ChargeOptions{});
    slowest = std::max(slowest, seconds_since(t0));
    worst = std::max(worst, std::abs(r.value - N) + (r.nearest_integer == N ? 0.0 : 1.0));
  }
  return {worst < 1e-6 && slowest < 1.0, fmt("max |Q - N| = %.3g, slowest case %.3g s", worst, slowest)};
}

Outcome winding() {
  double worst = 0.0;
  for (int N = -3; N <= 3; ++N) {
    const ChargeReport r = winding_number(vortex(WindingInt(N)), Circle{Vec2::Zero(), 1.0});
    worst = std::max(worst, std::abs(r.value - N) + (r.nearest_integer == N ? 0.0 : 1.0));
  }
  const double outside = std::abs(winding_number(vortex(WindingInt(2)), Circle{Vec2(3.0, 0.0), 1.0}).value);
  return {worst < 1e-9 && outside < 1e-9, fmt("max |w - N| = %.3g, off-core contour %.3g", worst, outside)};
}

Outcome monopole_charge_check() {
  double worst = 0.0, drift = 0.0;
  for (double g : {1.0, 2.0})
    for (int N : {1, 2}) {
      const GaugeConfig cfg = bps(N, g);
      const double a = monopole_charge(cfg, Sphere{Vec3::Zero(), 10.0}).value;
      const double b = monopole_charge(cfg, Sphere{Vec3::Zero(), 20.0}).value;
      worst = std::max(worst, std::abs(a - N / g));
      drift = std::max(drift, std::abs(a - b));
    }
  return {worst < 1e-3 && drift < 1e-6, fmt("max |m - N/g| = %.3g, |m(R) - m(2R)| = %.3g", worst, drift)};
}

Outcome magnetic_current_check() {
  double field = 0.0, divergence = 0.0;
  for (double g : {1.0, 2.0}) {
    GaugeConfig cfg = bps(1, g);
    cfg.fd_step = 0.05;
    std::mt19937_64 rng(4);
    std::normal_distribution<double> Nd(0.0, 1.0);
    std::uniform_real_distribution<double> R(3.2, 9.2);
    for (int t = 0; t < 50; ++t) {
      const Vec3 x = Vec3(Nd(rng), Nd(rng), Nd(rng)).normalized() * R(rng);
      const MagneticCurrent m = magnetic_current(cfg, x);
      field = std::max(field, (m.dual_field - m.flux_current).norm() / m.flux_current.norm());
      divergence = std::max(divergence, std::abs(m.div_dual - m.prefactor * m.j0) / m.div_dual_gross);
    }
  }
  return {field < 1e-2 && divergence < 1e-2,
          fmt("h = 0.05, r in [3.2, 9.2]: max field mismatch %.3g, max divergence mismatch %.3g (relative)", field, divergence)};
}

BaryonResult skyrme_baryon(const std::string& profile, double& seconds) {
  BaryonOptions opt;
  opt.half_width = 8.0;
  opt.h = 0.05;
  opt.profile = profile_library(profile);
  const auto t0 = std::chrono::steady_clock::now();
  BaryonResult r = baryon_number(skyrme_field(WindingInt(1), *opt.profile), opt);
  seconds = seconds_since(t0);
  return r;
}

BaryonResult exp_result;

Outcome baryon_triality() {
  double secs = 0.0;
  exp_result = skyrme_baryon("skyrme-exp", secs);
  const double b = exp_result.det_b.value, g = exp_result.det_gamma.value, k = exp_result.kkk.value;
  const double off = std::max({std::abs(b - 1), std::abs(g - 1), std::abs(k - 1)});
  const double mutual = std::max({std::abs(b - g), std::abs(b - k), std::abs(g - k)}) / std::abs(b);
  return {off < 1e-3 && mutual < 1e-6 && secs < 60.0,
          fmt("det-B %.10f, max |N - 1| = %.3g, mutual %.3g, %.1f s", b, off, mutual, secs)};
}

Outcome profile_independence() {
  double secs = 0.0;
  const BaryonResult arc = skyrme_baryon("skyrme-arctan", secs);
  const double d = std::abs(arc.det_b.value - exp_result.det_b.value);
  return {d < 1e-3, fmt("exp %.8f, arctan %.8f, difference %.3g", exp_result.det_b.value, arc.det_b.value, d)};
}

Outcome compatibility() {
  const std::vector<double> levels{0.1, 0.05, 0.025};
  const auto smooth = cli::compat_study("smooth", 1.0, levels, 1.0, 1);
  const double r1 = smooth[0].norms.max / smooth[1].norms.max, r2 = smooth[1].norms.max / smooth[2].norms.max;
  const double random = cli::compat_study("random", 1.0, {0.05}, 1.0, 1)[0].norms.max;
  return {std::abs(r1 - 4) <= 0.8 && std::abs(r2 - 4) <= 0.8 && random > 0.1,
          fmt("ratios %.3f, %.3f; random-field residual %.3g", r1, r2, random)};
}

Outcome b_gamma() {
  const std::vector<double> hs{0.2, 0.1, 0.05};
  const double C = 8.0;
  std::vector<double> nye, forms;
  for (double h : hs) {
    const SU2Field U = sample<4, 3>(Grid::centred(3, 1.5, h), skyrme_field(WindingInt(1), profile_library("skyrme-arctan")));
    const BFields B = skyrme_b(U);
    const MatrixField G = nye_tensor(contortion_from_rotation(map_field(U, [](const Vec4& q) { return skyrme_matrix(q); })));
    double e1 = 0.0, e2 = 0.0;
    for (std::size_t k = 0; k < G.size(); ++k) {
      e1 = std::max(e1, (2.0 * B.trace_form[k] - G[k]).cwiseAbs().maxCoeff());
      e2 = std::max(e2, (B.trace_form[k] - B.rotation_form[k]).cwiseAbs().maxCoeff());
    }
    nye.push_back(e1);
    forms.push_back(e2);
  }
  // least-squares slope of log err against log h
  auto order = [&](const std::vector<double>& e) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < hs.size(); ++i) {
      const double x = std::log(hs[i]), y = std::log(e[i]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double n = static_cast<double>(hs.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
  };
  bool bounded = true;
  for (std::size_t i = 0; i < hs.size(); ++i) bounded = bounded && nye[i] < C * hs[i] * hs[i] && forms[i] < C * hs[i] * hs[i];
  const double p1 = order(nye), p2 = order(forms);
  return {bounded && p1 >= 1.7 && p2 >= 1.7,
          fmt("|2B - Gamma| order %.3f, trace vs rotation form order %.3f, finest errors %.3g / %.3g", p1, p2, nye.back(), forms.back())};
}

Outcome double_cover() {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> W(-2 * pi, 2 * pi);
  double antipode = 0.0, half_angle = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const SU2Element u(random_unit_quaternion(rng));
    antipode = std::max(antipode, (skyrme_correspondence(u).matrix() - skyrme_correspondence(-u).matrix()).cwiseAbs().maxCoeff());
    const Vec3 n = random_unit_quaternion(rng).head<3>().normalized();
    const double w = W(rng);
    half_angle = std::max(half_angle, (skyrme_correspondence(su2_from_axis(AxisAngle(n, w))).matrix() -
                                       rodrigues(AxisAngle(n, 2 * w)).matrix()).cwiseAbs().maxCoeff());
  }
  const double minus = (su2_from_axis(AxisAngle(Vec3::UnitZ(), pi)).quaternion() - Vec4(0, 0, 0, -1)).norm();
  const double full = (rodrigues(AxisAngle(Vec3::UnitZ(), 2 * pi)).matrix() - Mat3::Identity()).cwiseAbs().maxCoeff();
  return {antipode < 1e-10 && half_angle < 1e-10 && minus < 1e-15 && full < 1e-15,
          fmt("R(U) vs R(-U) %.3g, R(su2(w)) vs rodrigues(2w) %.3g, su2(pi) + I %.3g, rodrigues(2pi) - I %.3g", antipode, half_angle, minus, full)};
}

Outcome kink_check() {
  const DsgParams p = DsgParams::sine_gordon(1.0, 0.5);
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> X(-20, 20), T(0, 5);
  std::vector<Sample> samples;
  for (int i = 0; i < 1000; ++i) samples.push_back({X(rng), T(rng)});
  const double residual = dsg_residual(p, [&](double x, double t) { return kink_jet(p, x, t); }, samples);
  const WaveState s0 = kink_state(p, Grid::uniform(1, -20.0, 20.0, 4001));
  const WaveState s = evolve(s0, p, 0.005, 1000);
  double linf = 0.0;
  for (std::size_t i = 0; i < s.theta.size(); ++i) linf = std::max(linf, std::abs(s.theta[i] - kink(p, s.x(i), s.t)));
  const double dq = std::abs(sector_charge(s).value - sector_charge(s0).value);
  const double e0 = energy(s0, p), drift = std::abs(energy(s, p) - e0) / e0;
  return {residual < 1e-10 && linf < 1e-3 && dq == 0.0 && drift < 1e-3,
          fmt("residual %.3g, L-inf at t = 5 %.3g, charge change %.3g, energy drift %.3g", residual, linf, dq, drift)};
}

Outcome boundary_values() {
  const double origin = (point_to_su2(Vec3::Zero()).matrix() + Mat2c::Identity()).cwiseAbs().maxCoeff();
  double far = 0.0;
  for (const Vec3& d : {Vec3(1, 0, 0), Vec3(0, 0, -1), Vec3(Vec3(1, 2, 2) / 3.0)})
    far = std::max(far, (point_to_su2(1e6 * d).matrix() - Mat2c::Identity()).norm());
  return {origin == 0.0 && far < 1e-5, fmt("|U(0) + I| = %.3g, max |U(r) - I| at |r| = 1e6: %.3g", origin, far)};
}

Outcome homotopy_table() {
  struct Row {
    Space space;
    int n;
    GroupLabel group;
  };
  const Row rows[] = {
      {Space::SO3(), 1, GroupLabel::Z2},       {Space::S(1), 1, GroupLabel::Z},        {Space::S(2), 2, GroupLabel::Z},
      {Space::S(3), 3, GroupLabel::Z},         {Space::RP2(), 1, GroupLabel::Z2},      {Space::RP2(), 2, GroupLabel::Z},
      {Space::RP3(), 3, GroupLabel::Z},        {Space::RP3(), 1, GroupLabel::Z2},      {Space::CP1(), 2, GroupLabel::Z},
      {Space::SU2modU1(), 2, GroupLabel::Z},   {Space::SU2modSO3(), 2, GroupLabel::Z2}, {Space::S(2), 1, GroupLabel::trivial},
      {Space::S(3), 1, GroupLabel::trivial},
  };
  int bad = 0, total = 0;
  for (const Row& r : rows) {
    ++total;
    if (classify(r.space, r.n).group != r.group) ++bad;
  }
  for (int m = 1; m <= 4; ++m)
    for (int d = 0; d < m; ++d) {
      ++total;
      if (probe_dimension(m, d) != m - d - 1) ++bad;
    }
  return {bad == 0, fmt("%.0f of %.0f table entries and probe dimensions reproduced", total - bad, total)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"charge quantization", charge_quantization},
      {"winding number", winding},
      {"monopole charge", monopole_charge_check},
      {"magnetic current", magnetic_current_check},
      {"baryon-number triality", baryon_triality},
      {"profile independence", profile_independence},
      {"compatibility identity", compatibility},
      {"B-Gamma relation", b_gamma},
      {"double cover", double_cover},
      {"kink verification", kink_check},
      {"point_to_su2 boundary values", boundary_values},
      {"homotopy table", homotopy_table},
  };
  int failures = 0, index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %d: %s: %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
