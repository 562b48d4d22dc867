#ifndef TOPODEF_CLI_HPP
#define TOPODEF_CLI_HPP

// Command-line driver: charge, compat, evolve, classify, dump-field.
// run() takes the arguments after the program name and writes to the given
// streams so the whole interface can be exercised in-process.
//
// Exit codes: 0 success, 2 result outside tolerance (non-quantized charge,
// failed convergence, charge drift), 1 runtime error, 64 usage error.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "topodef/topodef.hpp"

namespace topodef::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_error = 1;
inline constexpr int exit_out_of_tolerance = 2;
inline constexpr int exit_usage = 64;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

using Config = std::map<std::string, std::string>;

// ---------------------------------------------------------------------------
// Parsing helpers

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// key = value per line, '#' starts a comment.
inline Config parse_config_text(std::istream& in) {
  Config c;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw UsageError("config line " + std::to_string(lineno) + ": empty key");
    c[key] = trim(line.substr(eq + 1));
  }
  return c;
}

inline double to_double(const Config& c, const std::string& key) {
  const auto it = c.find(key);
  if (it == c.end()) throw UsageError("missing value for '" + key + "'");
  try {
    std::size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (pos != it->second.size() || !std::isfinite(v)) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw UsageError("'" + key + "' expects a number, got '" + it->second + "'");
  }
}

inline long to_long(const Config& c, const std::string& key) {
  const auto it = c.find(key);
  if (it == c.end()) throw UsageError("missing value for '" + key + "'");
  try {
    std::size_t pos = 0;
    const long v = std::stol(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw UsageError("'" + key + "' expects an integer, got '" + it->second + "'");
  }
}

// "lo,hi,n" for every axis, or "lo,hi,n;lo,hi,n;..." per axis.
inline Grid parse_grid(const std::string& spec, int dim) {
  std::vector<AxisSpec> axes;
  std::stringstream outer(spec);
  std::string part;
  while (std::getline(outer, part, ';')) {
    std::stringstream inner(part);
    std::string tok;
    std::vector<std::string> f;
    while (std::getline(inner, tok, ',')) f.push_back(trim(tok));
    if (f.size() != 3) throw UsageError("grid axis '" + part + "' must be lo,hi,n");
    try {
      axes.push_back({std::stod(f[0]), std::stod(f[1]), std::stoi(f[2])});
    } catch (const std::exception&) {
      throw UsageError("grid axis '" + part + "' is not numeric");
    }
  }
  if (axes.size() == 1) axes.assign(static_cast<std::size_t>(dim), axes[0]);
  if (static_cast<int>(axes.size()) != dim)
    throw UsageError("grid spec has " + std::to_string(axes.size()) + " axes, expected " +
                     std::to_string(dim));
  try {
    return Grid(axes);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

inline std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      out.push_back(std::stod(trim(tok)));
    } catch (const std::exception&) {
      throw UsageError("list entry '" + tok + "' is not numeric");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Output

struct OutputSpec {
  std::string format = "json";
  std::string file;
  bool quiet = false;
};

class Sink {
 public:
  Sink(const OutputSpec& spec, std::ostream& out) : out_(&out) {
    if (!spec.file.empty()) {
      file_.open(spec.file);
      if (!file_) throw std::runtime_error("cannot open output file '" + spec.file + "'");
      out_ = &file_;
    }
  }
  std::ostream& stream() { return *out_; }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

inline json config_echo(const Config& c) {
  json j = json::object();
  for (const auto& [k, v] : c) j[k] = v;
  return j;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string r = "\"";
  for (char ch : s) r += (ch == '"') ? std::string("\"\"") : std::string(1, ch);
  return r + "\"";
}

inline std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
    return buf;
  }
  if (v.is_null()) return "";
  if (v.is_structured()) return dump_json(v, 0);
  return v.dump();
}

// One header row of sorted keys and one value row; nested values are
// written as compact JSON.
inline void write_flat_csv(std::ostream& os, const json& obj) {
  bool first = true;
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    os << (first ? "" : ",") << csv_escape(it.key());
    first = false;
  }
  os << '\n';
  first = true;
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    os << (first ? "" : ",") << csv_escape(scalar_text(it.value()));
    first = false;
  }
  os << '\n';
}

inline void emit(const json& obj, const OutputSpec& spec, std::ostream& out) {
  Sink sink(spec, out);
  if (spec.format == "csv")
    write_flat_csv(sink.stream(), obj);
  else
    sink.stream() << dump_json(obj) << '\n';
}

// ---------------------------------------------------------------------------
// Config resolution

inline const std::vector<std::string>& charge_presets() {
  static const std::vector<std::string> p{"vortex", "hedgehog", "n3", "skyrme", "monopole", "vacuum"};
  return p;
}

// Starts from `defaults`, then the --config file (or preset name), then
// explicit flags.
inline Config resolve(const std::string& config_arg, const std::vector<std::string>& presets,
                      const std::string& preset_key, const Config& flags,
                      const std::function<Config(const std::string&)>& defaults) {
  Config file_values;
  std::string preset;
  if (!config_arg.empty()) {
    if (std::find(presets.begin(), presets.end(), config_arg) != presets.end()) {
      preset = config_arg;
    } else {
      std::ifstream in(config_arg);
      if (!in)
        throw UsageError("--config '" + config_arg + "' is neither a preset nor a readable file");
      file_values = parse_config_text(in);
      const auto it = file_values.find(preset_key);
      if (it == file_values.end())
        throw UsageError("config file '" + config_arg + "' does not set '" + preset_key + "'");
      preset = it->second;
    }
  }
  if (auto it = flags.find(preset_key); it != flags.end()) preset = it->second;
  if (preset.empty()) preset = presets.front();
  if (std::find(presets.begin(), presets.end(), preset) == presets.end())
    throw UsageError("unknown " + preset_key + " '" + preset + "'");
  Config c = defaults(preset);
  for (const auto& [k, v] : file_values) c[k] = v;
  for (const auto& [k, v] : flags) c[k] = v;
  c[preset_key] = preset;
  return c;
}

// ---------------------------------------------------------------------------
// charge

inline Config charge_defaults(const std::string& preset) {
  Config c{{"N", "1"}, {"n_quad", "64"}, {"tolerance", "1e-3"}, {"scale", "1"}};
  if (preset == "vortex") {
    c["method"] = "contour";
    c["radius"] = "1";
    c["grid"] = "-2,2,81";
  } else if (preset == "hedgehog" || preset == "n3") {
    c["method"] = "surface-flux";
    c["radius"] = "1";
    c["grid"] = "-2,2,41";
  } else if (preset == "skyrme") {
    c["method"] = "volume-density";
    c["formula"] = "det-B";
    c["profile"] = "skyrme-exp";
    c["grid"] = "-8,8,161";
  } else {  // monopole, vacuum
    c["method"] = "surface-flux";
    c["radius"] = "10";
    c["coupling"] = "1";
    c["vev"] = "1";
    if (preset == "vacuum") c["N"] = "0";
  }
  return c;
}

inline ChargeOptions volume_options(const Config& c, int dim) {
  ChargeOptions opt;
  opt.method = ChargeMethod::volume_density;
  const Grid g = parse_grid(c.at("grid"), dim);
  for (int a = 0; a < dim; ++a)
    if (std::abs(g.axis(a).lo + g.axis(a).hi) > 1e-12 || g.axis(a).lo != g.axis(0).lo ||
        g.axis(a).n != g.axis(0).n)
      throw UsageError("volume-density needs a cube grid centred on the origin");
  opt.half_width = g.axis(0).hi;
  opt.h = g.spacing(0);
  opt.n_quad = static_cast<int>(to_long(c, "n_quad"));
  return opt;
}

inline ChargeReport run_charge(const Config& c) {
  const std::string preset = c.at("constructor");
  const WindingInt N(static_cast<int>(to_long(c, "N")));
  ChargeMethod method;
  try {
    method = parse_method(c.at("method"));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const int n_quad = static_cast<int>(to_long(c, "n_quad"));
  if (n_quad < 16) throw UsageError("n_quad must be >= 16");
  const double a = to_double(c, "scale");

  if (preset == "vortex") {
    ChargeOptions opt = method == ChargeMethod::volume_density ? volume_options(c, 2) : ChargeOptions{};
    opt.method = method;
    opt.radius = to_double(c, "radius");
    opt.n_quad = n_quad;
    if (method == ChargeMethod::asymptotic_phase) throw UsageError("vortex supports contour, surface-flux, volume-density");
    return charge(vortex(N), opt);
  }
  if (preset == "hedgehog" || preset == "n3") {
    const WindingInt M = preset == "hedgehog" ? WindingInt(1) : N;
    if (method != ChargeMethod::surface_flux && method != ChargeMethod::volume_density)
      throw UsageError(preset + " supports surface-flux and volume-density");
    ChargeOptions opt = method == ChargeMethod::volume_density ? volume_options(c, 3) : ChargeOptions{};
    opt.method = method;
    opt.radius = to_double(c, "radius");
    opt.n_quad = n_quad;
    return charge(n3(M), opt);
  }
  if (preset == "skyrme") {
    if (method != ChargeMethod::volume_density) throw UsageError("skyrme supports volume-density only");
    BaryonFormula f;
    try {
      f = parse_formula(c.at("formula"));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    RadialProfile prof;
    try {
      prof = profile_library(c.at("profile"), ProfileParams{a, 1.0, 1.0});
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    const ChargeOptions v = volume_options(c, 3);
    BaryonOptions opt;
    opt.half_width = v.half_width;
    opt.h = v.h;
    opt.profile = prof;
    ChargeReport r = baryon_number(skyrme_field(N, prof), f, opt);
    r.grid["profile"] = prof.name;
    return r;
  }
  // monopole / vacuum
  if (method != ChargeMethod::surface_flux) throw UsageError(preset + " supports surface-flux only");
  const double g = to_double(c, "coupling");
  if (!(g > 0)) throw UsageError("coupling must be positive");
  const double F = to_double(c, "vev");
  auto fields = monopole_config(N, profile_library("higgs-tanh", {a, F, g}),
                                profile_library("gauge-bps", {a, F, g}));
  GaugeConfig cfg = GaugeConfig::from(fields, g, F);
  return monopole_charge(cfg, Sphere{Vec3::Zero(), to_double(c, "radius")}, n_quad);
}

// ---------------------------------------------------------------------------
// compat

inline const std::vector<std::string>& compat_presets() {
  static const std::vector<std::string> p{"twist", "constant", "smooth", "random"};
  return p;
}

inline Config compat_defaults(const std::string&) {
  return {{"levels", "0.1,0.05,0.025"}, {"half_width", "1"}, {"alpha", "1"}, {"seed", "1"},
          {"min_order", "1.7"}};
}

// Rotation fields used by the refinement study. "twist" composes two
// rotations whose angles vary along different axes; "smooth" is the
// exponential of a periodic rotation-vector field.
inline std::function<Mat3(const Vec3&)> compat_rotation(const std::string& name, double alpha) {
  if (name == "twist")
    return [alpha](const Vec3& x) {
      const double about_z = alpha * (0.8 * x[2] + 0.3 * x[0] * x[0]);
      const double about_x = alpha * (0.6 * x[0] + 0.4 * x[1]);
      return Mat3(rodrigues(AxisAngle(Vec3::UnitZ(), about_z)).matrix() *
                  rodrigues(AxisAngle(Vec3::UnitX(), about_x)).matrix());
    };
  if (name == "constant") {
    const Mat3 Q = rodrigues(AxisAngle(Vec3(1, 2, 2) / 3.0, 0.8)).matrix();
    return [Q](const Vec3&) { return Q; };
  }
  if (name == "smooth")
    return [alpha](const Vec3& x) {
      const Vec3 w = 0.8 * alpha * Vec3(std::sin(x[1]), std::sin(x[2]), std::sin(x[0]));
      const double angle = w.norm();
      if (angle < 1e-12) return Mat3(Mat3::Identity());
      return rodrigues(AxisAngle(w / angle, angle)).matrix();
    };
  throw UsageError("unknown rotation field '" + name + "'");
}

// Smooth matrix field with random Fourier coefficients; not the Nye tensor
// of any rotation field.
inline std::function<Mat3(const Vec3&)> random_matrix_field(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  struct Mode {
    Mat3 amp;
    Vec3 k;
    double phase;
  };
  std::vector<Mode> modes(4);
  for (auto& m : modes) {
    for (int i = 0; i < 9; ++i) m.amp.data()[i] = U(rng);
    m.k = Vec3(U(rng), U(rng), U(rng)) * 2.0;
    m.phase = pi * U(rng);
  }
  return [modes](const Vec3& x) {
    Mat3 M = Mat3::Zero();
    for (const auto& m : modes) M += m.amp * std::sin(m.k.dot(x) + m.phase);
    return M;
  };
}

struct CompatLevel {
  double h;
  ResidualNorms norms;
};

inline std::vector<CompatLevel> compat_study(const std::string& field, double alpha,
                                             const std::vector<double>& levels, double half_width,
                                             std::uint64_t seed) {
  std::vector<CompatLevel> out;
  for (double h : levels) {
    if (!(h > 0)) throw UsageError("refinement levels must be positive");
    const int n = 2 * static_cast<int>(std::lround(half_width / h)) + 1;
    const Grid g = Grid::uniform(3, -half_width, half_width, n);
    MatrixField gamma(g);
    if (field == "random") {
      gamma = sample_field<Mat3>(g, [f = random_matrix_field(seed)](const Eigen::VectorXd& x) {
        return f(Vec3(x));
      });
    } else {
      gamma = nye_tensor(contortion_from_rotation(sample_rotations(g, compat_rotation(field, alpha))));
    }
    out.push_back({g.spacing(0), compat_residual(gamma).norms});
  }
  return out;
}

// ---------------------------------------------------------------------------
// evolve

inline const std::vector<std::string>& evolve_presets() {
  static const std::vector<std::string> p{"kink", "antikink", "pair", "vacuum"};
  return p;
}

inline Config evolve_defaults(const std::string&) {
  return {{"m", "1"},       {"b", "0"},        {"v", "0.5"},       {"delta", "0"},
          {"grid", "-20,20,4001"}, {"dt", "0.005"}, {"duration", "5"}, {"stride", "0"},
          {"separation", "6"},     {"tolerance", "1e-3"}};
}

// ---------------------------------------------------------------------------
// dump-field

inline const std::vector<std::string>& dump_presets() {
  static const std::vector<std::string> p{"vortex", "hedgehog", "n3", "skyrme", "monopole"};
  return p;
}

inline Config dump_defaults(const std::string& preset) {
  Config c{{"N", "1"}, {"scale", "1"}, {"profile", "skyrme-exp"}, {"coupling", "1"}, {"vev", "1"}};
  c["grid"] = preset == "vortex" ? "-2,2,21" : "-2,2,11";
  return c;
}

// ---------------------------------------------------------------------------
// Driver

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Topological charges, defect identities and soliton checks"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  OutputSpec output;
  std::string config_arg;
  Config flags;
  bool verbose = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_arg, "preset name or key=value file");
    sub->add_option("--output", output.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out-file", output.file, "write results to this file");
    sub->add_flag("--quiet", output.quiet, "suppress diagnostics on stderr");
    sub->add_flag("--verbose", verbose, "log numerical diagnostics");
    sub->add_option_function<std::string>(
        "--seed", [&](const std::string& v) { flags["seed"] = v; }, "seed for randomized fields");
  };
  auto opt = [&](CLI::App* sub, const std::string& name, const std::string& key, const std::string& help) {
    sub->add_option_function<std::string>(name, [&flags, key](const std::string& v) { flags[key] = v; },
                                          help);
  };

  auto* charge_cmd = app.add_subcommand("charge", "compute a topological charge");
  common(charge_cmd);
  opt(charge_cmd, "-N,--winding", "N", "winding number of the constructor");
  opt(charge_cmd, "--method", "method", "contour | surface-flux | volume-density");
  opt(charge_cmd, "--formula", "formula", "det-B | det-Gamma | KKK (skyrme)");
  opt(charge_cmd, "--profile", "profile", "radial profile name (skyrme)");
  opt(charge_cmd, "--scale", "scale", "profile core radius a");
  opt(charge_cmd, "--grid", "grid", "lo,hi,n per axis");
  opt(charge_cmd, "--radius", "radius", "contour / sphere radius");
  opt(charge_cmd, "--n-quad", "n_quad", "quadrature count (>= 16)");
  opt(charge_cmd, "--coupling", "coupling", "gauge coupling g (monopole)");
  opt(charge_cmd, "--vev", "vev", "Higgs vacuum value F (monopole)");
  opt(charge_cmd, "--tolerance", "tolerance", "quantization tolerance");

  auto* compat_cmd = app.add_subcommand("compat", "Curl Gamma + Cof Gamma refinement study");
  common(compat_cmd);
  opt(compat_cmd, "--levels", "levels", "comma-separated spacings");
  opt(compat_cmd, "--alpha", "alpha", "field strength parameter");
  opt(compat_cmd, "--half-width", "half_width", "box half width");
  opt(compat_cmd, "--min-order", "min_order", "required convergence order");

  auto* evolve_cmd = app.add_subcommand("evolve", "double sine-Gordon evolution");
  common(evolve_cmd);
  for (const char* k : {"m", "b", "v", "delta", "dt", "duration", "stride", "separation", "tolerance"})
    opt(evolve_cmd, std::string("--") + k, k, k);
  opt(evolve_cmd, "--grid", "grid", "lo,hi,n");
  opt(evolve_cmd, "--snapshots", "snapshots", "CSV file for (t, x, theta) snapshots");

  auto* classify_cmd = app.add_subcommand("classify", "homotopy classification of a defect");
  common(classify_cmd);
  int m_dim = -1, d_dim = -1;
  std::string space_name;
  classify_cmd->add_option("--m", m_dim, "medium dimension")->required();
  classify_cmd->add_option("--d", d_dim, "defect dimension")->required();
  classify_cmd->add_option("--space", space_name, "order-parameter space")->required();

  auto* dump_cmd = app.add_subcommand("dump-field", "sample a constructor onto a grid");
  common(dump_cmd);
  opt(dump_cmd, "-N,--winding", "N", "winding number");
  opt(dump_cmd, "--profile", "profile", "radial profile (skyrme)");
  opt(dump_cmd, "--scale", "scale", "profile core radius a");
  opt(dump_cmd, "--grid", "grid", "lo,hi,n per axis");
  opt(dump_cmd, "--coupling", "coupling", "gauge coupling g (monopole)");
  opt(dump_cmd, "--vev", "vev", "Higgs vacuum value F (monopole)");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return exit_usage;
  }

  diag::verbose() = verbose && !output.quiet;
  auto note = [&](const std::string& msg) {
    if (!output.quiet) err << msg << '\n';
  };

  try {
    if (charge_cmd->parsed()) {
      const Config c = resolve(config_arg, charge_presets(), "constructor", flags, charge_defaults);
      const double tol = to_double(c, "tolerance");
      ChargeReport r = run_charge(c);
      json j = to_json(r);
      j["command"] = "charge";
      j["config_echo"] = config_echo(c);
      emit(j, output, out);
      for (const auto& w : r.warnings) note("warning: " + w);
      return (r.quantized && r.error_estimate < tol) ? exit_ok : exit_out_of_tolerance;
    }

    if (compat_cmd->parsed()) {
      const Config c = resolve(config_arg, compat_presets(), "field", flags, compat_defaults);
      const auto levels = parse_list(c.at("levels"));
      if (levels.size() < 2) throw UsageError("compat needs at least two refinement levels");
      const double min_order = to_double(c, "min_order");
      const auto study = compat_study(c.at("field"), to_double(c, "alpha"), levels,
                                      to_double(c, "half_width"),
                                      static_cast<std::uint64_t>(to_long(c, "seed")));
      json rows = json::array();
      for (const auto& l : study)
        rows.push_back({{"h", l.h}, {"max", l.norms.max}, {"mean", l.norms.mean}, {"nodes", l.norms.count}});
      json orders = json::array();
      double worst_order = std::numeric_limits<double>::infinity();
      bool vanishing = true;
      for (const auto& l : study) vanishing = vanishing && l.norms.max < 1e-12;
      for (std::size_t i = 0; i + 1 < study.size(); ++i) {
        const double ratio = study[i].norms.max / study[i + 1].norms.max;
        const double order = std::log(ratio) / std::log(study[i].h / study[i + 1].h);
        orders.push_back({{"ratio", ratio}, {"order", std::isfinite(order) ? json(order) : json(nullptr)}});
        if (std::isfinite(order)) worst_order = std::min(worst_order, order);
        else worst_order = std::min(worst_order, 0.0);
      }
      const bool pass = vanishing || worst_order >= min_order;
      if (output.format == "csv") {
        Sink sink(output, out);
        sink.stream() << "h,max,mean\n";
        char buf[128];
        for (const auto& l : study) {
          std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", l.h, l.norms.max, l.norms.mean);
          sink.stream() << buf;
        }
      } else {
        json j{{"command", "compat"},
               {"config_echo", config_echo(c)},
               {"levels", rows},
               {"refinement", orders},
               {"vanishing", vanishing},
               {"observed_order", vanishing ? json(nullptr) : json(worst_order)},
               {"pass", pass}};
        emit(j, output, out);
      }
      if (!pass) note("compatibility residual does not converge at order " + c.at("min_order"));
      return pass ? exit_ok : exit_out_of_tolerance;
    }

    if (evolve_cmd->parsed()) {
      const Config c = resolve(config_arg, evolve_presets(), "state", flags, evolve_defaults);
      const std::string state_name = c.at("state");
      DsgParams p;
      try {
        p = DsgParams::sine_gordon(to_double(c, "m"), to_double(c, "v"), to_double(c, "delta"));
        p.b = to_double(c, "b");
        p.validate();
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      DsgParams anti = p;
      anti.sign_k = -1;
      anti.v = -p.v;
      const Grid g = parse_grid(c.at("grid"), 1);
      const double dt = to_double(c, "dt"), duration = to_double(c, "duration");
      if (!(dt > 0) || duration < 0) throw UsageError("dt must be positive and duration non-negative");
      const long steps = std::lround(duration / dt);
      const long stride = to_long(c, "stride");
      const double sep = to_double(c, "separation");

      std::function<double(double, double)> exact;
      WaveState state = make_state(g, [](double) { return 0.0; }, [](double) { return 0.0; });
      if (state_name == "kink") {
        state = kink_state(p, g);
        exact = [p](double x, double t) { return kink(p, x, t); };
      } else if (state_name == "antikink") {
        state = kink_state(anti, g);
        exact = [anti](double x, double t) { return kink(anti, x, t); };
      } else if (state_name == "pair") {
        DsgParams left = p, right = anti;
        left.delta = p.k * 0.5 * sep;
        right.delta = p.k * 0.5 * sep;
        right.sign_delta = +1;
        state = make_state(
            g, [&](double x) { return kink(left, x, 0) + kink(right, x, 0) - 2.0 * pi; },
            [&](double x) { return kink_jet(left, x, 0).t + kink_jet(right, x, 0).t; });
      }
      std::unique_ptr<std::ofstream> snap;
      if (auto it = c.find("snapshots"); it != c.end()) {
        snap = std::make_unique<std::ofstream>(it->second);
        if (!*snap) throw std::runtime_error("cannot open snapshot file '" + it->second + "'");
      }
      const bool csv = output.format == "csv";
      std::unique_ptr<Sink> csv_sink;
      if (csv) csv_sink = std::make_unique<Sink>(output, out);
      std::ostream* snap_os = snap ? snap.get() : (csv ? &csv_sink->stream() : nullptr);

      const ChargeReport q0 = sector_charge(state);
      const double e0 = energy(state, p);
      if (snap_os) write_snapshot(*snap_os, state, true);
      long done = 0;
      const long chunk = stride > 0 ? stride : std::max<long>(steps, 1);
      while (done < steps) {
        const long n = std::min(chunk, steps - done);
        state = evolve(std::move(state), p, dt, n);
        done += n;
        if (snap_os && stride > 0) write_snapshot(*snap_os, state, false);
      }
      if (snap_os && stride <= 0 && steps > 0) write_snapshot(*snap_os, state, false);
      const ChargeReport q1 = sector_charge(state);
      const double e1 = energy(state, p);
      const double drift = std::abs(q1.value - q0.value);
      const double e_rel = e0 > 0 ? std::abs(e1 - e0) / e0 : std::abs(e1 - e0);
      json j{{"command", "evolve"},
             {"config_echo", config_echo(c)},
             {"initial_charge", to_json(q0)},
             {"final_charge", to_json(q1)},
             {"charge_drift", drift},
             {"energy_initial", e0},
             {"energy_final", e1},
             {"energy_drift_relative", e_rel},
             {"steps", steps},
             {"t_final", state.t}};
      if (exact && p.b == 0.0) {
        double linf = 0.0;
        for (std::size_t i = 0; i < state.theta.size(); ++i)
          linf = std::max(linf, std::abs(state.theta[i] - exact(state.x(i), state.t)));
        j["linf_vs_analytic"] = linf;
      } else {
        j["linf_vs_analytic"] = nullptr;
      }
      if (csv) {
        if (!output.quiet) err << dump_json(j) << '\n';
      } else {
        emit(j, output, out);
      }
      return drift <= to_double(c, "tolerance") ? exit_ok : exit_out_of_tolerance;
    }

    if (classify_cmd->parsed()) {
      Space space;
      int n;
      try {
        space = parse_space(space_name);
        n = probe_dimension(m_dim, d_dim);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      json j = to_json(classify(space, n));
      j["command"] = "classify";
      j["m"] = m_dim;
      j["d"] = d_dim;
      emit(j, output, out);
      return exit_ok;
    }

    if (dump_cmd->parsed()) {
      const Config c = resolve(config_arg, dump_presets(), "constructor", flags, dump_defaults);
      const std::string name = c.at("constructor");
      const WindingInt N(static_cast<int>(to_long(c, "N")));
      const double a = to_double(c, "scale");
      std::ostringstream csv_text;
      if (name == "vortex") {
        write_csv<2, 2>(csv_text, parse_grid(c.at("grid"), 2), vortex(N));
      } else if (name == "hedgehog" || name == "n3") {
        write_csv<3, 3>(csv_text, parse_grid(c.at("grid"), 3), n3(name == "hedgehog" ? WindingInt(1) : N));
      } else if (name == "skyrme") {
        write_csv<4, 3>(csv_text, parse_grid(c.at("grid"), 3),
                        skyrme_field(N, profile_library(c.at("profile"), {a, 1.0, 1.0})));
      } else {
        const double g = to_double(c, "coupling"), F = to_double(c, "vev");
        auto fields = monopole_config(N, profile_library("higgs-tanh", {a, F, g}),
                                      profile_library("gauge-bps", {a, F, g}));
        write_csv<3, 3>(csv_text, parse_grid(c.at("grid"), 3), fields.higgs);
      }
      Sink sink(output, out);
      if (output.format == "csv") {
        sink.stream() << csv_text.str();
      } else {
        std::istringstream in(csv_text.str());
        std::string line;
        std::getline(in, line);
        json columns = json::array();
        {
          std::stringstream hs(line);
          std::string tok;
          while (std::getline(hs, tok, ',')) columns.push_back(tok);
        }
        json rows = json::array();
        while (std::getline(in, line)) {
          std::stringstream ls(line);
          std::string tok;
          json row = json::array();
          while (std::getline(ls, tok, ',')) row.push_back(tok == "nan" ? json(nullptr) : json(std::stod(tok)));
          rows.push_back(row);
        }
        json j{{"command", "dump-field"}, {"config_echo", config_echo(c)}, {"columns", columns}, {"rows", rows}};
        sink.stream() << dump_json(j, 0) << '\n';
      }
      return exit_ok;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_error;
  }
  return exit_usage;
}

}  // namespace topodef::cli

#endif
