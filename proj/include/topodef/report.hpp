#ifndef TOPODEF_REPORT_HPP
#define TOPODEF_REPORT_HPP

// ChargeReport and a deterministic JSON writer (sorted keys, %.17g numbers).

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "topodef/grid.hpp"

namespace topodef {

using json = nlohmann::json;

enum class ChargeMethod { contour, surface_flux, volume_density, asymptotic_phase };

inline std::string to_string(ChargeMethod m) {
  switch (m) {
    case ChargeMethod::contour: return "contour";
    case ChargeMethod::surface_flux: return "surface-flux";
    case ChargeMethod::volume_density: return "volume-density";
    case ChargeMethod::asymptotic_phase: return "asymptotic-phase";
  }
  return "unknown";
}

inline ChargeMethod parse_method(const std::string& s) {
  if (s == "contour") return ChargeMethod::contour;
  if (s == "surface-flux") return ChargeMethod::surface_flux;
  if (s == "volume-density") return ChargeMethod::volume_density;
  if (s == "asymptotic-phase") return ChargeMethod::asymptotic_phase;
  throw std::invalid_argument("unknown method '" + s +
                              "' (expected contour, surface-flux, volume-density, asymptotic-phase)");
}

inline long round_half_away(double v) { return std::lround(v); }

struct ChargeReport {
  std::string quantity = "topological_charge";
  double value = 0.0;
  long nearest_integer = 0;
  ChargeMethod method = ChargeMethod::surface_flux;
  json grid = json::object();
  double error_estimate = 0.0;
  bool quantized = true;
  std::vector<std::string> warnings;

  // Fills nearest_integer, error_estimate and quantized from value. A
  // larger externally known error (refinement delta) can be passed in.
  void settle(double extra_error = 0.0) {
    if (!std::isfinite(value)) throw std::runtime_error("charge value is not finite");
    nearest_integer = round_half_away(value);
    error_estimate = std::max(std::abs(value - static_cast<double>(nearest_integer)),
                              std::abs(extra_error));
    quantized = error_estimate < 0.5;
    if (!quantized) warnings.push_back("non-quantized: error estimate >= 0.5");
  }
};

inline json grid_json(const Grid& g) {
  json axes = json::array();
  for (int a = 0; a < g.dim(); ++a)
    axes.push_back({{"lo", g.axis(a).lo}, {"hi", g.axis(a).hi}, {"n", g.axis(a).n},
                    {"h", g.spacing(a)}});
  return {{"kind", "lattice"}, {"dim", g.dim()}, {"axes", axes}};
}

inline json to_json(const ChargeReport& r) {
  json j{{"quantity", r.quantity},
         {"value", r.value},
         {"nearest_integer", r.nearest_integer},
         {"method", to_string(r.method)},
         {"grid", r.grid},
         {"error_estimate", r.error_estimate},
         {"quantized", r.quantized}};
  j["warnings"] = r.warnings;
  return j;
}

namespace detail {

inline void write_number(std::ostringstream& os, double v) {
  if (!std::isfinite(v)) {
    os << "null";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << buf;
}

inline void write_json(std::ostringstream& os, const json& j, int indent, int depth) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close_pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  const char* sep = indent > 0 ? ": " : ":";
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{' << nl;
      bool first = true;
      // nlohmann::json stores objects in a std::map, so iteration is sorted.
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',' << nl;
        first = false;
        os << pad << json(it.key()).dump() << sep;
        write_json(os, it.value(), indent, depth + 1);
      }
      os << nl << close_pad << '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << '[' << nl;
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ',' << nl;
        os << pad;
        write_json(os, j[i], indent, depth + 1);
      }
      os << nl << close_pad << ']';
      return;
    }
    case json::value_t::number_float:
      write_number(os, j.get<double>());
      return;
    default:
      os << j.dump();
      return;
  }
}

}  // namespace detail

// Serialises with sorted keys and 17 significant digits for every float.
inline std::string dump_json(const json& j, int indent = 2) {
  std::ostringstream os;
  detail::write_json(os, j, indent, 0);
  return os.str();
}

}  // namespace topodef

#endif
