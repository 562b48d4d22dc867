#ifndef TOPODEF_HOMOTOPY_HPP
#define TOPODEF_HOMOTOPY_HPP

// Defect classification bookkeeping: a defect of dimension d in an
// m-dimensional medium is probed by an n-sphere with n = m - d - 1 and is
// classified by pi_n of the order-parameter space. classify() is a lookup
// over the homotopy groups quoted for the supported spaces; anything else is
// reported as unknown rather than computed.

#include <cctype>
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace topodef {

enum class SpaceKind { sphere, rp2, rp3, so3, cp1, su2_mod_u1, su2_mod_so3 };

struct Space {
  SpaceKind kind = SpaceKind::sphere;
  int dim = 2;  // sphere dimension for SpaceKind::sphere

  static Space S(int n) {
    if (n < 1) throw std::invalid_argument("sphere dimension must be >= 1");
    return {SpaceKind::sphere, n};
  }
  static Space RP2() { return {SpaceKind::rp2, 2}; }
  static Space RP3() { return {SpaceKind::rp3, 3}; }
  static Space SO3() { return {SpaceKind::so3, 3}; }
  static Space CP1() { return {SpaceKind::cp1, 2}; }
  static Space SU2modU1() { return {SpaceKind::su2_mod_u1, 2}; }
  static Space SU2modSO3() { return {SpaceKind::su2_mod_so3, 0}; }
};

inline std::string to_string(const Space& s) {
  switch (s.kind) {
    case SpaceKind::sphere: return "S" + std::to_string(s.dim);
    case SpaceKind::rp2: return "RP2";
    case SpaceKind::rp3: return "RP3";
    case SpaceKind::so3: return "SO3";
    case SpaceKind::cp1: return "CP1";
    case SpaceKind::su2_mod_u1: return "SU2modU1";
    case SpaceKind::su2_mod_so3: return "SU2modSO3";
  }
  return "unknown";
}

// Accepts S1, S2, ..., Sn(k), RP2, RP3, SO3, CP1, SU2modU1 (or SU2/U1),
// SU2modSO3 (or SU2/SO3).
inline Space parse_space(const std::string& raw) {
  std::string s;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s == "RP2") return Space::RP2();
  if (s == "RP3") return Space::RP3();
  if (s == "SO3") return Space::SO3();
  if (s == "CP1") return Space::CP1();
  if (s == "SU2modU1" || s == "SU2/U1") return Space::SU2modU1();
  if (s == "SU2modSO3" || s == "SU2/SO3") return Space::SU2modSO3();
  std::string digits;
  if (s.rfind("Sn(", 0) == 0 && s.size() > 4 && s.back() == ')')
    digits = s.substr(3, s.size() - 4);
  else if (s.size() > 1 && s[0] == 'S')
    digits = s.substr(1);
  if (!digits.empty() && digits.find_first_not_of("0123456789") == std::string::npos &&
      digits.size() < 4)
    return Space::S(std::stoi(digits));
  throw std::invalid_argument("unknown order-parameter space '" + raw + "'");
}

enum class GroupLabel { Z, Z2, trivial, unknown };

inline std::string to_string(GroupLabel g) {
  switch (g) {
    case GroupLabel::Z: return "Z";
    case GroupLabel::Z2: return "Z2";
    case GroupLabel::trivial: return "trivial";
    case GroupLabel::unknown: return "unknown";
  }
  return "unknown";
}

// n = m - d - 1 for a d-dimensional defect in an m-dimensional medium.
inline int probe_dimension(int m, int d) {
  if (d < 0) throw std::invalid_argument("defect dimension must be >= 0");
  if (d >= m)
    throw std::invalid_argument("defect dimension d = " + std::to_string(d) +
                                " must be below the medium dimension m = " + std::to_string(m));
  return m - d - 1;
}

struct Classification {
  Space space;
  int n = 0;
  GroupLabel group = GroupLabel::unknown;
  std::string relation;  // the quoted homotopy relation backing the entry
};

inline Classification classify(const Space& space, int n) {
  Classification c{space, n, GroupLabel::unknown, ""};
  auto set = [&](GroupLabel g, std::string rel) {
    c.group = g;
    c.relation = std::move(rel);
    return c;
  };
  const std::string pn = "pi_" + std::to_string(n);
  if (n < 1) return c;
  switch (space.kind) {
    case SpaceKind::sphere: {
      const int k = space.dim;
      const std::string sk = "S^" + std::to_string(k);
      if (n == k) return set(GroupLabel::Z, pn + "(" + sk + ") = Z");
      if (n == 1 && k >= 2) return set(GroupLabel::trivial, "pi_1(" + sk + ") = 0 for n >= 2");
      return c;
    }
    case SpaceKind::rp2:
      if (n == 1) return set(GroupLabel::Z2, "pi_1(RP^2) = Z_2");
      if (n == 2) return set(GroupLabel::Z, "pi_2(RP^2) = Z");
      return c;
    case SpaceKind::rp3:
      if (n == 1) return set(GroupLabel::Z2, "pi_1(RP^3) = pi_1(S^3/S^0) = Z_2");
      if (n == 3) return set(GroupLabel::Z, "pi_3(RP^3) = Z");
      return c;
    case SpaceKind::so3:
      if (n == 1) return set(GroupLabel::Z2, "pi_1(SO(3)) = Z_2");
      if (n == 3) return set(GroupLabel::Z, "pi_3(SO(3)) = pi_3(RP^3) = Z");
      return c;
    case SpaceKind::cp1:
      if (n == 2) return set(GroupLabel::Z, "pi_2(CP^1) = pi_2(S^3/S^1) = pi_2(S^2) = Z");
      if (n == 1) return set(GroupLabel::trivial, "pi_1(CP^1) = pi_1(S^2) = 0");
      return c;
    case SpaceKind::su2_mod_u1:
      if (n == 2) return set(GroupLabel::Z, "pi_2(SU(2)/U(1)) = pi_1(U(1)) = Z");
      return c;
    case SpaceKind::su2_mod_so3:
      if (n == 2) return set(GroupLabel::Z2, "pi_2(SU(2)/SO(3)) = pi_1(SO(3)) = Z_2");
      return c;
  }
  return c;
}

inline nlohmann::json to_json(const Classification& c) {
  return {{"space", to_string(c.space)},
          {"n", c.n},
          {"group", to_string(c.group)},
          {"source_equation", c.relation.empty() ? nlohmann::json(nullptr) : nlohmann::json(c.relation)}};
}

}  // namespace topodef

#endif
