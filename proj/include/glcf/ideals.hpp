#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "glcf/normal_form.hpp"

namespace glcf {

/// The seven ideals of gl_cf over a field.
enum class IdealName { Zero, Dsc, SlFr, GlFr, DscSlFr, DscGlFr, GlCf };

inline constexpr std::array<IdealName, 7> kAllIdeals = {IdealName::Zero,    IdealName::Dsc,     IdealName::SlFr,
                                                        IdealName::GlFr,    IdealName::DscSlFr, IdealName::DscGlFr,
                                                        IdealName::GlCf};

/// Covering relations (lower, upper) of the lattice.
inline constexpr std::array<std::pair<IdealName, IdealName>, 8> kHasseEdges = {{
    {IdealName::Zero, IdealName::Dsc},
    {IdealName::Zero, IdealName::SlFr},
    {IdealName::SlFr, IdealName::GlFr},
    {IdealName::SlFr, IdealName::DscSlFr},
    {IdealName::Dsc, IdealName::DscSlFr},
    {IdealName::GlFr, IdealName::DscGlFr},
    {IdealName::DscSlFr, IdealName::DscGlFr},
    {IdealName::DscGlFr, IdealName::GlCf},
}};

constexpr std::string_view ideal_name(IdealName l) noexcept {
  switch (l) {
    case IdealName::Zero: return "0";
    case IdealName::Dsc: return "d_sc";
    case IdealName::SlFr: return "sl_fr";
    case IdealName::GlFr: return "gl_fr";
    case IdealName::DscSlFr: return "d_sc+sl_fr";
    case IdealName::DscGlFr: return "d_sc+gl_fr";
    case IdealName::GlCf: return "gl_cf";
  }
  return "?";
}

inline std::optional<IdealName> parse_ideal_name(std::string_view s) {
  for (IdealName l : kAllIdeals) {
    if (ideal_name(l) == s) return l;
  }
  return std::nullopt;
}

namespace detail {
// Reflexive-transitive closure of the covering relation.
constexpr bool reachable(IdealName a, IdealName b) {
  if (a == b) return true;
  for (const auto& [lo, hi] : kHasseEdges) {
    if (lo == a && reachable(hi, b)) return true;
  }
  return false;
}
}  // namespace detail

constexpr bool leq(IdealName a, IdealName b) { return detail::reachable(a, b); }

/// Least upper bound.
constexpr IdealName join(IdealName a, IdealName b) {
  for (IdealName c : kAllIdeals) {
    if (!leq(a, c) || !leq(b, c)) continue;
    bool least = true;
    for (IdealName d : kAllIdeals) {
      if (leq(a, d) && leq(b, d) && !leq(c, d)) least = false;
    }
    if (least) return c;
  }
  return IdealName::GlCf;
}

/// Greatest lower bound.
constexpr IdealName meet(IdealName a, IdealName b) {
  for (IdealName c : kAllIdeals) {
    if (!leq(c, a) || !leq(c, b)) continue;
    bool greatest = true;
    for (IdealName d : kAllIdeals) {
      if (leq(d, a) && leq(d, b) && !leq(d, c)) greatest = false;
    }
    if (greatest) return c;
  }
  return IdealName::Zero;
}

/// Reads the smallest ideal off a canonical form.
inline IdealName classify(const CanonicalForm& cf) {
  if (!cf.tail.empty()) return IdealName::GlCf;
  bool scalar = !cf.alpha.is_zero();
  bool rows = !cf.fr.empty();
  if (scalar && rows) return cf.fr_trace.is_zero() ? IdealName::DscSlFr : IdealName::DscGlFr;
  if (scalar) return IdealName::Dsc;
  if (rows) return cf.fr_trace.is_zero() ? IdealName::SlFr : IdealName::GlFr;
  return IdealName::Zero;
}

/// The ideal generated by A. Minimality: the chains of the witnesses module
/// show that a nonzero element of gl_fr generates sl_fr (plus gl_fr when the
/// trace is nonzero, since sl_fr has codimension one in gl_fr), a scalar adds
/// d_sc, and an element outside d_sc + gl_fr generates everything.
inline IdealName classify(const MatExpr& a) {
  if (!a.field().has_inverses()) throw Error(Errc::InvalidField, "classification needs a field, got z");
  return classify(normalize(a));
}

inline bool in_ideal(const MatExpr& a, IdealName l) { return leq(classify(a), l); }

}  // namespace glcf
