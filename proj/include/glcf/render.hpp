#pragma once

#include <map>
#include <string>
#include <vector>

#include "glcf/matexpr.hpp"
#include "glcf/reindex.hpp"

namespace glcf {

// Canonical DSL text. parse(render(e)) reproduces e node for node.

namespace detail {
inline std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (k) out += sep;
    out += parts[k];
  }
  return out;
}
inline std::string scalar_list(const std::vector<Scalar>& v) {
  std::vector<std::string> parts;
  for (const auto& s : v) parts.push_back(s.to_string());
  return join(parts, ", ");
}
inline std::string bit_list(const std::vector<bool>& v) {
  std::vector<std::string> parts;
  for (bool b : v) parts.push_back(b ? "1" : "0");
  return join(parts, ", ");
}
}  // namespace detail

inline std::string render(const SeqDesc& s) {
  switch (s.kind()) {
    case SeqDesc::Kind::FiniteSupport: {
      std::vector<std::string> parts;
      for (const auto& [i, v] : s.finite_entries()) parts.push_back(std::to_string(i) + ": " + v.to_string());
      return "fin(" + detail::join(parts, ", ") + ")";
    }
    case SeqDesc::Kind::EventuallyConstant:
      if (s.prefix_length() == 0) return "const(" + s.data().period().front().to_string() + ")";
      [[fallthrough]];
    case SeqDesc::Kind::EventuallyPeriodic:
      if (s.prefix_length() == 0) return "periodic(" + detail::scalar_list(s.data().period()) + ")";
      return "periodic(" + detail::scalar_list(s.data().prefix()) + "; " + detail::scalar_list(s.data().period()) + ")";
  }
  return "?";
}

inline std::string render(const IndexSet& h) {
  if (h.is_all()) return "all";
  if (!h.is_infinite()) {
    std::vector<std::string> parts;
    for (Index i : h.finite_members()) parts.push_back(std::to_string(i));
    return "fin{" + detail::join(parts, ", ") + "}";
  }
  const auto& b = h.bits();
  if (b.prefix_length() == 0) return "periodic(" + detail::bit_list(b.period()) + ")";
  return "periodic(" + detail::bit_list(b.prefix()) + "; " + detail::bit_list(b.period()) + ")";
}

inline std::string render(const ZSeq& s) {
  if (s.neg == s.pos && s.pos.prefix_length() == 0 && s.pos.period_length() == 1 && !s.pos.is_zero()) {
    return render(s.pos);
  }
  if (s.neg.has_finite_support() && s.pos.has_finite_support()) {
    std::vector<std::string> parts;
    auto neg = s.neg.finite_entries();
    for (auto it = neg.rbegin(); it != neg.rend(); ++it) {
      parts.push_back(std::to_string(-it->first) + ": " + it->second.to_string());
    }
    for (const auto& [k, v] : s.pos.finite_entries()) parts.push_back(std::to_string(k - 1) + ": " + v.to_string());
    return "fin(" + detail::join(parts, ", ") + ")";
  }
  return "two(" + render(s.neg) + ", " + render(s.pos) + ")";
}

inline std::string render(const ZSet& h) {
  if (h.neg.is_all() && h.pos.is_all()) return "all";
  if (!h.neg.is_infinite() && !h.pos.is_infinite()) {
    std::vector<std::string> parts;
    auto neg = h.neg.finite_members();
    for (auto it = neg.rbegin(); it != neg.rend(); ++it) parts.push_back(std::to_string(-*it));
    for (Index k : h.pos.finite_members()) parts.push_back(std::to_string(k - 1));
    return "fin{" + detail::join(parts, ", ") + "}";
  }
  return "two(" + render(h.neg) + ", " + render(h.pos) + ")";
}

std::string render(const MatExpr& e);
std::string render(const ZMatExpr& e);

namespace detail {

inline std::string scalar_factor(const Scalar& c) { return c.is_one() ? "I" : c.to_string(); }

inline std::string entries_text(const std::map<std::pair<Index, Index>, Scalar>& entries) {
  std::vector<std::string> parts;
  for (const auto& [ij, v] : entries) {
    parts.push_back(std::to_string(ij.first) + "," + std::to_string(ij.second) + ": " + v.to_string());
  }
  return "finite{" + join(parts, ", ") + "}";
}

template <class Expr, class W>
std::string shift_text(Index k, bool all, const std::string& h, const W& w, Field f) {
  bool unit = w == W::constant(Scalar::one(f));
  std::string s = "shift(" + std::to_string(k);
  if (!all || !unit) s += ", " + h;
  if (!unit) s += ", " + render(w);
  return s + ")";
}

// Shared for both index sides; N is the node namespace tag.
template <class N, class Expr>
std::string print(const Expr& e) {
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, typename N::Sum>) {
          auto operand = [](const Expr& t) {
            std::string s = render(t);
            return t.template is<typename N::Sum>() ? "(" + s + ")" : s;
          };
          std::string out;
          for (const auto& t : x.terms) {
            if (!out.empty() && t.template is<typename N::Scale>()) {
              const auto& sc = t.template as<typename N::Scale>();
              if (sc.c == -Scalar::one(sc.c.field())) {
                out += " - " + operand(*sc.e);
                continue;
              }
            }
            out += (out.empty() ? "" : " + ") + operand(t);
          }
          return out;
        } else if constexpr (std::is_same_v<T, typename N::Scale>) {
          const Expr& in = *x.e;
          std::string s = render(in);
          if (in.template is<typename N::Sum>()) s = "(" + s + ")";
          return x.c.to_string() + " * " + s;
        } else if constexpr (std::is_same_v<T, typename N::Prod>) {
          const Expr& l = *x.left;
          const Expr& r = *x.right;
          std::string ls = render(l), rs = render(r);
          bool bare = l.template is<typename N::Zero>() ||
                      (l.template is<typename N::ScalarE>() && !l.template as<typename N::ScalarE>().alpha.is_one());
          if (bare || l.template is<typename N::Sum>() || l.template is<typename N::Scale>()) ls = "(" + ls + ")";
          if (r.template is<typename N::Sum>() || r.template is<typename N::Scale>() ||
              r.template is<typename N::Prod>()) {
            rs = "(" + rs + ")";
          }
          return ls + " * " + rs;
        } else if constexpr (std::is_same_v<T, typename N::Bracket>) {
          return "[" + render(*x.left) + ", " + render(*x.right) + "]";
        } else if constexpr (std::is_same_v<T, typename N::Zero>) {
          return "0";
        } else if constexpr (std::is_same_v<T, typename N::ScalarE>) {
          return scalar_factor(x.alpha);
        } else if constexpr (std::is_same_v<T, typename N::Basis>) {
          return "E(" + std::to_string(x.i) + "," + std::to_string(x.j) + ")";
        } else if constexpr (std::is_same_v<T, typename N::FiniteLit>) {
          return entries_text(x.entries);
        } else if constexpr (std::is_same_v<T, typename N::Diag>) {
          return "diag(" + render(x.s) + ")";
        } else if constexpr (std::is_same_v<T, typename N::RowMat>) {
          return "row(" + std::to_string(x.r) + ", " + render(x.s) + ")";
        } else if constexpr (std::is_same_v<T, typename N::Shift>) {
          bool all;
          if constexpr (std::is_same_v<Expr, MatExpr>) {
            all = x.h.is_all();
          } else {
            all = x.h.neg.is_all() && x.h.pos.is_all();
          }
          return shift_text<Expr>(x.k, all, render(x.h), x.w, e.field());
        } else if constexpr (std::is_same_v<T, node::Match>) {
          return std::string(x.transposed ? "matchT(" : "match(") + render(x.domain) + ", " + render(x.codomain) +
                 ", " + std::to_string(x.row_offset) + ", " + std::to_string(x.col_offset) + ")";
        } else if constexpr (std::is_same_v<T, node::ShiftSolve>) {
          return "solve(" + render(*x.a) + ")";
        } else {
          static_assert(sizeof(T) == 0, "unhandled node");
        }
      },
      e.payload());
}

struct NTag {
  using Zero = node::Zero;
  using ScalarE = node::ScalarE;
  using Basis = node::Basis;
  using FiniteLit = node::FiniteLit;
  using Diag = node::Diag;
  using Shift = node::Shift;
  using RowMat = node::RowMat;
  using Sum = node::Sum;
  using Scale = node::Scale;
  using Prod = node::Prod;
  using Bracket = node::Bracket;
};
struct ZTag {
  using Zero = znode::Zero;
  using ScalarE = znode::ScalarE;
  using Basis = znode::Basis;
  using FiniteLit = znode::FiniteLit;
  using Diag = znode::Diag;
  using Shift = znode::Shift;
  using RowMat = znode::RowMat;
  using Sum = znode::Sum;
  using Scale = znode::Scale;
  using Prod = znode::Prod;
  using Bracket = znode::Bracket;
};

}  // namespace detail

inline std::string render(const MatExpr& e) { return detail::print<detail::NTag>(e); }
inline std::string render(const ZMatExpr& e) { return detail::print<detail::ZTag>(e); }

}  // namespace glcf
