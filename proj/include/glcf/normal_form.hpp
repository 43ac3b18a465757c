#pragma once

#include <map>
#include <string>
#include <vector>

#include "glcf/matexpr.hpp"

namespace glcf {

/// Intermediate normal form: finitely many bands plus finitely many rows.
/// bands[k] holds w with entry (i, i + k) = w(i); w(i) is kept zero whenever
/// i + k < 1. rows[r] is the content of row r.
struct BandForm {
  Field field;
  std::map<Index, SeqDesc> bands;
  std::map<Index, SeqDesc> rows;

  explicit BandForm(Field f) : field(f) {}

  void add_band(Index k, const SeqDesc& w) {
    SeqDesc v = k < 0 ? w.zeroed_through(-k) : w;
    if (v.is_zero()) return;
    auto [it, inserted] = bands.emplace(k, v);
    if (!inserted) {
      it->second = it->second + v;
      if (it->second.is_zero()) bands.erase(it);
    }
  }
  void add_row(Index r, const SeqDesc& s) {
    if (s.is_zero()) return;
    auto [it, inserted] = rows.emplace(r, s);
    if (!inserted) {
      it->second = it->second + s;
      if (it->second.is_zero()) rows.erase(it);
    }
  }
  void add(const BandForm& o) {
    for (const auto& [k, w] : o.bands) add_band(k, w);
    for (const auto& [r, s] : o.rows) add_row(r, s);
  }
  BandForm scaled(const Scalar& c) const {
    BandForm out(field);
    if (c.is_zero()) return out;
    for (const auto& [k, w] : bands) out.add_band(k, w.scaled(c));
    for (const auto& [r, s] : rows) out.add_row(r, s.scaled(c));
    return out;
  }

  friend BandForm operator*(const BandForm& a, const BandForm& b) {
    BandForm out(a.field);
    for (const auto& [k, x] : a.bands) {
      for (const auto& [l, y] : b.bands) out.add_band(k + l, x * y.shifted(k));
      for (const auto& [r, s] : b.rows) {
        if (r - k >= 1) out.add_row(r - k, s.scaled(x.at(r - k)));
      }
    }
    for (const auto& [r, s] : a.rows) {
      for (const auto& [l, y] : b.bands) out.add_row(r, (s * y).shifted(-l));
      for (const auto& [q, t] : b.rows) out.add_row(r, t.scaled(s.at(q)));
    }
    return out;
  }
};

/// Builds the band form of an expression. Match and ShiftSolve nodes denote
/// matrices outside the band fragment and are refused.
inline BandForm to_band_form(const MatExpr& a) {
  using namespace node;
  Field f = a.field();
  return std::visit(
      [&](const auto& x) -> BandForm {
        using T = std::decay_t<decltype(x)>;
        BandForm out(f);
        if constexpr (std::is_same_v<T, Zero>) {
        } else if constexpr (std::is_same_v<T, ScalarE>) {
          out.add_band(0, SeqDesc::constant(x.alpha));
        } else if constexpr (std::is_same_v<T, Basis>) {
          out.add_row(x.i, SeqDesc::unit(f, x.j));
        } else if constexpr (std::is_same_v<T, FiniteLit>) {
          for (const auto& [ij, v] : x.entries) out.add_row(ij.first, SeqDesc::unit(f, ij.second).scaled(v));
        } else if constexpr (std::is_same_v<T, Diag>) {
          out.add_band(0, x.s);
        } else if constexpr (std::is_same_v<T, Shift>) {
          out.add_band(x.k, x.h.indicator(Scalar::one(f)) * x.w);
        } else if constexpr (std::is_same_v<T, RowMat>) {
          out.add_row(x.r, x.s);
        } else if constexpr (std::is_same_v<T, Sum>) {
          for (const auto& t : x.terms) out.add(to_band_form(t));
        } else if constexpr (std::is_same_v<T, Scale>) {
          out = to_band_form(*x.e).scaled(x.c);
        } else if constexpr (std::is_same_v<T, Prod>) {
          out = to_band_form(*x.left) * to_band_form(*x.right);
        } else if constexpr (std::is_same_v<T, Bracket>) {
          BandForm l = to_band_form(*x.left), r = to_band_form(*x.right);
          out = l * r;
          out.add((r * l).scaled(-Scalar::one(f)));
        } else if constexpr (std::is_same_v<T, Match>) {
          throw Error(Errc::NotNormalizable, "match(...) is not a band matrix");
        } else {
          throw Error(Errc::NotNormalizable, "solve(...) is not a band matrix");
        }
        return out;
      },
      a.payload());
}

/// alpha*E + (finitely many rows) + tail. Tail terms are Diag with a
/// non-constant purely periodic sequence or Shift over an infinite set; the
/// tail is empty iff the matrix lies in d_sc + gl_fr. When a non-constant
/// diagonal tail is present the scalar part is folded into it (alpha = 0).
struct CanonicalForm {
  Scalar alpha;
  std::map<Index, SeqDesc> fr;
  std::vector<MatExpr> tail;
  Scalar fr_trace;

  bool in_dsc_glfr() const noexcept { return tail.empty(); }
  bool is_zero() const { return alpha.is_zero() && fr.empty() && tail.empty(); }
  bool is_row_finite() const {
    for (const auto& [r, s] : fr) {
      if (!s.has_finite_support()) return false;
    }
    return true;
  }
  /// Largest row index used by the finite-row part (0 if none).
  Index max_fr_row() const { return fr.empty() ? 0 : fr.rbegin()->first; }

  /// Expression with the same denotation.
  MatExpr to_expr() const {
    Field f = alpha.field();
    std::vector<MatExpr> terms;
    if (!alpha.is_zero()) terms.push_back(mat::scalar(alpha));
    std::map<std::pair<Index, Index>, Scalar> lit;
    for (const auto& [r, s] : fr) {
      if (s.has_finite_support()) {
        for (const auto& [j, v] : s.finite_entries()) lit.emplace(std::make_pair(r, j), v);
      } else {
        terms.push_back(mat::row(r, s));
      }
    }
    if (!lit.empty()) terms.insert(terms.begin() + (alpha.is_zero() ? 0 : 1), mat::finite(f, lit));
    for (const auto& t : tail) terms.push_back(t);
    return mat::sum(std::move(terms), f);
  }
};

inline CanonicalForm canonical_form(const BandForm& b) {
  Field f = b.field;
  CanonicalForm cf{Scalar::zero(f), {}, {}, Scalar::zero(f)};
  auto add_row = [&](Index r, const SeqDesc& s) {
    if (s.is_zero()) return;
    auto [it, inserted] = cf.fr.emplace(r, s);
    if (!inserted) {
      it->second = it->second + s;
      if (it->second.is_zero()) cf.fr.erase(it);
    }
  };
  for (const auto& [k, w] : b.bands) {
    SeqDesc p = w.periodic_part();
    SeqDesc rest = w - p;
    if (k == 0) {
      if (auto c = p.eventual_value(); c && p.prefix_length() == 0) {
        cf.alpha = *c;
      } else {
        cf.tail.push_back(mat::diag(p));
      }
    } else if (!p.is_zero()) {
      cf.tail.push_back(mat::shift(k, IndexSet::support(p), p));
    }
    for (const auto& [i, v] : rest.finite_entries()) {
      if (i + k >= 1) add_row(i, SeqDesc::unit(f, i + k).scaled(v));
    }
  }
  for (const auto& [r, s] : b.rows) add_row(r, s);
  for (const auto& [r, s] : cf.fr) cf.fr_trace += s.at(r);
  return cf;
}

inline CanonicalForm normalize(const MatExpr& a) { return canonical_form(to_band_form(a)); }

/// The finite-row trace of a matrix in gl_fr.
inline Scalar trace_fr(const MatExpr& a) {
  CanonicalForm cf = normalize(a);
  if (!cf.tail.empty() || !cf.alpha.is_zero()) throw Error(Errc::NotInGlFr, "matrix is not finite-row");
  return cf.fr_trace;
}

}  // namespace glcf
