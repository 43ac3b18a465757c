#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "glcf/chain.hpp"
#include "glcf/ideals.hpp"
#include "glcf/normal_form.hpp"

namespace glcf {

namespace detail {

inline void require_inverses(Field f) {
  if (!f.has_inverses()) throw Error(Errc::NoInverses, "witness construction divides; field " + f.to_string());
}

/// Closed form of an expression in the band fragment.
inline MatExpr closed(const MatExpr& e) { return normalize(e).to_expr(); }

inline std::string idx(Index i, Index j) { return std::to_string(i) + "," + std::to_string(j); }

/// Full diagonal of a diagonal matrix, or nullopt if it has off-diagonal entries.
inline std::optional<SeqDesc> diagonal_sequence(const CanonicalForm& cf) {
  Field f = cf.alpha.field();
  SeqDesc d = SeqDesc::constant(cf.alpha);
  for (const auto& t : cf.tail) {
    if (!t.is<node::Diag>()) return std::nullopt;
    d = d + t.as<node::Diag>().s;
  }
  for (const auto& [r, s] : cf.fr) {
    if (!(s == SeqDesc::unit(f, r).scaled(s.at(r)))) return std::nullopt;
    d = d + SeqDesc::unit(f, r).scaled(s.at(r));
  }
  return d;
}

inline SeqDesc pointwise_inverse(const SeqDesc& s) {
  Field f = s.field();
  return SeqDesc(f, s.data().map([&](const Scalar& v) { return v.is_zero() ? v : v.inv(); }));
}

/// Smallest index outside {i, j}.
inline Index other_index(Index i, Index j) {
  Index k = 1;
  while (k == i || k == j) ++k;
  return k;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Basis elements from a single matrix.

/// [A, (a_ii - a_jj)^-1 E_ij] = E_ij for diagonal A.
inline BracketChain eij_from_diag(const MatExpr& a, Index i, Index j) {
  Field f = a.field();
  detail::require_inverses(f);
  auto d = detail::diagonal_sequence(normalize(a));
  if (!d) throw Error(Errc::NotDiagonal, "matrix has off-diagonal entries");
  Scalar diff = d->at(i) - d->at(j);
  if (i == j || diff.is_zero()) {
    throw Error(Errc::EqualDiagonalEntries, "a_" + detail::idx(i, i) + " = a_" + detail::idx(j, j));
  }
  Scalar c = diff.inv();
  MatExpr e = mat::basis(f, i, j);
  BracketChain out{a, {}, e};
  out.bracket_left(kSeed, c.is_one() ? e : mat::scale(c, e), e, "scale E_" + detail::idx(i, j) + " by the inverse gap");
  return out;
}

/// From a nonzero off-diagonal entry a_ij to some basis matrix E_ik. Ends in
/// E_ij when a_ji = 0, otherwise in E_ik with k outside {i, j}.
inline BracketChain eij_from_offdiag(const MatExpr& a, Index i, Index j) {
  Field f = a.field();
  detail::require_inverses(f);
  if (i == j) throw Error(Errc::InvalidArgument, "pivot must be off-diagonal");
  Scalar aij = entry(a, i, j);
  if (aij.is_zero()) throw Error(Errc::ZeroPivot, "a_" + detail::idx(i, j) + " = 0");
  Scalar aji = entry(a, j, i);
  MatExpr eii = mat::basis(f, i, i), ejj = mat::basis(f, j, j), eij = mat::basis(f, i, j);

  BracketChain out{a, {}, eij};
  StepRef r1 = out.bracket_right(eii, kSeed, detail::closed(mat::bracket(eii, a)), "row i minus column i");
  MatExpr two = detail::closed(mat::bracket(out.value(r1), ejj));
  StepRef r2 = out.bracket_left(r1, ejj, two, "keep the (i,j) and (j,i) entries");
  if (aji.is_zero()) {
    out.combine({{aij.inv(), r2}}, eij, "normalize the pivot");
    return out;
  }
  MatExpr gap = mat::sub(eii, ejj);
  StepRef r3 = out.bracket_left(r2, eij, detail::closed(mat::bracket(out.value(r2), eij)), "a_ji (E_jj - E_ii)");
  StepRef r4 = out.combine({{-aji.inv(), r3}}, gap, "E_ii - E_jj");
  Index k = detail::other_index(i, j);
  MatExpr eik = mat::basis(f, i, k);
  out.bracket_left(r4, eik, eik, "E_ik for k outside {i,j}");
  out.target = eik;
  return out;
}

/// Derives B in sl_fr from the seed E_ij by elementary brackets.
inline BracketChain express_in_slfr(const MatExpr& b, Index si, Index sj) {
  Field f = b.field();
  if (si == sj) throw Error(Errc::InvalidArgument, "seed must be off-diagonal");
  CanonicalForm cf = normalize(b);
  if (!leq(classify(cf), IdealName::SlFr)) throw Error(Errc::NotInSlFr, "matrix is not trace-zero finite-row");

  BracketChain out{mat::basis(f, si, sj), {}, b};
  std::map<std::pair<Index, Index>, StepRef> have{{{si, sj}, kSeed}};
  auto E = [&](Index m, Index n) { return mat::basis(f, m, n); };

  // Ref of a step whose value is E_mn (m != n).
  std::function<StepRef(Index, Index)> get = [&](Index m, Index n) -> StepRef {
    if (auto it = have.find({m, n}); it != have.end()) return it->second;
    StepRef r;
    std::string note = "E_" + detail::idx(m, n);
    if (m == si) {
      r = out.bracket_left(get(si, sj), E(sj, n), E(m, n), note);
    } else if (n == sj) {
      r = out.bracket_right(E(m, si), get(si, sj), E(m, n), note);
    } else if (m == sj && n != si) {
      r = out.bracket_right(E(sj, si), get(si, n), E(m, n), note);
    } else if (m == sj) {
      Index t = detail::other_index(si, sj);
      r = out.bracket_left(get(sj, t), E(t, si), E(m, n), note);
    } else {
      r = out.bracket_left(get(m, sj), E(sj, n), E(m, n), note);
    }
    have.emplace(std::make_pair(m, n), r);
    return r;
  };

  std::vector<std::pair<Scalar, StepRef>> terms;
  std::map<Index, Scalar> diag;
  for (const auto& [r, s] : cf.fr) {
    if (!s.at(r).is_zero()) diag.emplace(r, s.at(r));
    SeqDesc off = s.with_entry(r, Scalar::zero(f));
    if (off.is_zero()) continue;
    if (off.has_finite_support()) {
      for (const auto& [c, v] : off.finite_entries()) terms.emplace_back(v, get(r, c));
    } else {
      // [-row(q, t), E_rq] = row(r, t) when t(r) = 0.
      Index q = r == 1 ? 2 : 1;
      StepRef erq = get(r, q);
      StepRef rr = out.bracket_right(mat::scale(-Scalar::one(f), mat::row(q, off)), erq, mat::row(r, off),
                                     "infinite row " + std::to_string(r));
      terms.emplace_back(Scalar::one(f), rr);
    }
  }
  if (!diag.empty()) {
    Index r0 = diag.rbegin()->first;
    for (const auto& [r, c] : diag) {
      if (r == r0) continue;
      StepRef h = out.bracket_left(get(r, r0), E(r0, r), mat::sub(E(r, r), E(r0, r0)),
                                   "E_" + detail::idx(r, r) + " - E_" + detail::idx(r0, r0));
      terms.emplace_back(c, h);
    }
  }
  if (terms.empty()) return out;
  if (terms.size() == 1 && terms.front().first.is_one() && out.value(terms.front().second) == b) return out;
  out.combine(std::move(terms), b, "linear combination");
  return out;
}

/// First off-diagonal nonzero entry of a finite-row matrix, by rows.
inline std::optional<std::pair<Index, Index>> fr_pivot(const CanonicalForm& cf) {
  for (const auto& [r, s] : cf.fr) {
    if (auto c = s.with_entry(r, Scalar::zero(s.field())).first_nonzero()) return std::make_pair(r, *c);
  }
  return std::nullopt;
}

/// Certificate that a nonzero element of sl_fr generates B.
inline BracketChain slfr_certificate(const MatExpr& a, const MatExpr& b) {
  CanonicalForm cf = normalize(a);
  if (cf.is_zero()) throw Error(Errc::InvalidArgument, "seed is zero");
  if (!leq(classify(cf), IdealName::GlFr)) throw Error(Errc::NotInGlFr, "seed is not finite-row");
  BracketChain out{a, {}, a};
  if (auto p = fr_pivot(cf)) {
    out.append(eij_from_offdiag(a, p->first, p->second));
  } else {
    // Diagonal with finite support: two distinct diagonal entries exist.
    Index i = cf.fr.begin()->first, j = cf.max_fr_row() + 1;
    out.append(eij_from_diag(a, i, j));
  }
  const auto& e = out.final_value().as<node::Basis>();
  out.append(express_in_slfr(b, e.i, e.j));
  return out;
}

// ---------------------------------------------------------------------------
// From a matrix outside d_sc + gl_fr to the superdiagonal shift.

struct DiagExtraction {
  MatExpr d;
  BracketChain chain;
};

/// Extracts a diagonal matrix with infinitely many jumps from A.
inline DiagExtraction extract_diag(const MatExpr& a) {
  Field f = a.field();
  detail::require_inverses(f);
  CanonicalForm cf = normalize(a);
  if (cf.tail.empty()) throw Error(Errc::UnsupportedTail, "matrix lies in d_sc + gl_fr");

  const node::Shift* band = nullptr;
  Index w = 0;
  for (const auto& t : cf.tail) {
    if (!t.is<node::Shift>()) continue;
    const auto& s = t.as<node::Shift>();
    w = std::max(w, s.k < 0 ? -s.k : s.k);
    if (!band || (band->k < 0 && s.k > 0)) band = &s;
  }

  if (!band) {
    // Only a diagonal tail: strip the finitely many off-diagonal rows.
    BracketChain out{a, {}, a};
    std::map<Index, SeqDesc> off;
    for (const auto& [r, s] : cf.fr) {
      SeqDesc o = s.with_entry(r, Scalar::zero(f));
      if (!o.is_zero()) off.emplace(r, o);
    }
    if (off.empty()) return {a, out};
    CanonicalForm oc{Scalar::zero(f), off, {}, Scalar::zero(f)};
    MatExpr offdiag = oc.to_expr();
    auto p = fr_pivot(cf);
    out.append(eij_from_offdiag(a, p->first, p->second));
    const auto& e = out.final_value().as<node::Basis>();
    StepRef o = out.append(express_in_slfr(offdiag, e.i, e.j));
    MatExpr d = detail::closed(mat::sub(a, offdiag));
    out.combine({{Scalar::one(f), kSeed}, {-Scalar::one(f), o}}, d, "A minus its off-diagonal part");
    out.target = d;
    return {d, out};
  }

  const Index k0 = band->k, m = k0 < 0 ? -k0 : k0;
  const Index period = band->w.period_length();
  Index step = period;
  while (step <= 2 * w + 4) step += period;
  Index i0 = *band->w.first_nonzero(cf.max_fr_row() + w + 3);
  Index j0 = i0 + k0;

  IndexSet rows_i = IndexSet::progression(i0, step), rows_j = IndexSet::progression(j0, step);
  MatExpr pi = mat::diag(rows_i.indicator(Scalar::one(f)));
  MatExpr pj = mat::diag(rows_j.indicator(Scalar::one(f)));
  MatExpr s = mat::superdiagonal(f);
  MatExpr st = mat::shift(-1, IndexSet::all(), SeqDesc::constant(Scalar::one(f)));
  auto progress = [&](Index first) { return IndexSet::progression(first, step); };
  auto br = [](const MatExpr& x, const MatExpr& y) { return detail::closed(mat::bracket(x, y)); };

  BracketChain out{a, {}, a};
  StepRef r1 = out.bracket_right(pi, kSeed, br(pi, a), "rows I minus columns I");
  StepRef r2 = out.bracket_left(r1, pj, br(out.value(r1), pj), "entries between I and J");
  MatExpr d;
  if (k0 > 0) {
    StepRef r3 = out.bracket_right(s, r2, br(s, out.value(r2)), "bracket with S");
    MatExpr pm = mat::diag(progress(i0 - 1).indicator(Scalar::one(f)));
    StepRef r4 = out.bracket_right(pm, r3, br(pm, out.value(r3)), "isolate rows I-1");
    MatExpr back = mat::shift(-(m + 1), rows_j, SeqDesc::constant(Scalar::one(f)));
    d = br(out.value(r4), back);
    out.bracket_left(r4, back, d, "diagonal with jumps at I-1 and J");
  } else {
    StepRef r3 = out.bracket_left(r2, st, br(out.value(r2), st), "bracket with the transpose of S");
    MatExpr pm = mat::diag(progress(j0 - 1).indicator(Scalar::one(f)));
    StepRef r4 = out.bracket_left(r3, pm, br(out.value(r3), pm), "isolate columns J-1");
    MatExpr back = mat::shift(m + 1, progress(j0 - 1), SeqDesc::constant(Scalar::one(f)));
    d = br(back, out.value(r4));
    out.bracket_right(back, r4, d, "diagonal with jumps at J-1 and I");
  }
  out.target = d;
  return {d, out};
}

struct SuperdiagResult {
  IndexSet h;
  BracketChain chain;
};

/// [D, sum over H of (d_i - d_{i+1})^-1 E_{i,i+1}] = sum over H of E_{i,i+1}.
inline SuperdiagResult superdiag_from_diag(const MatExpr& dm) {
  Field f = dm.field();
  detail::require_inverses(f);
  auto d = detail::diagonal_sequence(normalize(dm));
  if (!d) throw Error(Errc::NotDiagonal, "matrix has off-diagonal entries");
  SeqDesc gaps = *d - d->shifted(1);
  IndexSet h = IndexSet::support(gaps);
  if (!h.is_infinite()) throw Error(Errc::FiniteDisagreement, "diagonal is eventually constant");
  MatExpr partner = mat::shift(1, h, detail::pointwise_inverse(gaps));
  MatExpr target = mat::shift(1, h, SeqDesc::constant(Scalar::one(f)));
  BracketChain out{dm, {}, target};
  out.bracket_left(kSeed, partner, target, "divide by the diagonal gaps");
  return {h, out};
}

/// Fill set for H: n enters when n-1 and n are outside H and n-1 did not enter.
inline IndexSet enlarge_fill(const IndexSet& h) {
  const auto& bits = h.bits();
  return transduce(static_cast<Index>(bits.prefix_length()) + 1, static_cast<Index>(bits.period_length()), false,
                   [&](bool& prev, Index n) {
                     bool z = n >= 2 && !h.contains(n - 1) && !h.contains(n) && !prev;
                     prev = z;
                     return z;
                   });
}

struct EnlargeResult {
  IndexSet g;
  BracketChain chain;
};

/// From sum over H of E_{i,i+1} to the same sum over a superset G whose
/// complement has no two consecutive elements.
inline EnlargeResult enlarge_set(const IndexSet& h, Field f) {
  if (!h.is_infinite()) throw Error(Errc::NotInfinite, "H is finite");
  const Scalar one = Scalar::one(f);
  MatExpr seed = mat::shift(1, h, SeqDesc::constant(one));
  IndexSet z = enlarge_fill(h);
  BracketChain out{seed, {}, seed};
  if (z.is_empty()) return {h, out};
  IndexSet g = h | z;
  MatExpr into = mat::match(f, z, h, 0, 0, false);
  StepRef s1 = out.bracket_right(into, kSeed, mat::match(f, z, h, 0, 1, false), "route Z through f into H");
  MatExpr back = mat::match(f, z, h, 1, 1, true);
  MatExpr fill = mat::shift(1, z, SeqDesc::constant(one));
  StepRef s2 = out.bracket_left(s1, back, fill, "return to the superdiagonal over Z");
  MatExpr target = mat::shift(1, g, SeqDesc::constant(one));
  out.combine({{one, kSeed}, {one, s2}}, target, "H and Z together");
  out.target = target;
  return {g, out};
}

/// From sum over G of E_{i,i+1} (gap property) to S.
inline BracketChain complete_superdiag(const IndexSet& g0, Field f) {
  if (!g0.complement_has_no_adjacent_pair()) {
    throw Error(Errc::GapPropertyViolated, "complement of G contains two consecutive indices");
  }
  const Scalar one = Scalar::one(f);
  auto band = [&](const IndexSet& x) { return mat::shift(1, x, SeqDesc::constant(one)); };
  BracketChain out{band(g0), {}, mat::superdiagonal(f)};
  if (g0.is_all()) return out;

  IndexSet g = g0;
  StepRef cur = kSeed;
  if (!g.contains(1)) {
    Index first = *g.next_member(1);
    BracketChain side{band(g), {}, band(g)};
    side.append(eij_from_offdiag(band(g), first, first + 1));
    StepRef e12 = side.append(express_in_slfr(mat::basis(f, 1, 2), first, first + 1));
    g = g | IndexSet::finite({1});
    side.combine({{one, kSeed}, {one, e12}}, band(g), "add E_12");
    side.target = band(g);
    cur = out.append(side);
    out.target = mat::superdiagonal(f);
  }

  IndexSet gaps = g.complement();
  const auto& bits = gaps.bits();
  IndexSet odd = transduce(static_cast<Index>(bits.prefix_length()), static_cast<Index>(bits.period_length()), false,
                           [&](bool& seen_odd, Index n) {
                             if (!gaps.contains(n)) return false;
                             seen_odd = !seen_odd;
                             return seen_odd;
                           });
  for (const IndexSet& z : {odd, gaps - odd}) {
    if (z.is_empty()) continue;
    MatExpr down = mat::shift(-1, z, SeqDesc::constant(one));
    MatExpr jump = mat::diag(z.indicator(one) - z.translated(-1).indicator(one));
    StepRef r1 = out.bracket_right(down, cur, jump, "diagonal jumps around the gaps");
    StepRef r2 = out.bracket_left(r1, band(z), band(z), "superdiagonal over the gaps");
    g = g | z;
    cur = out.combine({{one, cur}, {one, r2}}, g.is_all() ? mat::superdiagonal(f) : band(g), "close the gaps");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Single-bracket solutions.

/// X with [X, S] = A and zero first row. Finitely supported A gets a closed
/// band form, everything else the lazy solution.
inline MatExpr solve_shift_bracket(const MatExpr& a) {
  Field f = a.field();
  if (a.is<node::Zero>()) return mat::zero(f);
  CanonicalForm cf;
  try {
    cf = normalize(a);
  } catch (const Error& e) {
    if (e.code() != Errc::NotNormalizable) throw;
    return mat::shift_solve(a);
  }
  if (!cf.tail.empty() || !cf.alpha.is_zero() || !cf.is_row_finite()) return mat::shift_solve(a);
  // Entry a_rc contributes -a_rc along (r+1+t, c+t), t >= 0.
  std::vector<MatExpr> terms;
  for (const auto& [r, s] : cf.fr) {
    for (const auto& [c, v] : s.finite_entries()) {
      Index k = c - r - 1;
      IndexSet below = IndexSet::from(r + 1);
      terms.push_back(k == 0 ? mat::diag(below.indicator(-v)) : mat::shift(k, below, SeqDesc::constant(-v)));
    }
  }
  return mat::sum(std::move(terms), f);
}

struct PerfectWitness {
  MatExpr x, s;
};

inline PerfectWitness perfect_witness(const MatExpr& a) {
  return {solve_shift_bracket(a), mat::superdiagonal(a.field())};
}

struct CenterVerdict {
  bool central = false;
  std::optional<MatExpr> witness;  // B with [A, B] != 0
};

inline CenterVerdict center_witness(const MatExpr& a) {
  Field f = a.field();
  CanonicalForm cf = normalize(a);
  IdealName l = classify(cf);
  if (l == IdealName::Zero || l == IdealName::Dsc) return {true, std::nullopt};
  // Every structural feature repeats within this many rows and columns.
  Index bound = cf.max_fr_row() + 2;
  for (const auto& [r, s] : cf.fr) bound = std::max(bound, s.prefix_length() + s.period_length() + 2);
  for (const auto& t : cf.tail) {
    if (t.is<node::Shift>()) {
      const auto& sh = t.as<node::Shift>();
      bound = std::max(bound, cf.max_fr_row() + (sh.k < 0 ? -sh.k : sh.k) + sh.w.period_length() + 2);
    } else {
      bound = std::max(bound, cf.max_fr_row() + t.as<node::Diag>().s.period_length() + 2);
    }
  }
  DenseBlock w = window(a, bound + 1, bound + 1);
  for (Index i = 1; i <= bound; ++i) {
    for (Index j = 1; j <= bound; ++j) {
      if (i != j && !w.at(i, j).is_zero()) return {false, mat::basis(f, j, j)};
    }
  }
  for (Index i = 1; i <= bound; ++i) {
    if (!(w.at(i, i) == w.at(i + 1, i + 1))) return {false, mat::basis(f, i, i + 1)};
  }
  throw Error(Errc::InvalidArgument, "no witness found within the structural bound");
}

// ---------------------------------------------------------------------------
// Composite certificate: a matrix outside d_sc + gl_fr generates everything.

/// Chain from A through D, the partial superdiagonals and S, closed by
/// [solve(target), S] = target.
inline BracketChain generates_everything(const MatExpr& a, const MatExpr& target) {
  Field f = a.field();
  DiagExtraction ex = extract_diag(a);
  BracketChain out = ex.chain;
  SuperdiagResult sd = superdiag_from_diag(ex.d);
  out.append(sd.chain);
  EnlargeResult en = enlarge_set(sd.h, f);
  out.append(en.chain);
  StepRef s = out.append(complete_superdiag(en.g, f));
  MatExpr x = solve_shift_bracket(target);
  out.bracket_right(x, s, target, "single bracket with S");
  out.target = target;
  return out;
}

}  // namespace glcf
