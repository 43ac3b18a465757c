#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "glcf/normal_form.hpp"

namespace glcf {

/// ad(inner) plus a central part: A -> sigma(diag A) * E, with sigma given by
/// a finite table over the diagonal coordinates E_kk.
struct DerivationVal {
  MatExpr inner;
  std::map<Index, Scalar> sigma;
  bool zero_extension = true;  // sigma(E_kk) = 0 past the table

  Field field() const { return inner.field(); }
  Index table_bound() const { return sigma.empty() ? 0 : sigma.rbegin()->first; }
  bool has_central_part() const {
    for (const auto& [k, v] : sigma) {
      if (!v.is_zero()) return true;
    }
    return false;
  }
};

namespace detail {
/// Diagonal of a normalizable matrix as a sequence.
inline SeqDesc diagonal_of(const CanonicalForm& cf) {
  SeqDesc d = SeqDesc::constant(cf.alpha);
  for (const auto& t : cf.tail) {
    if (t.is<node::Diag>()) d = d + t.as<node::Diag>().s;
  }
  for (const auto& [r, s] : cf.fr) d = d + SeqDesc::unit(cf.alpha.field(), r).scaled(s.at(r));
  return d;
}
}  // namespace detail

inline MatExpr apply(const DerivationVal& d, const MatExpr& a) {
  Field f = d.field();
  require_same_field(f, a.field());
  std::vector<MatExpr> terms;
  if (!d.inner.is<node::Zero>()) terms.push_back(mat::bracket(d.inner, a));
  if (d.has_central_part()) {
    SeqDesc diag = detail::diagonal_of(normalize(a));
    Index bound = d.table_bound();
    if (!d.zero_extension) {
      if (!diag.zeroed_through(bound).is_zero()) {
        throw Error(Errc::ProbeExceeded, "diagonal reaches past index " + std::to_string(bound));
      }
    }
    Scalar c = Scalar::zero(f);
    for (const auto& [k, v] : d.sigma) c += v * diag.at(k);
    if (!c.is_zero()) terms.push_back(mat::scalar(c));
  }
  return mat::sum(std::move(terms), f);
}

/// A derivation given only through its action.
struct DerivationOracle {
  std::function<MatExpr(const MatExpr&)> apply;
  Index locality_bound = 0;
  Field field;
  std::string name;
};

namespace oracles {
inline DerivationOracle from_value(DerivationVal d, std::string name = "value") {
  Field f = d.field();
  Index bound = d.table_bound();
  return {[d = std::move(d)](const MatExpr& a) { return glcf::apply(d, a); }, bound, f, std::move(name)};
}
inline DerivationOracle inner(const MatExpr& b) { return from_value(DerivationVal{b, {}, true}, "ad"); }
inline DerivationOracle zero(Field f) {
  return {[f](const MatExpr&) { return mat::zero(f); }, 0, f, "zero"};
}
/// X -> X; linear but not Leibniz.
inline DerivationOracle identity(Field f) {
  return {[](const MatExpr& a) { return a; }, 0, f, "identity"};
}
}  // namespace oracles

struct LeibnizVerdict {
  bool pass = true;
  std::optional<std::size_t> failed_pair;
  std::optional<std::pair<Index, Index>> entry;

  explicit operator bool() const noexcept { return pass; }
};

inline LeibnizVerdict check_leibniz(const DerivationOracle& d, const std::vector<std::pair<MatExpr, MatExpr>>& pairs,
                                    Index size) {
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& [x, y] = pairs[k];
    DenseBlock lhs = window(d.apply(mat::bracket(x, y)), size, size);
    DenseBlock rhs = window(mat::bracket(d.apply(x), y) + mat::bracket(x, d.apply(y)), size, size);
    if (auto at = lhs.first_difference(rhs)) return {false, k, at};
  }
  return {};
}

inline LeibnizVerdict check_leibniz(const DerivationVal& d, const std::vector<std::pair<MatExpr, MatExpr>>& pairs,
                                    Index size) {
  return check_leibniz(oracles::from_value(d), pairs, size);
}

struct ProbeResidual {
  std::string probe;
  bool vanishes = true;
  std::optional<std::pair<Index, Index>> first_nonzero;
};

struct DecompositionReport {
  Index probe_bound = 0;
  Index window = 0;
  std::size_t leibniz_pairs = 0;
  bool diagonal_antisymmetry = true;   // h^(j)_ij + h^(i)_ij = 0
  bool offdiagonal_antisymmetry = true;  // x_ij + x_ji = 0
  std::vector<ProbeResidual> residuals;

  bool all_residuals_vanish() const {
    for (const auto& r : residuals) {
      if (!r.vanishes) return false;
    }
    return true;
  }
};

struct Decomposition {
  MatExpr inner;
  std::map<Index, Scalar> sigma;
  DecompositionReport report;

  DerivationVal value() const { return {inner, sigma, true}; }
};

namespace detail {

/// d(1) = 0, d(i+1) = d(i) - x(i). Eventually periodic when the periodic
/// part of x sums to zero over a period (always true after p periods in F_p).
inline SeqDesc negated_partial_sums(const SeqDesc& x) {
  Field f = x.field();
  Index start = x.prefix_length() + 1, period = x.period_length();
  Scalar drift = Scalar::zero(f);
  for (Index i = start; i < start + period; ++i) drift += x.at(i);
  if (!drift.is_zero()) {
    if (f.kind() != FieldKind::Prime) {
      throw Error(Errc::ProbeInsufficient, "diagonal part grows without bound; not eventually periodic");
    }
    period *= static_cast<Index>(f.modulus());
  }
  EventuallyPeriodic<Scalar>::check_length(static_cast<std::size_t>(start + period));
  std::vector<Scalar> d{Scalar::zero(f)};
  for (Index i = 1; i < start + period; ++i) d.push_back(d.back() - x.at(i));
  return SeqDesc(f, EventuallyPeriodic<Scalar>::generate(static_cast<std::size_t>(start),
                                                         static_cast<std::size_t>(period),
                                                         [&](Index i) { return d[static_cast<std::size_t>(i - 1)]; }));
}

inline std::optional<std::pair<Index, Index>> first_nonzero(const DenseBlock& b) {
  return b.first_difference(DenseBlock(b.field(), b.rows(), b.cols()));
}

}  // namespace detail

/// Recovers B with phi = ad B + central from probes E_kk (k <= n),
/// E_{i,i+1} (i < n) and one probe at S.
inline Decomposition decompose(const DerivationOracle& phi, Index n) {
  Field f = phi.field;
  if (n < 2) throw Error(Errc::InvalidArgument, "probe bound must be at least 2");
  const Index size = std::max(n + 2, phi.locality_bound + 2);
  auto E = [&](Index i, Index j) { return mat::basis(f, i, j); };

  Decomposition out;
  out.report.probe_bound = n;
  out.report.window = size;

  // Leibniz on basis pairs that exercise diagonal and off-diagonal probes.
  std::vector<std::pair<MatExpr, MatExpr>> pairs;
  for (Index i = 1; i <= n; ++i) {
    for (Index j = 1; j <= n; ++j) {
      pairs.emplace_back(E(i, i), E(j, j));
      if (j < n) pairs.emplace_back(E(i, i), E(j, j + 1));
    }
    if (i < n) {
      pairs.emplace_back(E(i, i + 1), E(i + 1, i));
      if (i + 1 < n) pairs.emplace_back(E(i, i + 1), E(i + 1, i + 2));
    }
  }
  out.report.leibniz_pairs = pairs.size();
  if (auto v = check_leibniz(phi, pairs, size); !v) {
    throw Error(Errc::NotADerivation, "Leibniz rule fails on probe pair " + std::to_string(*v.failed_pair) +
                                          " at (" + std::to_string(v.entry->first) + "," +
                                          std::to_string(v.entry->second) + ")");
  }

  // h^(k) = phi(E_kk), nonzero only in row k, column k and on the diagonal.
  std::vector<MatExpr> h(static_cast<std::size_t>(n + 1));
  std::vector<DenseBlock> hw;
  hw.reserve(static_cast<std::size_t>(n));
  for (Index k = 1; k <= n; ++k) {
    h[static_cast<std::size_t>(k)] = phi.apply(E(k, k));
    DenseBlock w = window(h[static_cast<std::size_t>(k)], size, size);
    for (Index i = 1; i <= size; ++i) {
      for (Index j = 1; j <= size; ++j) {
        if (i != j && i != k && j != k && !w.at(i, j).is_zero()) {
          throw Error(Errc::SparsityViolated, "phi(E_" + std::to_string(k) + std::to_string(k) + ") has entry (" +
                                                  std::to_string(i) + "," + std::to_string(j) + ")");
        }
      }
    }
    hw.push_back(std::move(w));
  }
  auto hval = [&](Index k, Index i, Index j) -> const Scalar& { return hw[static_cast<std::size_t>(k - 1)].at(i, j); };
  for (Index i = 1; i <= n; ++i) {
    for (Index j = 1; j <= n; ++j) {
      if (i != j && !(hval(j, i, j) + hval(i, i, j)).is_zero()) {
        out.report.diagonal_antisymmetry = false;
        throw Error(Errc::NotADerivation, "h^(j)_ij + h^(i)_ij != 0 at (" + std::to_string(i) + "," +
                                              std::to_string(j) + ")");
      }
    }
  }

  // A: row i is minus row i of h^(i); below the probed rows column j comes
  // from column j of h^(j).
  std::vector<MatExpr> parts;
  std::map<std::pair<Index, Index>, Scalar> lower;
  for (Index i = 1; i <= n; ++i) {
    const MatExpr& hi = h[static_cast<std::size_t>(i)];
    CanonicalForm cf = normalize(hi);
    for (const auto& t : cf.tail) {
      if (t.is<node::Shift>()) throw Error(Errc::SparsityViolated, "phi(E_kk) has infinitely many off-diagonal rows");
    }
    if (auto it = cf.fr.find(i); it != cf.fr.end()) {
      SeqDesc row = -it->second.with_entry(i, Scalar::zero(f));
      if (!row.is_zero()) parts.push_back(mat::row(i, row));
    }
    for (const auto& [r, v] : column(hi, i)) {
      if (r > n) lower.emplace(std::make_pair(r, i), v);
    }
  }
  if (!lower.empty()) parts.push_back(mat::finite(f, lower));
  MatExpr a = mat::sum(parts, f);

  // psi = phi - ad A acts on the superdiagonal as a diagonal derivation.
  auto psi = [&](const MatExpr& x) { return phi.apply(x) - mat::bracket(a, x); };
  MatExpr s = mat::superdiagonal(f);
  BandForm ps = to_band_form(psi(s));
  SeqDesc x = SeqDesc::zero(f);
  if (auto it = ps.bands.find(1); it != ps.bands.end()) x = it->second;
  for (const auto& [r, row] : ps.rows) x = x + SeqDesc::unit(f, r).scaled(row.at(r + 1));
  if (!normalize(psi(s) - mat::shift(1, IndexSet::all(), x)).is_zero()) {
    throw Error(Errc::ProbeInsufficient, "(phi - ad A)(S) is not superdiagonal; raise the probe bound");
  }
  for (Index i = 1; i < n; ++i) {
    DenseBlock got = window(psi(E(i, i + 1)), size, size);
    DenseBlock want = window(mat::scale(x.at(i), E(i, i + 1)), size, size);
    if (got.first_difference(want)) {
      throw Error(Errc::ProbeInsufficient, "probe E_" + std::to_string(i) + "," + std::to_string(i + 1) +
                                               " disagrees with the S probe");
    }
  }
  for (Index i = 1; i <= n; ++i) {
    for (Index j = i + 1; j <= n; ++j) {
      Scalar xij = entry(psi(E(i, j)), i, j), xji = entry(psi(E(j, i)), j, i);
      if (!(xij + xji).is_zero()) {
        out.report.offdiagonal_antisymmetry = false;
        throw Error(Errc::NotADerivation, "x_ij + x_ji != 0 at (" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }

  SeqDesc d = detail::negated_partial_sums(x);
  CanonicalForm bf = normalize(a + mat::diag(d));
  bf.alpha = Scalar::zero(f);
  out.inner = bf.to_expr();

  // Central table from the diagonal probes.
  for (Index k = 1; k <= n; ++k) {
    CanonicalForm r = normalize(h[static_cast<std::size_t>(k)] - mat::bracket(out.inner, E(k, k)));
    if (!r.alpha.is_zero()) out.sigma.emplace(k, r.alpha);
  }

  DerivationVal fit = out.value();
  auto residual = [&](const std::string& name, const MatExpr& p) {
    DenseBlock w = window(phi.apply(p) - apply(fit, p), size, size);
    auto at = detail::first_nonzero(w);
    out.report.residuals.push_back({name, !at.has_value(), at});
  };
  for (Index k = 1; k <= n; ++k) residual("E_" + std::to_string(k) + "," + std::to_string(k), E(k, k));
  for (Index i = 1; i < n; ++i) {
    residual("E_" + std::to_string(i) + "," + std::to_string(i + 1), E(i, i + 1));
    residual("E_" + std::to_string(i + 1) + "," + std::to_string(i), E(i + 1, i));
  }
  residual("S", s);
  return out;
}

}  // namespace glcf
