#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "glcf/field.hpp"
#include "glcf/sequence.hpp"

namespace glcf {

class MatExpr;

/// Finite sparse column: row index -> nonzero value.
using Column = std::map<Index, Scalar>;

namespace node {
struct Zero {};
struct ScalarE {
  Scalar alpha;
};
struct Basis {
  Index i, j;
};
struct FiniteLit {
  std::map<std::pair<Index, Index>, Scalar> entries;
};
struct Diag {
  SeqDesc s;
};
/// Sum over i in h with i + k >= 1 of w(i) E_{i,i+k}.
struct Shift {
  Index k;
  IndexSet h;
  SeqDesc w;
};
/// One infinite row: entry (r, j) = s(j).
struct RowMat {
  Index r;
  SeqDesc s;
};
struct Sum {
  std::vector<MatExpr> terms;
};
struct Scale {
  Scalar c;
  std::shared_ptr<const MatExpr> e;
};
struct Prod {
  std::shared_ptr<const MatExpr> left, right;
};
struct Bracket {
  std::shared_ptr<const MatExpr> left, right;
};
/// Sum over i in domain of E_{i + row_offset, f(i) + col_offset}, where f is
/// the greedy strictly increasing map into `codomain` with f(i) > i
/// (transposed: E_{f(i) + col_offset, i + row_offset}).
struct Match {
  IndexSet domain, codomain;
  Index row_offset = 0, col_offset = 0;
  bool transposed = false;
};
/// The solution X of [X, S] = a, S = sum of E_{i,i+1}, with first row zero.
struct ShiftSolve {
  std::shared_ptr<const MatExpr> a;
};
}  // namespace node

enum class NodeKind { Zero, ScalarE, Basis, FiniteLit, Diag, Shift, RowMat, Sum, Scale, Prod, Bracket, Match, ShiftSolve };

/// Immutable symbolic column-finite N x N matrix. Cheap to copy (shared
/// node), safe to share across threads.
class MatExpr {
 public:
  using Payload = std::variant<node::Zero, node::ScalarE, node::Basis, node::FiniteLit, node::Diag, node::Shift,
                               node::RowMat, node::Sum, node::Scale, node::Prod, node::Bracket, node::Match,
                               node::ShiftSolve>;

  struct Node {
    Field field;
    Payload payload;
  };

  MatExpr() : MatExpr(Field::rationals(), node::Zero{}) {}
  MatExpr(Field f, Payload p) : node_(std::make_shared<const Node>(Node{f, std::move(p)})) {}

  Field field() const noexcept { return node_->field; }
  const Payload& payload() const noexcept { return node_->payload; }
  NodeKind kind() const noexcept { return static_cast<NodeKind>(node_->payload.index()); }
  const Node* id() const noexcept { return node_.get(); }

  template <class T>
  const T& as() const {
    return std::get<T>(node_->payload);
  }
  template <class T>
  bool is() const noexcept {
    return std::holds_alternative<T>(node_->payload);
  }

 private:
  std::shared_ptr<const Node> node_;
};

bool operator==(const MatExpr& a, const MatExpr& b);
inline bool operator!=(const MatExpr& a, const MatExpr& b) { return !(a == b); }

// ---------------------------------------------------------------------------
// Constructors. They check indices and field agreement and never build a
// ScalarE(0), an empty FiniteLit or a one-term Sum.

namespace mat {

inline std::shared_ptr<const MatExpr> share(const MatExpr& e) { return std::make_shared<const MatExpr>(e); }

inline void check_index(Index i, const char* what) {
  if (i < 1) throw Error(Errc::InvalidArgument, std::string(what) + " index " + std::to_string(i) + " < 1");
}

inline MatExpr zero(Field f) { return MatExpr(f, node::Zero{}); }
inline MatExpr scalar(const Scalar& a) {
  if (a.is_zero()) return zero(a.field());
  return MatExpr(a.field(), node::ScalarE{a});
}
inline MatExpr identity(Field f) { return scalar(Scalar::one(f)); }
inline MatExpr basis(Field f, Index i, Index j) {
  check_index(i, "row");
  check_index(j, "column");
  return MatExpr(f, node::Basis{i, j});
}
inline MatExpr finite(Field f, const std::map<std::pair<Index, Index>, Scalar>& entries) {
  node::FiniteLit lit;
  for (const auto& [ij, v] : entries) {
    check_index(ij.first, "row");
    check_index(ij.second, "column");
    require_same_field(f, v.field());
    if (!v.is_zero()) lit.entries.emplace(ij, v);
  }
  if (lit.entries.empty()) return zero(f);
  return MatExpr(f, std::move(lit));
}
inline MatExpr diag(const SeqDesc& s) {
  if (s.is_zero()) return zero(s.field());
  return MatExpr(s.field(), node::Diag{s});
}
inline MatExpr shift(Index k, const IndexSet& h, const SeqDesc& w) {
  if (k == 0) throw Error(Errc::InvalidArgument, "shift offset must be nonzero");
  return MatExpr(w.field(), node::Shift{k, h, w});
}
inline MatExpr shift(Field f, Index k) { return shift(k, IndexSet::all(), SeqDesc::constant(Scalar::one(f))); }
/// S = sum over i of E_{i,i+1}.
inline MatExpr superdiagonal(Field f) { return shift(f, 1); }
inline MatExpr row(Index r, const SeqDesc& s) {
  check_index(r, "row");
  return MatExpr(s.field(), node::RowMat{r, s});
}
inline MatExpr sum(std::vector<MatExpr> terms, Field f) {
  for (const auto& t : terms) require_same_field(f, t.field());
  if (terms.empty()) return zero(f);
  if (terms.size() == 1) return terms.front();
  return MatExpr(f, node::Sum{std::move(terms)});
}
inline MatExpr scale(const Scalar& c, const MatExpr& e) {
  require_same_field(c.field(), e.field());
  return MatExpr(e.field(), node::Scale{c, share(e)});
}
inline MatExpr prod(const MatExpr& l, const MatExpr& r) {
  require_same_field(l.field(), r.field());
  return MatExpr(l.field(), node::Prod{share(l), share(r)});
}
inline MatExpr bracket(const MatExpr& l, const MatExpr& r) {
  require_same_field(l.field(), r.field());
  return MatExpr(l.field(), node::Bracket{share(l), share(r)});
}
inline MatExpr match(Field f, const IndexSet& domain, const IndexSet& codomain, Index row_offset, Index col_offset,
                     bool transposed) {
  if (!codomain.is_infinite() && domain.is_infinite()) {
    throw Error(Errc::InvalidArgument, "match codomain must be infinite");
  }
  return MatExpr(f, node::Match{domain, codomain, row_offset, col_offset, transposed});
}
inline MatExpr shift_solve(const MatExpr& a) { return MatExpr(a.field(), node::ShiftSolve{share(a)}); }

inline MatExpr add(const MatExpr& a, const MatExpr& b) { return sum({a, b}, a.field()); }
inline MatExpr sub(const MatExpr& a, const MatExpr& b) {
  return sum({a, scale(-Scalar::one(b.field()), b)}, a.field());
}

}  // namespace mat

inline MatExpr operator+(const MatExpr& a, const MatExpr& b) { return mat::add(a, b); }
inline MatExpr operator-(const MatExpr& a, const MatExpr& b) { return mat::sub(a, b); }
inline MatExpr operator*(const MatExpr& a, const MatExpr& b) { return mat::prod(a, b); }
inline MatExpr operator*(const Scalar& c, const MatExpr& e) { return mat::scale(c, e); }

inline bool operator==(const MatExpr& a, const MatExpr& b) {
  if (a.id() == b.id()) return true;
  if (!(a.field() == b.field()) || a.kind() != b.kind()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = b.as<T>();
        if constexpr (std::is_same_v<T, node::Zero>) {
          return true;
        } else if constexpr (std::is_same_v<T, node::ScalarE>) {
          return x.alpha == y.alpha;
        } else if constexpr (std::is_same_v<T, node::Basis>) {
          return x.i == y.i && x.j == y.j;
        } else if constexpr (std::is_same_v<T, node::FiniteLit>) {
          return x.entries == y.entries;
        } else if constexpr (std::is_same_v<T, node::Diag>) {
          return x.s == y.s;
        } else if constexpr (std::is_same_v<T, node::Shift>) {
          return x.k == y.k && x.h == y.h && x.w == y.w;
        } else if constexpr (std::is_same_v<T, node::RowMat>) {
          return x.r == y.r && x.s == y.s;
        } else if constexpr (std::is_same_v<T, node::Sum>) {
          return x.terms == y.terms;
        } else if constexpr (std::is_same_v<T, node::Scale>) {
          return x.c == y.c && *x.e == *y.e;
        } else if constexpr (std::is_same_v<T, node::Prod> || std::is_same_v<T, node::Bracket>) {
          return *x.left == *y.left && *x.right == *y.right;
        } else if constexpr (std::is_same_v<T, node::Match>) {
          return x.domain == y.domain && x.codomain == y.codomain && x.row_offset == y.row_offset &&
                 x.col_offset == y.col_offset && x.transposed == y.transposed;
        } else {
          return *x.a == *y.a;
        }
      },
      a.payload());
}

// ---------------------------------------------------------------------------
// Exact evaluation.

/// Dense top-left block of a matrix.
class DenseBlock {
 public:
  DenseBlock(Field f, Index rows, Index cols)
      : field_(f), rows_(rows), cols_(cols),
        data_(static_cast<std::size_t>(rows * cols), Scalar::zero(f)) {}

  Field field() const noexcept { return field_; }
  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  /// 1-based access.
  Scalar& at(Index i, Index j) { return data_[static_cast<std::size_t>((i - 1) * cols_ + (j - 1))]; }
  const Scalar& at(Index i, Index j) const { return data_[static_cast<std::size_t>((i - 1) * cols_ + (j - 1))]; }

  bool is_zero() const {
    for (const auto& v : data_) {
      if (!v.is_zero()) return false;
    }
    return true;
  }

  /// First (row-major) position where the blocks differ.
  std::optional<std::pair<Index, Index>> first_difference(const DenseBlock& o) const {
    for (Index i = 1; i <= rows_; ++i) {
      for (Index j = 1; j <= cols_; ++j) {
        if (!(at(i, j) == o.at(i, j))) return std::make_pair(i, j);
      }
    }
    return std::nullopt;
  }

  friend bool operator==(const DenseBlock& a, const DenseBlock& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  Field field_;
  Index rows_, cols_;
  std::vector<Scalar> data_;
};

/// Column evaluator with a per-instance memo of composite nodes. An instance
/// is not meant to be shared between threads; the expressions it reads are.
class Evaluator {
 public:
  const Column& column(const MatExpr& a, Index j) {
    mat::check_index(j, "column");
    Key key{a.id(), j};
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    Column col = compute(a, j);
    keep_.push_back(a);
    return cache_.emplace(key, std::move(col)).first->second;
  }

  Scalar entry(const MatExpr& a, Index i, Index j) {
    mat::check_index(i, "row");
    const Column& c = column(a, j);
    if (auto it = c.find(i); it != c.end()) return it->second;
    return Scalar::zero(a.field());
  }

  DenseBlock window(const MatExpr& a, Index m, Index n) {
    if (m < 1 || n < 1) throw Error(Errc::InvalidArgument, "window size must be positive");
    DenseBlock out(a.field(), m, n);
    for (Index j = 1; j <= n; ++j) {
      for (const auto& [i, v] : column(a, j)) {
        if (i > m) break;
        out.at(i, j) = v;
      }
    }
    return out;
  }

  /// Structural upper bound on the largest nonzero row of column j.
  Index row_bound(const MatExpr& a, Index j) {
    using namespace node;
    return std::visit(
        [&](const auto& x) -> Index {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Zero>) {
            return 0;
          } else if constexpr (std::is_same_v<T, ScalarE> || std::is_same_v<T, Diag>) {
            return j;
          } else if constexpr (std::is_same_v<T, Basis>) {
            return x.j == j ? x.i : 0;
          } else if constexpr (std::is_same_v<T, FiniteLit>) {
            Index b = 0;
            for (const auto& [ij, v] : x.entries) {
              if (ij.second == j) b = std::max(b, ij.first);
            }
            return b;
          } else if constexpr (std::is_same_v<T, Shift>) {
            return std::max<Index>(j - x.k, 0);
          } else if constexpr (std::is_same_v<T, RowMat>) {
            return x.r;
          } else if constexpr (std::is_same_v<T, Sum>) {
            Index b = 0;
            for (const auto& t : x.terms) b = std::max(b, row_bound(t, j));
            return b;
          } else if constexpr (std::is_same_v<T, Scale>) {
            return row_bound(*x.e, j);
          } else if constexpr (std::is_same_v<T, Prod>) {
            return prod_bound(*x.left, *x.right, j);
          } else if constexpr (std::is_same_v<T, Bracket>) {
            return std::max(prod_bound(*x.left, *x.right, j), prod_bound(*x.right, *x.left, j));
          } else if constexpr (std::is_same_v<T, Match>) {
            if (!x.transposed) return std::max<Index>(j - x.col_offset + x.row_offset, 0);
            Index b = 0;
            for (const auto& [i, v] : column(a, j)) b = std::max(b, i);
            return b;
          } else {
            Index b = 0;
            for (Index c = 1; c <= j; ++c) {
              Index r = row_bound(*x.a, c);
              if (r > 0) b = std::max(b, r + 1 + j - c);
            }
            return b;
          }
        },
        a.payload());
  }

  /// The pairs (i, f(i)) of a Match node with i <= max_i, in increasing order.
  static std::vector<std::pair<Index, Index>> match_pairs(const node::Match& m, Index max_i) {
    std::vector<std::pair<Index, Index>> out;
    Index last = 0;
    for (Index i = 1; i <= max_i; ++i) {
      if (!m.domain.contains(i)) continue;
      auto f = m.codomain.next_member(std::max(i, last) + 1);
      if (!f) break;
      out.emplace_back(i, *f);
      last = *f;
    }
    return out;
  }

 private:
  struct Key {
    const MatExpr::Node* node;
    Index j;
    bool operator==(const Key& o) const noexcept { return node == o.node && j == o.j; }
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      return std::hash<const void*>()(k.node) ^ (std::hash<Index>()(k.j) * 0x9e3779b97f4a7c15ULL);
    }
  };

  static void accumulate(Column& acc, Index i, const Scalar& v) {
    if (v.is_zero()) return;
    auto [it, inserted] = acc.emplace(i, v);
    if (!inserted) {
      it->second += v;
      if (it->second.is_zero()) acc.erase(it);
    }
  }

  Index prod_bound(const MatExpr& l, const MatExpr& r, Index j) {
    Index b = 0;
    for (Index k = 1, top = row_bound(r, j); k <= top; ++k) b = std::max(b, row_bound(l, k));
    return b;
  }

  Column product_column(const MatExpr& l, const MatExpr& r, Index j) {
    Column out;
    Column right = column(r, j);
    for (const auto& [k, b] : right) {
      Column left = column(l, k);
      for (const auto& [i, a] : left) accumulate(out, i, a * b);
    }
    return out;
  }

  Column compute(const MatExpr& a, Index j) {
    using namespace node;
    Field f = a.field();
    return std::visit(
        [&](const auto& x) -> Column {
          using T = std::decay_t<decltype(x)>;
          Column out;
          if constexpr (std::is_same_v<T, Zero>) {
          } else if constexpr (std::is_same_v<T, ScalarE>) {
            out.emplace(j, x.alpha);
          } else if constexpr (std::is_same_v<T, Basis>) {
            if (x.j == j) out.emplace(x.i, Scalar::one(f));
          } else if constexpr (std::is_same_v<T, FiniteLit>) {
            for (const auto& [ij, v] : x.entries) {
              if (ij.second == j) out.emplace(ij.first, v);
            }
          } else if constexpr (std::is_same_v<T, Diag>) {
            accumulate(out, j, x.s.at(j));
          } else if constexpr (std::is_same_v<T, Shift>) {
            Index i = j - x.k;
            if (i >= 1 && x.h.contains(i)) accumulate(out, i, x.w.at(i));
          } else if constexpr (std::is_same_v<T, RowMat>) {
            accumulate(out, x.r, x.s.at(j));
          } else if constexpr (std::is_same_v<T, Sum>) {
            for (const auto& t : x.terms) {
              for (const auto& [i, v] : column(t, j)) accumulate(out, i, v);
            }
          } else if constexpr (std::is_same_v<T, Scale>) {
            for (const auto& [i, v] : column(*x.e, j)) accumulate(out, i, x.c * v);
          } else if constexpr (std::is_same_v<T, Prod>) {
            out = product_column(*x.left, *x.right, j);
          } else if constexpr (std::is_same_v<T, Bracket>) {
            out = product_column(*x.left, *x.right, j);
            for (const auto& [i, v] : product_column(*x.right, *x.left, j)) accumulate(out, i, -v);
          } else if constexpr (std::is_same_v<T, Match>) {
            if (!x.transposed) {
              // f(i) > i, so only i < j - col_offset can reach this column.
              for (const auto& [i, fi] : match_pairs(x, j - x.col_offset)) {
                if (fi + x.col_offset == j && i + x.row_offset >= 1) out.emplace(i + x.row_offset, Scalar::one(f));
              }
            } else {
              Index i = j - x.row_offset;
              if (i >= 1 && x.domain.contains(i)) {
                auto pairs = match_pairs(x, i);
                if (!pairs.empty() && pairs.back().first == i && pairs.back().second + x.col_offset >= 1) {
                  out.emplace(pairs.back().second + x.col_offset, Scalar::one(f));
                }
              }
            }
          } else {
            // x_{m,n} = -sum_t a_{m-1-t, n-t}: column c of a feeds row r + 1 + (j - c).
            for (Index c = 1; c <= j; ++c) {
              for (const auto& [r, v] : column(*x.a, c)) accumulate(out, r + 1 + (j - c), -v);
            }
          }
          return out;
        },
        a.payload());
  }

  std::unordered_map<Key, Column, KeyHash> cache_;
  std::vector<MatExpr> keep_;  // pins cached nodes so their addresses stay unique
};

inline Scalar entry(const MatExpr& a, Index i, Index j) { return Evaluator().entry(a, i, j); }
inline Column column(const MatExpr& a, Index j) { return Evaluator().column(a, j); }
inline DenseBlock window(const MatExpr& a, Index m, Index n) { return Evaluator().window(a, m, n); }

}  // namespace glcf
