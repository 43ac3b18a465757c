#pragma once

#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <utility>
#include <variant>
#include <vector>

#include "glcf/matexpr.hpp"

namespace glcf {

/// Bijection Z -> N: 0, -1, 1, -2, 2, ... -> 1, 2, 3, 4, 5, ...
constexpr Index sigma(Index z) noexcept { return z >= 0 ? 2 * z + 1 : -2 * z; }
constexpr Index sigma_inv(Index n) noexcept { return n % 2 == 1 ? (n - 1) / 2 : -(n / 2); }

/// Two-sided sequence Z -> K: pos(k) is the value at k - 1, neg(k) the value at -k.
struct ZSeq {
  SeqDesc neg, pos;

  static ZSeq constant(const Scalar& c) { return {SeqDesc::constant(c), SeqDesc::constant(c)}; }
  static ZSeq finite(Field f, const std::map<Index, Scalar>& entries) {
    std::map<Index, Scalar> n, p;
    for (const auto& [z, v] : entries) (z >= 0 ? p[z + 1] : n[-z]) = v;
    return {SeqDesc::finite(f, n), SeqDesc::finite(f, p)};
  }
  Field field() const { return pos.field(); }
  const Scalar& at(Index z) const { return z >= 0 ? pos.at(z + 1) : neg.at(-z); }
  friend bool operator==(const ZSeq& a, const ZSeq& b) { return a.neg == b.neg && a.pos == b.pos; }
};

/// Two-sided index set, split like ZSeq.
struct ZSet {
  IndexSet neg, pos;

  static ZSet all() { return {IndexSet::all(), IndexSet::all()}; }
  static ZSet finite(const std::set<Index>& members) {
    std::set<Index> n, p;
    for (Index z : members) (z >= 0 ? p : n).insert(z >= 0 ? z + 1 : -z);
    return {IndexSet::finite(n), IndexSet::finite(p)};
  }
  bool contains(Index z) const { return z >= 0 ? pos.contains(z + 1) : neg.contains(-z); }
  friend bool operator==(const ZSet& a, const ZSet& b) { return a.neg == b.neg && a.pos == b.pos; }
};

class ZMatExpr;

namespace znode {
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
  ZSeq s;
};
/// Sum over i in h of w(i) E_{i,i+k}.
struct Shift {
  Index k;
  ZSet h;
  ZSeq w;
};
struct RowMat {
  Index r;
  ZSeq s;
};
struct Sum {
  std::vector<ZMatExpr> terms;
};
struct Scale {
  Scalar c;
  std::shared_ptr<const ZMatExpr> e;
};
struct Prod {
  std::shared_ptr<const ZMatExpr> left, right;
};
struct Bracket {
  std::shared_ptr<const ZMatExpr> left, right;
};
}  // namespace znode

/// Column-finite Z x Z matrix expression.
class ZMatExpr {
 public:
  using Payload = std::variant<znode::Zero, znode::ScalarE, znode::Basis, znode::FiniteLit, znode::Diag,
                               znode::Shift, znode::RowMat, znode::Sum, znode::Scale, znode::Prod, znode::Bracket>;
  struct Node {
    Field field;
    Payload payload;
  };

  ZMatExpr() : ZMatExpr(Field::rationals(), znode::Zero{}) {}
  ZMatExpr(Field f, Payload p) : node_(std::make_shared<const Node>(Node{f, std::move(p)})) {}

  Field field() const noexcept { return node_->field; }
  const Payload& payload() const noexcept { return node_->payload; }
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

namespace zmat {
inline std::shared_ptr<const ZMatExpr> share(const ZMatExpr& e) { return std::make_shared<const ZMatExpr>(e); }
inline ZMatExpr zero(Field f) { return ZMatExpr(f, znode::Zero{}); }
inline ZMatExpr scalar(const Scalar& a) {
  return a.is_zero() ? zero(a.field()) : ZMatExpr(a.field(), znode::ScalarE{a});
}
inline ZMatExpr basis(Field f, Index i, Index j) { return ZMatExpr(f, znode::Basis{i, j}); }
inline ZMatExpr finite(Field f, const std::map<std::pair<Index, Index>, Scalar>& entries) {
  znode::FiniteLit lit;
  for (const auto& [ij, v] : entries) {
    require_same_field(f, v.field());
    if (!v.is_zero()) lit.entries.emplace(ij, v);
  }
  if (lit.entries.empty()) return zero(f);
  return ZMatExpr(f, std::move(lit));
}
inline ZMatExpr diag(const ZSeq& s) { return ZMatExpr(s.field(), znode::Diag{s}); }
inline ZMatExpr shift(Index k, const ZSet& h, const ZSeq& w) {
  if (k == 0) throw Error(Errc::InvalidArgument, "shift offset must be nonzero");
  return ZMatExpr(w.field(), znode::Shift{k, h, w});
}
inline ZMatExpr row(Index r, const ZSeq& s) { return ZMatExpr(s.field(), znode::RowMat{r, s}); }
inline ZMatExpr sum(std::vector<ZMatExpr> terms, Field f) {
  for (const auto& t : terms) require_same_field(f, t.field());
  if (terms.empty()) return zero(f);
  if (terms.size() == 1) return terms.front();
  return ZMatExpr(f, znode::Sum{std::move(terms)});
}
inline ZMatExpr scale(const Scalar& c, const ZMatExpr& e) {
  require_same_field(c.field(), e.field());
  return ZMatExpr(e.field(), znode::Scale{c, share(e)});
}
inline ZMatExpr prod(const ZMatExpr& l, const ZMatExpr& r) {
  require_same_field(l.field(), r.field());
  return ZMatExpr(l.field(), znode::Prod{share(l), share(r)});
}
inline ZMatExpr bracket(const ZMatExpr& l, const ZMatExpr& r) {
  require_same_field(l.field(), r.field());
  return ZMatExpr(l.field(), znode::Bracket{share(l), share(r)});
}
}  // namespace zmat

inline ZMatExpr operator+(const ZMatExpr& a, const ZMatExpr& b) { return zmat::sum({a, b}, a.field()); }
inline ZMatExpr operator-(const ZMatExpr& a, const ZMatExpr& b) {
  return zmat::sum({a, zmat::scale(-Scalar::one(b.field()), b)}, a.field());
}
inline ZMatExpr operator*(const ZMatExpr& a, const ZMatExpr& b) { return zmat::prod(a, b); }
inline ZMatExpr operator*(const Scalar& c, const ZMatExpr& e) { return zmat::scale(c, e); }

inline bool operator==(const ZMatExpr& a, const ZMatExpr& b) {
  if (!(a.field() == b.field()) || a.payload().index() != b.payload().index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = b.as<T>();
        if constexpr (std::is_same_v<T, znode::Zero>) {
          return true;
        } else if constexpr (std::is_same_v<T, znode::ScalarE>) {
          return x.alpha == y.alpha;
        } else if constexpr (std::is_same_v<T, znode::Basis>) {
          return x.i == y.i && x.j == y.j;
        } else if constexpr (std::is_same_v<T, znode::FiniteLit>) {
          return x.entries == y.entries;
        } else if constexpr (std::is_same_v<T, znode::Diag>) {
          return x.s == y.s;
        } else if constexpr (std::is_same_v<T, znode::Shift>) {
          return x.k == y.k && x.h == y.h && x.w == y.w;
        } else if constexpr (std::is_same_v<T, znode::RowMat>) {
          return x.r == y.r && x.s == y.s;
        } else if constexpr (std::is_same_v<T, znode::Sum>) {
          return x.terms == y.terms;
        } else if constexpr (std::is_same_v<T, znode::Scale>) {
          return x.c == y.c && *x.e == *y.e;
        } else {
          return *x.left == *y.left && *x.right == *y.right;
        }
      },
      a.payload());
}

inline Column zcolumn(const ZMatExpr& a, Index j) {
  using namespace znode;
  Field f = a.field();
  auto acc = [](Column& c, Index i, const Scalar& v) {
    if (v.is_zero()) return;
    auto [it, inserted] = c.emplace(i, v);
    if (!inserted) {
      it->second += v;
      if (it->second.is_zero()) c.erase(it);
    }
  };
  auto product = [&](const ZMatExpr& l, const ZMatExpr& r, const Scalar& sign, Column& out) {
    for (const auto& [k, b] : zcolumn(r, j)) {
      for (const auto& [i, x] : zcolumn(l, k)) acc(out, i, sign * x * b);
    }
  };
  return std::visit(
      [&](const auto& x) -> Column {
        using T = std::decay_t<decltype(x)>;
        Column out;
        if constexpr (std::is_same_v<T, Zero>) {
        } else if constexpr (std::is_same_v<T, ScalarE>) {
          acc(out, j, x.alpha);
        } else if constexpr (std::is_same_v<T, Basis>) {
          if (x.j == j) acc(out, x.i, Scalar::one(f));
        } else if constexpr (std::is_same_v<T, FiniteLit>) {
          for (const auto& [ij, v] : x.entries) {
            if (ij.second == j) acc(out, ij.first, v);
          }
        } else if constexpr (std::is_same_v<T, Diag>) {
          acc(out, j, x.s.at(j));
        } else if constexpr (std::is_same_v<T, Shift>) {
          if (x.h.contains(j - x.k)) acc(out, j - x.k, x.w.at(j - x.k));
        } else if constexpr (std::is_same_v<T, RowMat>) {
          acc(out, x.r, x.s.at(j));
        } else if constexpr (std::is_same_v<T, Sum>) {
          for (const auto& t : x.terms) {
            for (const auto& [i, v] : zcolumn(t, j)) acc(out, i, v);
          }
        } else if constexpr (std::is_same_v<T, Scale>) {
          for (const auto& [i, v] : zcolumn(*x.e, j)) acc(out, i, x.c * v);
        } else if constexpr (std::is_same_v<T, Prod>) {
          product(*x.left, *x.right, Scalar::one(f), out);
        } else {
          product(*x.left, *x.right, Scalar::one(f), out);
          product(*x.right, *x.left, -Scalar::one(f), out);
        }
        return out;
      },
      a.payload());
}

inline Scalar zentry(const ZMatExpr& a, Index i, Index j) {
  Column c = zcolumn(a, j);
  if (auto it = c.find(i); it != c.end()) return it->second;
  return Scalar::zero(a.field());
}

namespace detail {

/// n -> (n odd ? odd(n) : even(n)) as an eventually periodic sequence, where
/// both parts become periodic past `settled` with period `period` (in n).
template <class T, class Odd, class Even>
EventuallyPeriodic<T> interleave(Index settled, Index period, Odd&& odd, Even&& even) {
  if (settled % 2) ++settled;
  if (period % 2) period *= 2;
  return EventuallyPeriodic<T>::generate(static_cast<std::size_t>(settled), static_cast<std::size_t>(period),
                                         [&](Index n) { return n % 2 ? odd(n) : even(n); });
}

inline Index settle(const SeqDesc& s) { return s.prefix_length(); }
inline Index settle(const IndexSet& s) { return static_cast<Index>(s.bits().prefix_length()); }
inline Index cycle(const SeqDesc& s) { return s.period_length(); }
inline Index cycle(const IndexSet& s) { return static_cast<Index>(s.bits().period_length()); }

inline SeqDesc to_n(const ZSeq& s) {
  Index settled = 2 * std::max(settle(s.pos), settle(s.neg)) + 2;
  Index period = 2 * std::lcm(cycle(s.pos), cycle(s.neg));
  return SeqDesc(s.field(), interleave<Scalar>(settled, period, [&](Index n) { return s.at(sigma_inv(n)); },
                                               [&](Index n) { return s.at(sigma_inv(n)); }));
}

inline ZSeq to_z(const SeqDesc& s) {
  Field f = s.field();
  auto part = [&](Index parity) {
    Index settled = s.prefix_length() / 2 + 1, period = s.period_length();
    return SeqDesc(f, EventuallyPeriodic<Scalar>::generate(static_cast<std::size_t>(settled),
                                                           static_cast<std::size_t>(period),
                                                           [&](Index k) { return s.at(2 * k - parity); }));
  };
  return {part(0), part(1)};
}

}  // namespace detail

/// The image of a Z-side expression under E_ij -> E_{sigma(i), sigma(j)}.
inline MatExpr reindex_to_N(const ZMatExpr& a) {
  using namespace znode;
  Field f = a.field();
  return std::visit(
      [&](const auto& x) -> MatExpr {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Zero>) {
          return mat::zero(f);
        } else if constexpr (std::is_same_v<T, ScalarE>) {
          return mat::scalar(x.alpha);
        } else if constexpr (std::is_same_v<T, Basis>) {
          return mat::basis(f, sigma(x.i), sigma(x.j));
        } else if constexpr (std::is_same_v<T, FiniteLit>) {
          std::map<std::pair<Index, Index>, Scalar> m;
          for (const auto& [ij, v] : x.entries) m.emplace(std::make_pair(sigma(ij.first), sigma(ij.second)), v);
          return mat::finite(f, m);
        } else if constexpr (std::is_same_v<T, Diag>) {
          return mat::diag(detail::to_n(x.s));
        } else if constexpr (std::is_same_v<T, RowMat>) {
          return mat::row(sigma(x.r), detail::to_n(x.s));
        } else if constexpr (std::is_same_v<T, Shift>) {
          // Rows x >= 0 with x + k >= 0 land on odd rows with offset 2k, rows
          // x < 0 with x + k < 0 on even rows with offset -2k; the |k| entries
          // crossing zero become a finite literal.
          const Index k = x.k, ak = k < 0 ? -k : k;
          Index settled = 2 * (std::max({detail::settle(x.h.pos), detail::settle(x.h.neg), detail::settle(x.w.pos),
                                         detail::settle(x.w.neg)}) +
                               ak) +
                          2;
          Index period = 2 * std::lcm(std::lcm(detail::cycle(x.h.pos), detail::cycle(x.h.neg)),
                                      std::lcm(detail::cycle(x.w.pos), detail::cycle(x.w.neg)));
          auto upper = [&](Index z) { return z >= 0 && z + k >= 0 && x.h.contains(z); };
          auto lower = [&](Index z) { return z < 0 && z + k < 0 && x.h.contains(z); };
          auto no = [](Index) { return false; };
          IndexSet odd(detail::interleave<bool>(settled, period, [&](Index n) { return upper(sigma_inv(n)); }, no));
          IndexSet even(detail::interleave<bool>(settled, period, no, [&](Index n) { return lower(sigma_inv(n)); }));
          SeqDesc w = detail::to_n(x.w);
          std::vector<MatExpr> terms;
          if (!odd.is_empty()) terms.push_back(mat::shift(2 * k, odd, w));
          if (!even.is_empty()) terms.push_back(mat::shift(-2 * k, even, w));
          std::map<std::pair<Index, Index>, Scalar> cross;
          for (Index z = -ak; z < ak; ++z) {
            if ((z >= 0) != (z + k >= 0) && x.h.contains(z)) {
              cross.emplace(std::make_pair(sigma(z), sigma(z + k)), x.w.at(z));
            }
          }
          if (!cross.empty()) terms.push_back(mat::finite(f, cross));
          return mat::sum(std::move(terms), f);
        } else if constexpr (std::is_same_v<T, Sum>) {
          std::vector<MatExpr> terms;
          for (const auto& t : x.terms) terms.push_back(reindex_to_N(t));
          return mat::sum(std::move(terms), f);
        } else if constexpr (std::is_same_v<T, Scale>) {
          return mat::scale(x.c, reindex_to_N(*x.e));
        } else if constexpr (std::is_same_v<T, Prod>) {
          return mat::prod(reindex_to_N(*x.left), reindex_to_N(*x.right));
        } else {
          return mat::bracket(reindex_to_N(*x.left), reindex_to_N(*x.right));
        }
      },
      a.payload());
}

/// The inverse transport. Shifts with odd offsets mix the two half-lines and
/// have no band image on Z.
inline ZMatExpr reindex_to_Z(const MatExpr& a) {
  using namespace node;
  Field f = a.field();
  return std::visit(
      [&](const auto& x) -> ZMatExpr {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Zero>) {
          return zmat::zero(f);
        } else if constexpr (std::is_same_v<T, ScalarE>) {
          return zmat::scalar(x.alpha);
        } else if constexpr (std::is_same_v<T, Basis>) {
          return zmat::basis(f, sigma_inv(x.i), sigma_inv(x.j));
        } else if constexpr (std::is_same_v<T, FiniteLit>) {
          std::map<std::pair<Index, Index>, Scalar> m;
          for (const auto& [ij, v] : x.entries) {
            m.emplace(std::make_pair(sigma_inv(ij.first), sigma_inv(ij.second)), v);
          }
          return zmat::finite(f, m);
        } else if constexpr (std::is_same_v<T, Diag>) {
          return zmat::diag(detail::to_z(x.s));
        } else if constexpr (std::is_same_v<T, RowMat>) {
          return zmat::row(sigma_inv(x.r), detail::to_z(x.s));
        } else if constexpr (std::is_same_v<T, Shift>) {
          if (x.k % 2 != 0) throw Error(Errc::NotTransportable, "shift with odd offset " + std::to_string(x.k));
          // Odd row n = 2z+1 maps to (z, z + k/2); even row n = -2z to (z, z - k/2).
          const Index half = x.k / 2;
          auto member = [&](Index n) { return n >= 1 && n + x.k >= 1 && x.h.contains(n); };
          Index settled = static_cast<Index>(x.h.bits().prefix_length()) / 2 + (half < 0 ? -half : half) + 1;
          Index period = static_cast<Index>(x.h.bits().period_length());
          auto gen = [&](auto pick) {
            return IndexSet(EventuallyPeriodic<bool>::generate(static_cast<std::size_t>(settled),
                                                               static_cast<std::size_t>(period), pick));
          };
          ZSet up{IndexSet::empty(), gen([&](Index k) { return member(2 * (k - 1) + 1); })};
          ZSet down{gen([&](Index k) { return member(2 * k); }), IndexSet::empty()};
          ZSeq w = detail::to_z(x.w);
          std::vector<ZMatExpr> terms;
          if (!up.pos.is_empty()) terms.push_back(zmat::shift(half, up, w));
          if (!down.neg.is_empty()) terms.push_back(zmat::shift(-half, down, w));
          return zmat::sum(std::move(terms), f);
        } else if constexpr (std::is_same_v<T, Sum>) {
          std::vector<ZMatExpr> terms;
          for (const auto& t : x.terms) terms.push_back(reindex_to_Z(t));
          return zmat::sum(std::move(terms), f);
        } else if constexpr (std::is_same_v<T, Scale>) {
          return zmat::scale(x.c, reindex_to_Z(*x.e));
        } else if constexpr (std::is_same_v<T, Prod>) {
          return zmat::prod(reindex_to_Z(*x.left), reindex_to_Z(*x.right));
        } else if constexpr (std::is_same_v<T, Bracket>) {
          return zmat::bracket(reindex_to_Z(*x.left), reindex_to_Z(*x.right));
        } else {
          throw Error(Errc::NotTransportable, "lazy nodes have no Z-side image");
        }
      },
      a.payload());
}

}  // namespace glcf
