#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "glcf/chain.hpp"
#include "glcf/derivations.hpp"
#include "glcf/matexpr.hpp"
#include "glcf/reindex.hpp"
#include "glcf/render.hpp"

namespace glcf {

using Json = nlohmann::ordered_json;

namespace detail {

/// Walks a document and reports schema violations with a JSON pointer.
class JsonReader {
 public:
  explicit JsonReader(Field f) : f_(f) {}

  [[noreturn]] static void fail(const std::string& path, const std::string& msg) {
    throw Error(Errc::SchemaError, (path.empty() ? "/" : path) + ": " + msg);
  }
  static std::string child(const std::string& path, const std::string& key) {
    std::string esc;
    for (char c : key) {
      if (c == '~') esc += "~0";
      else if (c == '/') esc += "~1";
      else esc += c;
    }
    return path + "/" + esc;
  }
  static std::string child(const std::string& path, std::size_t k) { return path + "/" + std::to_string(k); }

  static const Json& object_field(const Json& j, const std::string& path, const char* key) {
    if (!j.is_object()) fail(path, "expected object");
    auto it = j.find(key);
    if (it == j.end()) fail(child(path, key), "missing");
    return *it;
  }
  static const Json& array(const Json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected array");
    return j;
  }
  static Index integer(const Json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected integer");
    return j.get<Index>();
  }
  static bool boolean(const Json& j, const std::string& path) {
    if (!j.is_boolean()) fail(path, "expected boolean");
    return j.get<bool>();
  }
  static std::string string(const Json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected string");
    return j.get<std::string>();
  }
  static std::string kind(const Json& j, const std::string& path) {
    return string(object_field(j, path, "kind"), child(path, "kind"));
  }

  Scalar scalar(const Json& j, const std::string& path) const {
    std::string text;
    if (j.is_number_integer()) text = std::to_string(j.get<long long>());
    else if (j.is_string()) text = j.get<std::string>();
    else fail(path, "expected scalar string");
    try {
      return Scalar::parse(text, f_);
    } catch (const Error& e) {
      fail(path, e.what());
    }
  }
  std::vector<Scalar> scalars(const Json& j, const std::string& path) const {
    std::vector<Scalar> v;
    for (std::size_t k = 0; k < array(j, path).size(); ++k) v.push_back(scalar(j[k], child(path, k)));
    return v;
  }
  static std::vector<bool> bits(const Json& j, const std::string& path) {
    std::vector<bool> v;
    for (std::size_t k = 0; k < array(j, path).size(); ++k) {
      Index b = integer(j[k], child(path, k));
      if (b != 0 && b != 1) fail(child(path, k), "expected 0 or 1");
      v.push_back(b == 1);
    }
    return v;
  }

  template <class F>
  static auto guarded(const std::string& path, F&& build) -> decltype(build()) {
    try {
      return build();
    } catch (const Error& e) {
      if (e.code() == Errc::SchemaError) throw;
      fail(path, e.what());
    }
  }

  SeqDesc seq(const Json& j, const std::string& path) const {
    std::string k = kind(j, path);
    return guarded(path, [&] {
      if (k == "finite") {
        std::map<Index, Scalar> m;
        std::string p = child(path, "entries");
        const Json& es = array(object_field(j, path, "entries"), p);
        for (std::size_t n = 0; n < es.size(); ++n) {
          std::string q = child(p, n);
          if (!es[n].is_array() || es[n].size() != 2) fail(q, "expected [index, scalar]");
          m[integer(es[n][0], child(q, 0))] = scalar(es[n][1], child(q, 1));
        }
        return SeqDesc::finite(f_, m);
      }
      if (k == "constant") {
        std::vector<Scalar> pre;
        if (j.contains("prefix")) pre = scalars(j["prefix"], child(path, "prefix"));
        return SeqDesc::periodic(f_, pre, {scalar(object_field(j, path, "value"), child(path, "value"))});
      }
      if (k == "periodic") {
        std::vector<Scalar> pre;
        if (j.contains("prefix")) pre = scalars(j["prefix"], child(path, "prefix"));
        auto per = scalars(object_field(j, path, "period"), child(path, "period"));
        if (per.empty()) fail(child(path, "period"), "empty period");
        return SeqDesc::periodic(f_, pre, per);
      }
      fail(child(path, "kind"), "unknown sequence kind '" + k + "'");
    });
  }

  static IndexSet set(const Json& j, const std::string& path) {
    std::string k = kind(j, path);
    return guarded(path, [&] {
      if (k == "finite") {
        std::set<Index> s;
        std::string p = child(path, "members");
        const Json& ms = array(object_field(j, path, "members"), p);
        for (std::size_t n = 0; n < ms.size(); ++n) s.insert(integer(ms[n], child(p, n)));
        return IndexSet::finite(s);
      }
      if (k == "periodic") {
        std::vector<bool> pre;
        if (j.contains("prefix")) pre = bits(j["prefix"], child(path, "prefix"));
        auto per = bits(object_field(j, path, "period"), child(path, "period"));
        if (per.empty()) fail(child(path, "period"), "empty period");
        return IndexSet::periodic(pre, per);
      }
      fail(child(path, "kind"), "unknown set kind '" + k + "'");
    });
  }

  ZSeq zseq(const Json& j, const std::string& path) const {
    return {seq(object_field(j, path, "neg"), child(path, "neg")), seq(object_field(j, path, "pos"), child(path, "pos"))};
  }
  static ZSet zset(const Json& j, const std::string& path) {
    return {set(object_field(j, path, "neg"), child(path, "neg")), set(object_field(j, path, "pos"), child(path, "pos"))};
  }

  std::map<std::pair<Index, Index>, Scalar> entries(const Json& j, const std::string& path) const {
    std::map<std::pair<Index, Index>, Scalar> m;
    std::string p = child(path, "entries");
    const Json& es = array(object_field(j, path, "entries"), p);
    for (std::size_t n = 0; n < es.size(); ++n) {
      std::string q = child(p, n);
      if (!es[n].is_array() || es[n].size() != 3) fail(q, "expected [row, column, scalar]");
      m[{integer(es[n][0], child(q, 0)), integer(es[n][1], child(q, 1))}] = scalar(es[n][2], child(q, 2));
    }
    return m;
  }

  template <bool ZSide>
  std::conditional_t<ZSide, ZMatExpr, MatExpr> expr(const Json& j, const std::string& path) const {
    using Expr = std::conditional_t<ZSide, ZMatExpr, MatExpr>;
    std::string k = kind(j, path);
    auto sub = [&](const char* key) { return expr<ZSide>(object_field(j, path, key), child(path, key)); };
    auto idx = [&](const char* key) { return integer(object_field(j, path, key), child(path, key)); };
    auto pos = [&](const char* key) {
      Index v = idx(key);
      if (v < 1) fail(child(path, key), "index " + std::to_string(v) + " < 1");
      return v;
    };
    return guarded(path, [&]() -> Expr {
      if constexpr (ZSide) {
        if (k == "zero") return zmat::zero(f_);
        if (k == "scalar") return zmat::scalar(scalar(object_field(j, path, "value"), child(path, "value")));
        if (k == "basis") return zmat::basis(f_, idx("i"), idx("j"));
        if (k == "finite") return zmat::finite(f_, entries(j, path));
        if (k == "diag") return zmat::diag(zseq(object_field(j, path, "seq"), child(path, "seq")));
        if (k == "shift") {
          return zmat::shift(idx("k"), zset(object_field(j, path, "set"), child(path, "set")),
                             zseq(object_field(j, path, "weight"), child(path, "weight")));
        }
        if (k == "row") return zmat::row(idx("r"), zseq(object_field(j, path, "seq"), child(path, "seq")));
      } else {
        if (k == "zero") return mat::zero(f_);
        if (k == "scalar") return mat::scalar(scalar(object_field(j, path, "value"), child(path, "value")));
        if (k == "basis") return mat::basis(f_, pos("i"), pos("j"));
        if (k == "finite") return mat::finite(f_, entries(j, path));
        if (k == "diag") return mat::diag(seq(object_field(j, path, "seq"), child(path, "seq")));
        if (k == "shift") {
          return mat::shift(idx("k"), set(object_field(j, path, "set"), child(path, "set")),
                            seq(object_field(j, path, "weight"), child(path, "weight")));
        }
        if (k == "row") return mat::row(pos("r"), seq(object_field(j, path, "seq"), child(path, "seq")));
        if (k == "match") {
          return mat::match(f_, set(object_field(j, path, "domain"), child(path, "domain")),
                            set(object_field(j, path, "codomain"), child(path, "codomain")), idx("row_offset"),
                            idx("col_offset"), boolean(object_field(j, path, "transposed"), child(path, "transposed")));
        }
        if (k == "shift_solve") return mat::shift_solve(sub("expr"));
      }
      if (k == "sum") {
        std::vector<Expr> terms;
        std::string p = child(path, "terms");
        const Json& ts = array(object_field(j, path, "terms"), p);
        for (std::size_t n = 0; n < ts.size(); ++n) terms.push_back(expr<ZSide>(ts[n], child(p, n)));
        if (terms.size() < 2) fail(p, "a sum needs at least two terms");
        return Expr(f_, typename std::conditional_t<ZSide, znode::Sum, node::Sum>{std::move(terms)});
      }
      if (k == "scale") {
        Scalar c = scalar(object_field(j, path, "coeff"), child(path, "coeff"));
        if constexpr (ZSide) return zmat::scale(c, sub("expr"));
        else return mat::scale(c, sub("expr"));
      }
      if (k == "prod") {
        if constexpr (ZSide) return zmat::prod(sub("left"), sub("right"));
        else return mat::prod(sub("left"), sub("right"));
      }
      if (k == "bracket") {
        if constexpr (ZSide) return zmat::bracket(sub("left"), sub("right"));
        else return mat::bracket(sub("left"), sub("right"));
      }
      fail(child(path, "kind"), "unknown kind '" + k + "'");
    });
  }

 private:
  Field f_;
};

inline Json scalars_json(const std::vector<Scalar>& v) {
  Json a = Json::array();
  for (const auto& s : v) a.push_back(s.to_string());
  return a;
}
inline Json bits_json(const std::vector<bool>& v) {
  Json a = Json::array();
  for (bool b : v) a.push_back(b ? 1 : 0);
  return a;
}
inline Json entries_json(const std::map<std::pair<Index, Index>, Scalar>& m) {
  Json a = Json::array();
  for (const auto& [ij, v] : m) a.push_back(Json::array({ij.first, ij.second, v.to_string()}));
  return a;
}

}  // namespace detail

inline Json to_json(const SeqDesc& s) {
  Json j;
  switch (s.kind()) {
    case SeqDesc::Kind::FiniteSupport: {
      j["kind"] = "finite";
      Json es = Json::array();
      for (const auto& [i, v] : s.finite_entries()) es.push_back(Json::array({i, v.to_string()}));
      j["entries"] = es;
      break;
    }
    case SeqDesc::Kind::EventuallyConstant:
      j["kind"] = "constant";
      j["prefix"] = detail::scalars_json(s.data().prefix());
      j["value"] = s.data().period().front().to_string();
      break;
    case SeqDesc::Kind::EventuallyPeriodic:
      j["kind"] = "periodic";
      j["prefix"] = detail::scalars_json(s.data().prefix());
      j["period"] = detail::scalars_json(s.data().period());
      break;
  }
  return j;
}

inline Json to_json(const IndexSet& h) {
  Json j;
  if (!h.is_infinite()) {
    j["kind"] = "finite";
    j["members"] = Json(h.finite_members());
  } else {
    j["kind"] = "periodic";
    j["prefix"] = detail::bits_json(h.bits().prefix());
    j["period"] = detail::bits_json(h.bits().period());
  }
  return j;
}

inline Json to_json(const ZSeq& s) { return Json{{"neg", to_json(s.neg)}, {"pos", to_json(s.pos)}}; }
inline Json to_json(const ZSet& h) { return Json{{"neg", to_json(h.neg)}, {"pos", to_json(h.pos)}}; }

inline Json to_json(const MatExpr& e);
inline Json to_json(const ZMatExpr& e);

namespace detail {
template <class N, class Expr>
Json expr_json(const Expr& e) {
  return std::visit(
      [&](const auto& x) -> Json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, typename N::Zero>) {
          return Json{{"kind", "zero"}};
        } else if constexpr (std::is_same_v<T, typename N::ScalarE>) {
          return Json{{"kind", "scalar"}, {"value", x.alpha.to_string()}};
        } else if constexpr (std::is_same_v<T, typename N::Basis>) {
          return Json{{"kind", "basis"}, {"i", x.i}, {"j", x.j}};
        } else if constexpr (std::is_same_v<T, typename N::FiniteLit>) {
          return Json{{"kind", "finite"}, {"entries", entries_json(x.entries)}};
        } else if constexpr (std::is_same_v<T, typename N::Diag>) {
          return Json{{"kind", "diag"}, {"seq", to_json(x.s)}};
        } else if constexpr (std::is_same_v<T, typename N::Shift>) {
          return Json{{"kind", "shift"}, {"k", x.k}, {"set", to_json(x.h)}, {"weight", to_json(x.w)}};
        } else if constexpr (std::is_same_v<T, typename N::RowMat>) {
          return Json{{"kind", "row"}, {"r", x.r}, {"seq", to_json(x.s)}};
        } else if constexpr (std::is_same_v<T, typename N::Sum>) {
          Json ts = Json::array();
          for (const auto& t : x.terms) ts.push_back(to_json(t));
          return Json{{"kind", "sum"}, {"terms", ts}};
        } else if constexpr (std::is_same_v<T, typename N::Scale>) {
          return Json{{"kind", "scale"}, {"coeff", x.c.to_string()}, {"expr", to_json(*x.e)}};
        } else if constexpr (std::is_same_v<T, typename N::Prod>) {
          return Json{{"kind", "prod"}, {"left", to_json(*x.left)}, {"right", to_json(*x.right)}};
        } else if constexpr (std::is_same_v<T, typename N::Bracket>) {
          return Json{{"kind", "bracket"}, {"left", to_json(*x.left)}, {"right", to_json(*x.right)}};
        } else if constexpr (std::is_same_v<T, node::Match>) {
          return Json{{"kind", "match"},         {"domain", to_json(x.domain)},   {"codomain", to_json(x.codomain)},
                      {"row_offset", x.row_offset}, {"col_offset", x.col_offset}, {"transposed", x.transposed}};
        } else {
          return Json{{"kind", "shift_solve"}, {"expr", to_json(*x.a)}};
        }
      },
      e.payload());
}
}  // namespace detail

inline Json to_json(const MatExpr& e) { return detail::expr_json<detail::NTag>(e); }
inline Json to_json(const ZMatExpr& e) { return detail::expr_json<detail::ZTag>(e); }

inline MatExpr expr_from_json(const Json& j, Field f, const std::string& path = "") {
  return detail::JsonReader(f).expr<false>(j, path);
}
inline ZMatExpr zexpr_from_json(const Json& j, Field f, const std::string& path = "") {
  return detail::JsonReader(f).expr<true>(j, path);
}

inline Field field_from_json(const Json& doc) {
  const Json& fj = detail::JsonReader::object_field(doc, "", "field");
  std::string text = detail::JsonReader::string(fj, "/field");
  try {
    return Field::parse(text);
  } catch (const Error& e) {
    detail::JsonReader::fail("/field", e.what());
  }
}

/// Top-level expression document: {"field": ..., "expr": ...}.
inline Json to_document(const MatExpr& e) { return Json{{"field", e.field().to_string()}, {"expr", to_json(e)}}; }
inline Json to_document(const ZMatExpr& e) {
  return Json{{"field", e.field().to_string()}, {"side", "Z"}, {"expr", to_json(e)}};
}
inline MatExpr from_document(const Json& doc) {
  Field f = field_from_json(doc);
  return expr_from_json(detail::JsonReader::object_field(doc, "", "expr"), f, "/expr");
}
inline ZMatExpr zfrom_document(const Json& doc) {
  Field f = field_from_json(doc);
  return zexpr_from_json(detail::JsonReader::object_field(doc, "", "expr"), f, "/expr");
}

// Bracket chains.

inline Json to_json(const BracketChain& c) {
  Json steps = Json::array();
  auto ref = [](const std::optional<StepRef>& r) { return r ? Json(*r) : Json(nullptr); };
  for (const auto& s : c.steps) {
    Json j;
    if (s.kind == ChainStep::Kind::Bracket) {
      j["op"] = "bracket";
      j["lhs"] = to_json(s.lhs);
      j["rhs"] = to_json(s.rhs);
      j["lhs_ref"] = ref(s.lhs_ref);
      j["rhs_ref"] = ref(s.rhs_ref);
      j["text"] = "[" + render(s.lhs) + ", " + render(s.rhs) + "] = " + render(s.result);
    } else {
      j["op"] = "combination";
      Json ts = Json::array();
      std::vector<std::string> parts;
      for (const auto& [coef, r] : s.terms) {
        ts.push_back(Json{{"coeff", coef.to_string()}, {"ref", r}});
        parts.push_back(coef.to_string() + " * " + (r == kSeed ? std::string("A") : "R" + std::to_string(r)));
      }
      j["terms"] = ts;
      j["text"] = detail::join(parts, " + ") + " = " + render(s.result);
    }
    j["result"] = to_json(s.result);
    j["note"] = s.note;
    steps.push_back(std::move(j));
  }
  return Json{{"field", c.field().to_string()}, {"seed", to_json(c.seed)}, {"target", to_json(c.target)},
              {"steps", steps}};
}

inline BracketChain chain_from_json(const Json& doc) {
  using R = detail::JsonReader;
  Field f = field_from_json(doc);
  R rd(f);
  BracketChain c;
  c.seed = rd.expr<false>(R::object_field(doc, "", "seed"), "/seed");
  c.target = rd.expr<false>(R::object_field(doc, "", "target"), "/target");
  const Json& steps = R::array(R::object_field(doc, "", "steps"), "/steps");
  auto ref = [&](const Json& j, const std::string& p) -> std::optional<StepRef> {
    if (j.is_null()) return std::nullopt;
    return static_cast<StepRef>(R::integer(j, p));
  };
  for (std::size_t n = 0; n < steps.size(); ++n) {
    std::string p = R::child("/steps", n);
    const Json& j = steps[n];
    ChainStep s;
    std::string op = R::string(R::object_field(j, p, "op"), p + "/op");
    if (op == "bracket") {
      s.kind = ChainStep::Kind::Bracket;
      s.lhs = rd.expr<false>(R::object_field(j, p, "lhs"), p + "/lhs");
      s.rhs = rd.expr<false>(R::object_field(j, p, "rhs"), p + "/rhs");
      s.lhs_ref = ref(R::object_field(j, p, "lhs_ref"), p + "/lhs_ref");
      s.rhs_ref = ref(R::object_field(j, p, "rhs_ref"), p + "/rhs_ref");
    } else if (op == "combination") {
      s.kind = ChainStep::Kind::Combination;
      const Json& ts = R::array(R::object_field(j, p, "terms"), p + "/terms");
      for (std::size_t k = 0; k < ts.size(); ++k) {
        std::string q = R::child(p + "/terms", k);
        s.terms.emplace_back(rd.scalar(R::object_field(ts[k], q, "coeff"), q + "/coeff"),
                             static_cast<StepRef>(R::integer(R::object_field(ts[k], q, "ref"), q + "/ref")));
      }
    } else {
      R::fail(p + "/op", "unknown step op '" + op + "'");
    }
    s.result = rd.expr<false>(R::object_field(j, p, "result"), p + "/result");
    if (j.contains("note")) s.note = R::string(j["note"], p + "/note");
    c.steps.push_back(std::move(s));
  }
  return c;
}

inline bool operator==(const ChainStep& a, const ChainStep& b) {
  return a.kind == b.kind && a.lhs == b.lhs && a.rhs == b.rhs && a.lhs_ref == b.lhs_ref && a.rhs_ref == b.rhs_ref &&
         a.terms == b.terms && a.result == b.result && a.note == b.note;
}
inline bool operator==(const BracketChain& a, const BracketChain& b) {
  return a.seed == b.seed && a.target == b.target && a.steps == b.steps;
}

// Derivations.

inline Json sigma_json(const std::map<Index, Scalar>& sigma) {
  Json t = Json::array();
  for (const auto& [k, v] : sigma) t.push_back(Json{{"k", k}, {"value", v.to_string()}});
  return t;
}

inline Json to_json(const DerivationVal& d) {
  return Json{{"field", d.field().to_string()},
              {"inner", to_json(d.inner)},
              {"sigma", sigma_json(d.sigma)},
              {"zero_extension", d.zero_extension}};
}

inline DerivationVal derivation_from_json(const Json& doc) {
  using R = detail::JsonReader;
  Field f = field_from_json(doc);
  R rd(f);
  DerivationVal d;
  d.inner = rd.expr<false>(R::object_field(doc, "", "inner"), "/inner");
  if (doc.contains("sigma")) {
    const Json& t = R::array(doc["sigma"], "/sigma");
    for (std::size_t n = 0; n < t.size(); ++n) {
      std::string p = R::child("/sigma", n);
      Index k = R::integer(R::object_field(t[n], p, "k"), p + "/k");
      if (k < 1) R::fail(p + "/k", "index < 1");
      d.sigma[k] = rd.scalar(R::object_field(t[n], p, "value"), p + "/value");
    }
  }
  if (doc.contains("zero_extension")) d.zero_extension = R::boolean(doc["zero_extension"], "/zero_extension");
  if (!d.zero_extension) R::fail("/zero_extension", "only zero extension past the table is supported");
  return d;
}

inline Json to_json(const DecompositionReport& r) {
  Json res = Json::array();
  for (const auto& p : r.residuals) {
    Json j{{"probe", p.probe}, {"vanishes", p.vanishes}};
    j["first_nonzero"] = p.first_nonzero ? Json::array({p.first_nonzero->first, p.first_nonzero->second}) : Json(nullptr);
    res.push_back(std::move(j));
  }
  return Json{{"probe_bound", r.probe_bound},
              {"window", r.window},
              {"leibniz_pairs", r.leibniz_pairs},
              {"diagonal_antisymmetry", r.diagonal_antisymmetry},
              {"offdiagonal_antisymmetry", r.offdiagonal_antisymmetry},
              {"all_residuals_vanish", r.all_residuals_vanish()},
              {"residuals", res}};
}

inline Json to_json(const Decomposition& d) {
  return Json{{"field", d.inner.field().to_string()},
              {"inner", to_json(d.inner)},
              {"inner_text", render(d.inner)},
              {"sigma", sigma_json(d.sigma)},
              {"report", to_json(d.report)}};
}

}  // namespace glcf
