#pragma once

#include <cctype>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "glcf/matexpr.hpp"
#include "glcf/reindex.hpp"

namespace glcf {

/// Position of a token in the source text, 1-based.
struct SourceSpan {
  std::size_t line = 1, col = 1, length = 0;
};

namespace detail {

struct Token {
  enum class Type { Number, Ident, Punct, End };
  Type type = Type::End;
  std::string text;
  SourceSpan span;
};

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, k = 0;
  auto advance = [&]() {
    if (src[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++k;
  };
  while (k < src.size()) {
    char c = src[k];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance();
      continue;
    }
    Token t;
    t.span = {line, col, 0};
    if (std::isdigit(static_cast<unsigned char>(c))) {
      t.type = Token::Type::Number;
      while (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
        t.text.push_back(src[k]);
        advance();
      }
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t.type = Token::Type::Ident;
      while (k < src.size() && (std::isalnum(static_cast<unsigned char>(src[k])) || src[k] == '_')) {
        t.text.push_back(src[k]);
        advance();
      }
    } else if (std::string_view("()[]{},;:*+-/").find(c) != std::string_view::npos) {
      t.type = Token::Type::Punct;
      t.text = std::string(1, c);
      advance();
    } else {
      throw Error(Errc::ParseError, std::to_string(line) + ":" + std::to_string(col) + ": unexpected character '" +
                                        std::string(1, c) + "'");
    }
    t.span.length = t.text.size();
    out.push_back(std::move(t));
  }
  Token end;
  end.span = {line, col, 0};
  out.push_back(end);
  return out;
}

// Recursive descent over the expression grammar. ZSide selects two-sided
// indices, sequences and sets.
template <bool ZSide>
class ExprParser {
 public:
  using Expr = std::conditional_t<ZSide, ZMatExpr, MatExpr>;
  using Seq = std::conditional_t<ZSide, ZSeq, SeqDesc>;
  using Set = std::conditional_t<ZSide, ZSet, IndexSet>;

  ExprParser(std::string_view src, Field f) : toks_(tokenize(src)), f_(f) {}

  Expr parse_all() {
    Expr e = expr();
    if (peek().type != Token::Type::End) fail("unexpected '" + peek().text + "' after expression");
    return e;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Field f_;

  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  bool at(std::string_view text) const { return peek().type != Token::Type::End && peek().text == text; }
  Token take() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  [[noreturn]] void fail(const std::string& msg, const Token* t = nullptr) const {
    const Token& tok = t ? *t : peek();
    throw Error(Errc::ParseError, std::to_string(tok.span.line) + ":" + std::to_string(tok.span.col) + ": " + msg);
  }
  void expect(std::string_view text) {
    if (!at(text)) {
      fail("expected '" + std::string(text) + "'" +
           (peek().type == Token::Type::End ? " before end of input" : ", found '" + peek().text + "'"));
    }
    take();
  }
  bool accept(std::string_view text) {
    if (!at(text)) return false;
    take();
    return true;
  }

  bool scalar_ahead() const {
    if (peek().type == Token::Type::Number) return true;
    return at("-") && peek(1).type == Token::Type::Number;
  }

  Index integer() {
    bool neg = accept("-");
    if (peek().type != Token::Type::Number) fail("expected integer");
    Token t = take();
    if (t.text.size() > 18) fail("integer out of range", &t);
    Index v = std::stoll(t.text);
    return neg ? -v : v;
  }
  Index index(const char* what) {
    Token t = peek();
    Index v = integer();
    if constexpr (!ZSide) {
      if (v < 1) fail(std::string(what) + " index " + std::to_string(v) + " < 1", &t);
    }
    return v;
  }

  Scalar scalar() {
    Token first = peek();
    std::string text;
    if (accept("-")) text = "-";
    if (peek().type != Token::Type::Number) fail("expected scalar");
    text += take().text;
    if (at("/") && peek(1).type == Token::Type::Number) {
      take();
      text += "/" + take().text;
    }
    if (at("mod")) {
      take();
      if (peek().type != Token::Type::Number) fail("expected modulus");
      text += " mod " + take().text;
    }
    try {
      return Scalar::parse(text, f_);
    } catch (const Error& e) {
      throw Error(e.code(), std::to_string(first.span.line) + ":" + std::to_string(first.span.col) + ": " +
                                std::string(e.what()).substr(std::string(e.name()).size() + 2));
    }
  }

  std::vector<Scalar> scalar_list() {
    std::vector<Scalar> v;
    if (!scalar_ahead()) return v;
    v.push_back(scalar());
    while (accept(",")) v.push_back(scalar());
    return v;
  }

  // seq := const(c) | periodic([c-list ;] c-list) | fin((i : c)*)
  SeqDesc nseq() {
    Token t = peek();
    if (accept("const")) {
      expect("(");
      Scalar c = scalar();
      expect(")");
      return SeqDesc::constant(c);
    }
    if (accept("periodic")) {
      expect("(");
      std::vector<Scalar> a = scalar_list(), b;
      bool two = accept(";");
      if (two) b = scalar_list();
      expect(")");
      if (!two) std::swap(a, b);
      if (b.empty()) fail("periodic sequence needs a nonempty period", &t);
      return SeqDesc::periodic(f_, std::move(a), std::move(b));
    }
    fail("expected sequence (const, periodic or fin)");
  }

  std::map<Index, Scalar> fin_entries() {
    std::map<Index, Scalar> m;
    expect("(");
    while (!at(")")) {
      Token t = peek();
      Index i = ZSide ? integer() : index("sequence");
      expect(":");
      Scalar c = scalar();
      if (!m.emplace(i, c).second) fail("repeated sequence index " + std::to_string(i), &t);
      accept(",");
    }
    expect(")");
    return m;
  }

  SeqDesc nseq_full() {
    if (accept("fin")) {
      auto m = fin_entries();
      std::map<Index, Scalar> pos;
      for (const auto& [i, c] : m) {
        if (i < 1) fail("sequence index " + std::to_string(i) + " < 1");
        pos.emplace(i, c);
      }
      return SeqDesc::finite(f_, pos);
    }
    return nseq();
  }

  Seq seq() {
    if constexpr (ZSide) {
      if (accept("fin")) return ZSeq::finite(f_, fin_entries());
      if (accept("two")) {
        expect("(");
        SeqDesc n = nseq_full();
        expect(",");
        SeqDesc p = nseq_full();
        expect(")");
        return ZSeq{n, p};
      }
      if (at("periodic")) fail("two-sided periodic sequences are written two(neg, pos)");
      return ZSeq::constant(nseq().at(1));
    } else {
      return nseq_full();
    }
  }

  std::vector<bool> bit_list() {
    std::vector<bool> v;
    if (peek().type != Token::Type::Number) return v;
    do {
      Token t = take();
      if (t.type != Token::Type::Number || (t.text != "0" && t.text != "1")) fail("expected bit 0 or 1", &t);
      v.push_back(t.text == "1");
    } while (accept(","));
    return v;
  }

  std::set<Index> member_list(bool signed_index) {
    std::set<Index> s;
    expect("{");
    while (!at("}")) {
      Token t = peek();
      Index i = signed_index ? integer() : index("set");
      if (!s.insert(i).second) fail("repeated set member " + std::to_string(i), &t);
      accept(",");
    }
    expect("}");
    return s;
  }

  IndexSet nset() {
    Token t = peek();
    if (accept("all")) return IndexSet::all();
    if (accept("fin")) return IndexSet::finite(member_list(false));
    if (accept("periodic")) {
      expect("(");
      std::vector<bool> a = bit_list(), b;
      bool two = accept(";");
      if (two) b = bit_list();
      expect(")");
      if (!two) std::swap(a, b);
      if (b.empty()) fail("periodic set needs a nonempty period", &t);
      return IndexSet::periodic(std::move(a), std::move(b));
    }
    fail("expected index set (all, fin or periodic)");
  }

  Set set() {
    if constexpr (ZSide) {
      if (accept("all")) return ZSet::all();
      if (accept("fin")) return ZSet::finite(member_list(true));
      if (accept("two")) {
        expect("(");
        IndexSet n = nset();
        expect(",");
        IndexSet p = nset();
        expect(")");
        return ZSet{n, p};
      }
      fail("expected index set (all, fin or two)");
    } else {
      return nset();
    }
  }

  Expr make_scalar(const Scalar& c) {
    if constexpr (ZSide) return zmat::scalar(c);
    else return mat::scalar(c);
  }
  Expr make_scale(const Scalar& c, const Expr& e) {
    if constexpr (ZSide) return zmat::scale(c, e);
    else return mat::scale(c, e);
  }
  Expr make_prod(const Expr& a, const Expr& b) {
    if constexpr (ZSide) return zmat::prod(a, b);
    else return mat::prod(a, b);
  }
  Expr make_sum(std::vector<Expr> terms) {
    if constexpr (ZSide) return zmat::sum(std::move(terms), f_);
    else return mat::sum(std::move(terms), f_);
  }

  // expr := term (('+'|'-') term)*
  Expr expr() {
    std::vector<Expr> terms;
    terms.push_back(term());
    for (;;) {
      if (accept("+")) {
        terms.push_back(term());
      } else if (accept("-")) {
        terms.push_back(make_scale(-Scalar::one(f_), term()));
      } else {
        break;
      }
    }
    return make_sum(std::move(terms));
  }

  // term := factor ('*' factor)*, with a leading bare scalar binding as a scale.
  Expr term() {
    if (scalar_ahead()) {
      Scalar c = scalar();
      if (accept("*")) return make_scale(c, term());
      return make_scalar(c);
    }
    Expr acc = factor();
    while (accept("*")) acc = make_prod(acc, factor());
    return acc;
  }

  Expr factor() {
    Token t = peek();
    try {
      return factor_inner();
    } catch (const Error& e) {
      if (e.code() == Errc::ParseError) throw;
      std::string msg = e.what();
      std::string prefix = std::string(e.name()) + ": ";
      if (msg.rfind(prefix, 0) == 0) msg = msg.substr(prefix.size());
      throw Error(e.code(), std::to_string(t.span.line) + ":" + std::to_string(t.span.col) + ": " + msg);
    }
  }

  Expr factor_inner() {
    Token t = peek();
    if (scalar_ahead()) return make_scalar(scalar());
    if (accept("(")) {
      Expr e = expr();
      expect(")");
      return e;
    }
    if (accept("[")) {
      Expr a = expr();
      expect(",");
      Expr b = expr();
      expect("]");
      if constexpr (ZSide) return zmat::bracket(a, b);
      else return mat::bracket(a, b);
    }
    if (t.type != Token::Type::Ident) fail(t.type == Token::Type::End ? "unexpected end of input" : "unexpected '" + t.text + "'");
    take();
    const std::string& w = t.text;
    if (w == "I") return make_scalar(Scalar::one(f_));
    if (w == "E") {
      expect("(");
      Index i = index("row");
      expect(",");
      Index j = index("column");
      expect(")");
      if constexpr (ZSide) return zmat::basis(f_, i, j);
      else return mat::basis(f_, i, j);
    }
    if (w == "diag") {
      expect("(");
      Seq s = seq();
      expect(")");
      if constexpr (ZSide) return zmat::diag(s);
      else return mat::diag(s);
    }
    if (w == "row") {
      expect("(");
      Index r = index("row");
      expect(",");
      Seq s = seq();
      expect(")");
      if constexpr (ZSide) return zmat::row(r, s);
      else return mat::row(r, s);
    }
    if (w == "shift") {
      expect("(");
      Index k = integer();
      Set h = [] {
        if constexpr (ZSide) return ZSet::all();
        else return IndexSet::all();
      }();
      Seq wt = [&] {
        if constexpr (ZSide) return ZSeq::constant(Scalar::one(f_));
        else return SeqDesc::constant(Scalar::one(f_));
      }();
      if (accept(",")) {
        h = set();
        if (accept(",")) wt = seq();
      }
      expect(")");
      if (k == 0) fail("shift offset must be nonzero", &t);
      if constexpr (ZSide) return zmat::shift(k, h, wt);
      else return mat::shift(k, h, wt);
    }
    if (w == "finite") {
      std::map<std::pair<Index, Index>, Scalar> entries;
      expect("{");
      while (!at("}")) {
        Token at_tok = peek();
        Index i = index("row");
        expect(",");
        Index j = index("column");
        expect(":");
        Scalar c = scalar();
        if (!entries.emplace(std::make_pair(i, j), c).second) {
          fail("repeated entry (" + std::to_string(i) + "," + std::to_string(j) + ")", &at_tok);
        }
        accept(",");
      }
      expect("}");
      if constexpr (ZSide) return zmat::finite(f_, entries);
      else return mat::finite(f_, entries);
    }
    if constexpr (!ZSide) {
      if (w == "match" || w == "matchT") {
        expect("(");
        IndexSet d = nset();
        expect(",");
        IndexSet c = nset();
        expect(",");
        Index ro = integer();
        expect(",");
        Index co = integer();
        expect(")");
        return mat::match(f_, d, c, ro, co, w == "matchT");
      }
      if (w == "solve") {
        expect("(");
        MatExpr a = expr();
        expect(")");
        return mat::shift_solve(a);
      }
    }
    fail("unknown name '" + w + "'", &t);
  }
};

}  // namespace detail

/// Parses the matrix DSL over N x N indices.
inline MatExpr parse_expr(std::string_view text, Field f) { return detail::ExprParser<false>(text, f).parse_all(); }

/// Parses the matrix DSL over Z x Z indices. Sequences and sets take the
/// forms fin(z: c, ...), fin{z, ...}, const(c), all and two(negative, positive).
inline ZMatExpr parse_zexpr(std::string_view text, Field f) {
  return detail::ExprParser<true>(text, f).parse_all();
}

}  // namespace glcf
