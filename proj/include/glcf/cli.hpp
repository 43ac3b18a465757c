#pragma once

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "glcf/chain.hpp"
#include "glcf/derivations.hpp"
#include "glcf/ideals.hpp"
#include "glcf/json_io.hpp"
#include "glcf/parser.hpp"
#include "glcf/reindex.hpp"
#include "glcf/render.hpp"
#include "glcf/witnesses.hpp"

namespace glcf {

/// Parses an index set written as in the DSL (all, fin{...}, periodic(...)).
inline IndexSet parse_set(std::string_view text) {
  // Reuse the expression parser through a one-node wrapper.
  MatExpr e = parse_expr("shift(1, " + std::string(text) + ")", Field::rationals());
  return e.as<node::Shift>().h;
}

namespace cli {

enum Exit : int { kOk = 0, kDomainError = 1, kUsageError = 2 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string field = "q";
  std::string format = "text";
  Index window_check = 60;
  bool field_given = false;
};

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// An expression argument is DSL text, a JSON document, or @path to either.
inline std::string source_text(const std::string& arg) { return arg.rfind('@', 0) == 0 ? slurp(arg.substr(1)) : arg; }

inline bool looks_like_json(const std::string& s) {
  auto k = s.find_first_not_of(" \t\r\n");
  return k != std::string::npos && s[k] == '{';
}

inline Json parse_json_text(const std::string& s) {
  try {
    return Json::parse(s);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::SchemaError, std::string("invalid JSON: ") + e.what());
  }
}

inline MatExpr read_expr(const std::string& arg, Field f) {
  std::string s = source_text(arg);
  if (looks_like_json(s)) {
    MatExpr e = from_document(parse_json_text(s));
    require_same_field(f, e.field());
    return e;
  }
  return parse_expr(s, f);
}

inline ZMatExpr read_zexpr(const std::string& arg, Field f) {
  std::string s = source_text(arg);
  if (looks_like_json(s)) {
    ZMatExpr e = zfrom_document(parse_json_text(s));
    require_same_field(f, e.field());
    return e;
  }
  return parse_zexpr(s, f);
}

inline Index read_index(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw UsageError(std::string(what) + " must be an integer, got '" + s + "'");
}

inline std::string verdict_text(const ChainVerdict& v, Index depth) {
  std::string s = "verified at " + std::to_string(depth) + "x" + std::to_string(depth) + ": " +
                  (v.pass ? "PASS" : "FAIL");
  if (!v.pass) s += " (step " + std::to_string(*v.failed_step) + ": " + v.message + ")";
  return s;
}

inline Json verdict_json(const ChainVerdict& v, Index depth) {
  Json j{{"window", depth}, {"pass", v.pass}};
  j["failed_step"] = v.failed_step ? Json(*v.failed_step) : Json(nullptr);
  j["message"] = v.message;
  return j;
}

inline std::string chain_text(const BracketChain& c) {
  std::ostringstream os;
  auto name = [](StepRef r) { return r == kSeed ? std::string("A") : "R" + std::to_string(r); };
  os << "A = " << render(c.seed) << "\n";
  for (std::size_t k = 0; k < c.steps.size(); ++k) {
    const ChainStep& s = c.steps[k];
    os << "R" << k << " = ";
    if (s.kind == ChainStep::Kind::Bracket) {
      os << "[" << (s.lhs_ref ? name(*s.lhs_ref) : render(s.lhs)) << ", "
         << (s.rhs_ref ? name(*s.rhs_ref) : render(s.rhs)) << "]";
    } else {
      for (std::size_t t = 0; t < s.terms.size(); ++t) {
        os << (t ? " + " : "") << s.terms[t].first.to_string() << " * " << name(s.terms[t].second);
      }
    }
    os << " = " << render(s.result);
    if (!s.note.empty()) os << "    # " << s.note;
    os << "\n";
  }
  os << "target = " << render(c.target) << "\n";
  return os.str();
}

inline std::string window_text(const DenseBlock& b) {
  std::vector<std::vector<std::string>> cells(static_cast<std::size_t>(b.rows()));
  std::size_t width = 1;
  for (Index i = 1; i <= b.rows(); ++i) {
    for (Index j = 1; j <= b.cols(); ++j) {
      const Scalar& v = b.at(i, j);
      std::string s = v.field().kind() == FieldKind::Prime ? std::to_string(v.residue()) : v.to_string();
      width = std::max(width, s.size());
      cells[static_cast<std::size_t>(i - 1)].push_back(std::move(s));
    }
  }
  std::ostringstream os;
  for (const auto& row : cells) {
    for (std::size_t j = 0; j < row.size(); ++j) os << (j ? " " : "") << std::setw(static_cast<int>(width)) << row[j];
    os << "\n";
  }
  return os.str();
}

inline Json window_json(const DenseBlock& b) {
  Json rows = Json::array();
  for (Index i = 1; i <= b.rows(); ++i) {
    Json r = Json::array();
    for (Index j = 1; j <= b.cols(); ++j) r.push_back(b.at(i, j).to_string());
    rows.push_back(std::move(r));
  }
  return Json{{"field", b.field().to_string()}, {"rows", b.rows()}, {"cols", b.cols()}, {"entries", rows}};
}

/// Closed form when the normalizer accepts the expression, else the input.
inline MatExpr closed_or_self(const MatExpr& e) {
  try {
    return normalize(e).to_expr();
  } catch (const Error& err) {
    if (err.code() != Errc::NotNormalizable) throw;
    return e;
  }
}

class Runner {
 public:
  Runner(const Options& o, std::ostream& out) : o_(o), out_(out) {}

  bool json() const { return o_.format == "json"; }

  Field field(bool allow_z = false) const {
    Field f = Field::parse(o_.field);
    if (f.kind() == FieldKind::Integer && !allow_z) {
      throw UsageError("--field z is only valid for derive-decompose");
    }
    return f;
  }

  void emit(const Json& j) { out_ << j.dump(2) << "\n"; }

  int classify_cmd(const std::string& arg) {
    Field f = field();
    MatExpr a = read_expr(arg, f);
    IdealName l = glcf::classify(a);
    if (json()) {
      emit(Json{{"field", f.to_string()}, {"expr", to_json(a)}, {"ideal", std::string(ideal_name(l))}});
    } else {
      out_ << ideal_name(l) << "\n";
    }
    return kOk;
  }

  int window_cmd(const std::string& arg, const std::string& m, const std::string& n) {
    Field f = field();
    Index rows = read_index(m, "m"), cols = read_index(n, "n");
    if (rows < 1 || cols < 1) throw UsageError("window size must be positive");
    DenseBlock b = glcf::window(read_expr(arg, f), rows, cols);
    if (json()) emit(window_json(b));
    else out_ << window_text(b);
    return kOk;
  }

  int bracket_cmd(const std::string& a1, const std::string& a2) {
    Field f = field();
    MatExpr x = read_expr(a1, f), y = read_expr(a2, f);
    MatExpr br = mat::bracket(x, y);
    MatExpr res = closed_or_self(br);
    if (json()) {
      emit(Json{{"field", f.to_string()}, {"expr", to_json(br)}, {"result", to_json(res)}, {"text", render(res)}});
    } else {
      out_ << render(res) << "\n";
    }
    return kOk;
  }

  int solve_shift_cmd(const std::string& arg) {
    Field f = field();
    MatExpr a = read_expr(arg, f);
    MatExpr x = solve_shift_bracket(a);
    Index d = o_.window_check;
    DenseBlock lhs = glcf::window(mat::bracket(x, mat::superdiagonal(f)), d, d);
    auto diff = lhs.first_difference(glcf::window(a, d, d));
    std::string verdict = "verified at " + std::to_string(d) + "x" + std::to_string(d) + ": " + (diff ? "FAIL" : "PASS");
    if (json()) {
      emit(Json{{"field", f.to_string()},
                {"x", to_json(x)},
                {"x_text", render(x)},
                {"verified", Json{{"window", d}, {"pass", !diff}}}});
    } else {
      out_ << "X = " << render(x) << "\n" << verdict << "\n";
    }
    return diff ? kDomainError : kOk;
  }

  int witness_cmd(const std::string& kind, const std::vector<std::string>& args) {
    Field f = field();
    auto need = [&](std::size_t n, const char* usage) {
      if (args.size() != n) throw UsageError("witness " + kind + " expects " + usage);
    };
    Json extra = Json::object();
    std::string extra_text;
    BracketChain chain;
    if (kind == "eij-diag" || kind == "eij-offdiag") {
      need(3, "<expr> <i> <j>");
      MatExpr a = read_expr(args[0], f);
      Index i = read_index(args[1], "i"), j = read_index(args[2], "j");
      chain = kind == "eij-diag" ? eij_from_diag(a, i, j) : eij_from_offdiag(a, i, j);
    } else if (kind == "slfr") {
      need(2, "<expr> <target>");
      chain = slfr_certificate(read_expr(args[0], f), read_expr(args[1], f));
    } else if (kind == "extract-diag") {
      need(1, "<expr>");
      DiagExtraction ex = extract_diag(read_expr(args[0], f));
      chain = ex.chain;
      extra["d"] = to_json(ex.d);
      extra_text = "D = " + render(ex.d) + "\n";
    } else if (kind == "superdiag") {
      need(1, "<diagonal expr>");
      SuperdiagResult sd = superdiag_from_diag(read_expr(args[0], f));
      chain = sd.chain;
      extra["h"] = to_json(sd.h);
      extra_text = "H = " + render(sd.h) + "\n";
    } else if (kind == "enlarge") {
      need(1, "<set>");
      EnlargeResult en = enlarge_set(parse_set(source_text(args[0])), f);
      chain = en.chain;
      extra["g"] = to_json(en.g);
      extra_text = "G = " + render(en.g) + "\n";
    } else if (kind == "complete") {
      need(1, "<set>");
      chain = complete_superdiag(parse_set(source_text(args[0])), f);
    } else if (kind == "perfect") {
      need(1, "<expr>");
      MatExpr a = read_expr(args[0], f);
      PerfectWitness pw = perfect_witness(a);
      chain = BracketChain{pw.s, {}, a};
      chain.bracket_right(pw.x, kSeed, a, "single bracket with S");
      extra["x"] = to_json(pw.x);
      extra_text = "X = " + render(pw.x) + "\n";
    } else if (kind == "center") {
      need(1, "<expr>");
      MatExpr a = read_expr(args[0], f);
      CenterVerdict cv = center_witness(a);
      extra["central"] = cv.central;
      chain = BracketChain{a, {}, mat::zero(f)};
      if (cv.witness) {
        MatExpr c = closed_or_self(mat::bracket(a, *cv.witness));
        chain.bracket_left(kSeed, *cv.witness, c, "noncommuting partner");
        chain.target = c;
        extra["witness"] = to_json(*cv.witness);
        extra_text = "not central: [A, B] != 0 for B = " + render(*cv.witness) + "\n";
      } else {
        extra["witness"] = nullptr;
        extra_text = "central\n";
      }
    } else {
      throw UsageError("unknown witness kind '" + kind + "'");
    }
    ChainVerdict v = verify_chain(chain, o_.window_check);
    if (json()) {
      Json j{{"kind", kind}, {"chain", to_json(chain)}, {"verified", verdict_json(v, o_.window_check)}};
      for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
      emit(j);
    } else {
      out_ << extra_text << chain_text(chain) << verdict_text(v, o_.window_check) << "\n";
    }
    return v.pass ? kOk : kDomainError;
  }

  int derive_cmd(const std::string& oracle, const std::string& n_text) {
    Index n = read_index(n_text, "n");
    Field f = field(true);
    DerivationOracle phi;
    if (oracle == "zero") {
      phi = oracles::zero(f);
    } else if (oracle == "identity") {
      phi = oracles::identity(f);
    } else {
      std::string s = source_text(oracle.rfind('@', 0) == 0 || looks_like_json(oracle) ? oracle : "@" + oracle);
      DerivationVal d = derivation_from_json(parse_json_text(s));
      if (o_.field_given) require_same_field(f, d.field());
      phi = oracles::from_value(d);
    }
    Decomposition dec = decompose(phi, n);
    if (json()) {
      emit(to_json(dec));
    } else {
      out_ << "B = " << render(dec.inner) << "\n";
      out_ << "sigma:";
      if (dec.sigma.empty()) out_ << " (empty)";
      for (const auto& [k, v] : dec.sigma) out_ << " E_" << k << k << " -> " << v.to_string() << ";";
      out_ << "\n";
      const auto& r = dec.report;
      out_ << "probes: n = " << r.probe_bound << ", window " << r.window << ", " << r.leibniz_pairs
           << " Leibniz pairs\n";
      out_ << "antisymmetry: diagonal " << (r.diagonal_antisymmetry ? "ok" : "FAIL") << ", off-diagonal "
           << (r.offdiagonal_antisymmetry ? "ok" : "FAIL") << "\n";
      std::size_t bad = 0;
      for (const auto& p : r.residuals) bad += p.vanishes ? 0 : 1;
      out_ << "residuals: " << r.residuals.size() - bad << "/" << r.residuals.size() << " vanish\n";
    }
    return dec.report.all_residuals_vanish() ? kOk : kDomainError;
  }

  int reindex_cmd(const std::string& dir, const std::string& arg) {
    Field f = field();
    if (dir == "to-n") {
      MatExpr r = reindex_to_N(read_zexpr(arg, f));
      if (json()) emit(to_document(r));
      else out_ << render(r) << "\n";
    } else if (dir == "to-z") {
      ZMatExpr r = reindex_to_Z(read_expr(arg, f));
      if (json()) emit(to_document(r));
      else out_ << render(r) << "\n";
    } else {
      throw UsageError("direction must be to-n or to-z, got '" + dir + "'");
    }
    return kOk;
  }

  int lattice_cmd() {
    if (json()) {
      Json ideals = Json::array(), edges = Json::array();
      for (IdealName l : kAllIdeals) ideals.push_back(std::string(ideal_name(l)));
      for (const auto& [lo, hi] : kHasseEdges) {
        edges.push_back(Json::array({std::string(ideal_name(lo)), std::string(ideal_name(hi))}));
      }
      emit(Json{{"ideals", ideals}, {"edges", edges}});
    } else {
      out_ << "ideals:";
      for (IdealName l : kAllIdeals) out_ << " " << ideal_name(l);
      out_ << "\n";
      for (const auto& [lo, hi] : kHasseEdges) out_ << ideal_name(lo) << " < " << ideal_name(hi) << "\n";
    }
    return kOk;
  }

 private:
  Options o_;
  std::ostream& out_;
};

}  // namespace cli

/// Runs one command line (without the program name). Exit codes: 0 success,
/// 1 domain error, 2 usage error.
inline int run_command(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact computations with column-finite infinite matrices", "glcf"};
  app.require_subcommand(1);
  app.fallthrough();
  cli::Options o;
  auto* field_opt = app.add_option("--field", o.field, "q, fp:<p> or z (z only for derive-decompose)");
  app.add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--window-check", o.window_check, "verification window size")->check(CLI::PositiveNumber);

  std::string a1, a2, a3, kind;
  std::vector<std::string> rest;
  std::function<int(cli::Runner&)> action;

  auto* c = app.add_subcommand("classify", "print the ideal generated by an expression");
  c->add_option("expr", a1)->required();
  c->callback([&] { action = [&](cli::Runner& r) { return r.classify_cmd(a1); }; });

  c = app.add_subcommand("window", "print the leading m x n block");
  c->add_option("expr", a1)->required();
  c->add_option("m", a2)->required();
  c->add_option("n", a3)->required();
  c->callback([&] { action = [&](cli::Runner& r) { return r.window_cmd(a1, a2, a3); }; });

  c = app.add_subcommand("bracket", "print [e1, e2] in closed form");
  c->add_option("e1", a1)->required();
  c->add_option("e2", a2)->required();
  c->callback([&] { action = [&](cli::Runner& r) { return r.bracket_cmd(a1, a2); }; });

  c = app.add_subcommand("solve-shift", "solve [X, S] = A and verify");
  c->add_option("expr", a1)->required();
  c->callback([&] { action = [&](cli::Runner& r) { return r.solve_shift_cmd(a1); }; });

  c = app.add_subcommand("witness", "build and verify a bracket chain");
  c->add_option("kind", kind, "eij-diag, eij-offdiag, slfr, extract-diag, superdiag, enlarge, complete, perfect, center")
      ->required();
  c->add_option("args", rest);
  c->callback([&] { action = [&](cli::Runner& r) { return r.witness_cmd(kind, rest); }; });

  c = app.add_subcommand("derive-decompose", "split a derivation into inner and central parts");
  c->add_option("oracle", a1, "oracle JSON file, inline JSON, or builtin: zero, identity")->required();
  c->add_option("n", a2)->required();
  c->callback([&] { action = [&](cli::Runner& r) { return r.derive_cmd(a1, a2); }; });

  c = app.add_subcommand("reindex", "transport between Z x Z and N x N indexing");
  c->add_option("direction", a1, "to-n or to-z")->required();
  c->add_option("expr", a2)->required();
  c->callback([&] { action = [&](cli::Runner& r) { return r.reindex_cmd(a1, a2); }; });

  c = app.add_subcommand("lattice", "print the ideal lattice");
  c->callback([&] { action = [&](cli::Runner& r) { return r.lattice_cmd(); }; });

  for (std::size_t k = 0; k < argv.size(); ++k) {
    const std::string& a = argv[k];
    if (a.rfind("-", 0) == 0) {
      if (a.find('=') == std::string::npos && a != "-h" && a != "--help") ++k;
      continue;
    }
    bool known = false;
    for (const auto* sub : app.get_subcommands({})) known |= sub->get_name() == a;
    if (!known) {
      err << "usage error: unknown command '" << a << "'\n";
      return cli::kUsageError;
    }
    break;
  }

  try {
    std::vector<std::string> args(argv.rbegin(), argv.rend());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return cli::kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return cli::kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return cli::kUsageError;
  }
  o.field_given = field_opt->count() > 0;

  try {
    (void)Field::parse(o.field);
  } catch (const Error& e) {
    err << "usage error: " << e.what() << "\n";
    return cli::kUsageError;
  }
  try {
    cli::Runner runner(o, out);
    return action(runner);
  } catch (const cli::UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return cli::kUsageError;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return cli::kDomainError;
  }
}

}  // namespace glcf
