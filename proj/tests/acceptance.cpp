// Acceptance suite: one [PASS]/[FAIL] line per criterion, nonzero exit on
// any failure. All comparisons are exact.

#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "glcf/glcf.hpp"
#include "glcf/parser.hpp"
#include "support/corpus.hpp"
#include "support/generators.hpp"
#include "support/golden.hpp"
#include "support/oracle.hpp"

using namespace glcf;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
  void require(bool ok, const std::string& why) {
    if (!ok) fail(why);
  }
};

Field Q() { return Field::rationals(); }
MatExpr P(const std::string& s, Field f = Field::rationals()) { return parse_expr(s, f); }

bool same(const DenseBlock& a, const DenseBlock& b) { return !a.first_difference(b); }
bool same_window(const MatExpr& a, const MatExpr& b, Index n) { return same(window(a, n, n), window(b, n, n)); }

// Membership shape of each ideal: scalar part allowed, finite-row part
// (0 none, 1 trace zero, 2 any), tail allowed.
struct Shape {
  int dsc, fr, tail;
  bool operator<=(const Shape& o) const { return dsc <= o.dsc && fr <= o.fr && tail <= o.tail; }
  bool operator==(const Shape& o) const = default;
};

Shape shape_of(IdealName l) {
  switch (l) {
    case IdealName::Zero: return {0, 0, 0};
    case IdealName::Dsc: return {1, 0, 0};
    case IdealName::SlFr: return {0, 1, 0};
    case IdealName::GlFr: return {0, 2, 0};
    case IdealName::DscSlFr: return {1, 1, 0};
    case IdealName::DscGlFr: return {1, 2, 0};
    case IdealName::GlCf: return {1, 2, 1};
  }
  return {9, 9, 9};
}

Outcome ac1() {
  Outcome r;
  // Figure coordinates and drawn segments.
  std::map<std::pair<double, double>, IdealName> at = {
      {{0, 0}, IdealName::Zero},      {{-2, 1}, IdealName::Dsc},       {{3, 1.5}, IdealName::SlFr},
      {{3, 2.5}, IdealName::GlFr},    {{0, 2.5}, IdealName::DscSlFr},  {{0, 3.5}, IdealName::DscGlFr},
      {{0, 5}, IdealName::GlCf}};
  std::vector<std::vector<std::pair<double, double>>> paths = {
      {{0, 0}, {-2, 1}, {0, 2.5}, {0, 3.5}, {0, 5}},
      {{0, 0}, {3, 1.5}, {3, 2.5}, {0, 3.5}},
      {{3, 1.5}, {0, 2.5}}};
  std::set<std::pair<IdealName, IdealName>> figure;
  for (const auto& p : paths) {
    for (std::size_t k = 0; k + 1 < p.size(); ++k) {
      auto a = p[k], b = p[k + 1];
      if (a.second > b.second) std::swap(a, b);
      figure.insert({at.at(a), at.at(b)});
    }
  }

  r.require(kAllIdeals.size() == 7, "lattice does not have 7 elements");
  std::set<IdealName> distinct(kAllIdeals.begin(), kAllIdeals.end());
  r.require(distinct.size() == 7, "duplicate lattice elements");

  std::set<std::pair<IdealName, IdealName>> covers;
  for (IdealName a : kAllIdeals) {
    for (IdealName b : kAllIdeals) {
      Shape sa = shape_of(a), sb = shape_of(b);
      r.require(leq(a, b) == (sa <= sb), "order disagrees with membership shapes");
      if (a == b || !leq(a, b)) continue;
      bool cover = true;
      for (IdealName c : kAllIdeals) {
        if (c != a && c != b && leq(a, c) && leq(c, b)) cover = false;
      }
      if (cover) covers.insert({a, b});
    }
  }
  std::set<std::pair<IdealName, IdealName>> listed(kHasseEdges.begin(), kHasseEdges.end());
  r.require(figure.size() == 8, "figure does not have 8 edges");
  r.require(covers == figure, "computed covering relation differs from the figure");
  r.require(listed == figure, "listed edges differ from the figure");

  for (IdealName a : kAllIdeals) {
    for (IdealName b : kAllIdeals) {
      IdealName j = join(a, b), m = meet(a, b);
      Shape sa = shape_of(a), sb = shape_of(b);
      Shape hi{std::max(sa.dsc, sb.dsc), std::max(sa.fr, sb.fr), std::max(sa.tail, sb.tail)};
      Shape lo{std::min(sa.dsc, sb.dsc), std::min(sa.fr, sb.fr), std::min(sa.tail, sb.tail)};
      r.require(shape_of(j) == hi && shape_of(m) == lo, "join/meet disagree with the shapes");
      r.require(join(a, b) == join(b, a) && meet(a, b) == meet(b, a), "join/meet not symmetric");
      r.require((j == b) == leq(a, b) && (m == a) == leq(a, b), "join/meet inconsistent with the order");
    }
  }
  return r;
}

Outcome ac2() {
  Outcome r;
  const auto& fx = corpus::classifier_fixtures();
  std::map<IdealName, int> per;
  for (const auto& x : fx) {
    MatExpr a = P(x.text);
    IdealName got = classify(a);
    r.require(got == x.expected, x.text + " classified as " + std::string(ideal_name(got)));
    r.require(corpus::window_class(a) == x.expected, x.text + " window predicates disagree");
    ++per[x.expected];
  }
  r.require(fx.size() >= 21, "fewer than 21 fixtures");
  for (IdealName l : kAllIdeals) r.require(per[l] >= 3, "fewer than 3 fixtures for " + std::string(ideal_name(l)));
  return r;
}

// [X, S] with X from the column recursion, column-1 sign as given.
oracle::Dense shift_bracket_by_recursion(const MatExpr& a, Index n, int col1_sign) {
  Field f = a.field();
  oracle::Dense av = oracle::eval(a, n + 1, n + 1);
  oracle::Dense x(f, n + 2, n + 1);
  for (Index m = 1; m <= n; ++m) {
    x.at(m + 1, 1) = col1_sign > 0 ? av.at(m, 1) : -av.at(m, 1);
    for (Index c = 2; c <= n + 1; ++c) x.at(m + 1, c) = x.at(m, c - 1) - av.at(m, c);
  }
  oracle::Dense out(f, n, n);
  for (Index i = 1; i <= n; ++i)
    for (Index j = 1; j <= n; ++j) out.at(i, j) = (j >= 2 ? x.at(i, j - 1) : Scalar::zero(f)) - x.at(i + 1, j);
  return out;
}

Outcome ac3() {
  Outcome r;
  gen::Rng rng(301);
  const Index n = 60;
  for (Field f : {Q(), Field::prime(5)}) {
    MatExpr s = mat::superdiagonal(f);
    for (int t = 0; t < 100; ++t) {
      MatExpr a = gen::finitely_supported(f, rng);
      r.require(same_window(mat::bracket(solve_shift_bracket(a), s), a, n), "random case fails: " + render(a));
    }
  }
  for (const char* text : {"I", "shift(1)", "diag(periodic(1,2))"}) {
    MatExpr a = P(text);
    r.require(same_window(mat::bracket(solve_shift_bracket(a), mat::superdiagonal(Q())), a, n),
              std::string("structured case fails: ") + text);
  }
  MatExpr e11 = P("E(1,1)");
  oracle::Dense want = oracle::eval(e11, n, n);
  r.require(shift_bracket_by_recursion(e11, n, -1).a == want.a, "corrected recursion misses E(1,1)");
  r.require(shift_bracket_by_recursion(e11, n, +1).a != want.a, "uncorrected sign passes the oracle");
  return r;
}

Outcome ac4() {
  Outcome r;
  gen::Rng rng(401);
  for (int t = 0; t < 50; ++t) {
    Field f = t % 5 == 4 ? Field::prime(2) : t % 5 == 3 ? Field::prime(5) : Q();
    MatExpr b = gen::slfr(f, rng);
    // Off-diagonal pivot as the seed.
    Index i = gen::uniform(rng, 1, 5), j = i + gen::uniform(rng, 1, 3);
    BracketChain c = slfr_certificate(mat::basis(f, i, j), b);
    ChainVerdict v = verify_chain(c, 60);
    r.require(v.pass, f.to_string() + " " + render(b) + ": " + v.message);
    r.require(c.target == b || same_window(c.target, b, 60), "chain ends away from " + render(b));
  }
  MatExpr swap2 = P("E(1,2) + E(2,1)", Field::prime(2));
  r.require(verify_chain(eij_from_offdiag(swap2, 1, 2), 60).pass, "F_2 pivot chain fails");
  return r;
}

Outcome ac5() {
  Outcome r;
  gen::Rng rng(501);
  auto verified = [&](const BracketChain& c, const std::string& what) {
    ChainVerdict v = verify_chain(c, 60);
    r.require(v.pass, what + ": " + v.message);
  };
  for (int t = 0; t < 20; ++t) {
    Field f = t % 2 ? Field::prime(5) : Q();
    MatExpr a = gen::shift_tail(f, rng);
    std::string name = render(a);
    DiagExtraction ex = extract_diag(a);
    verified(ex.chain, name + " extract_diag");
    SuperdiagResult sd = superdiag_from_diag(ex.d);
    verified(sd.chain, name + " superdiag_from_diag");
    r.require(sd.h.is_infinite(), name + ": H is finite");
    EnlargeResult en = enlarge_set(sd.h, f);
    verified(en.chain, name + " enlarge_set");
    r.require(en.g.complement_has_no_adjacent_pair(), name + ": complement of G has adjacent indices");
    r.require((sd.h - en.g).is_empty(), name + ": H is not inside G");
    for (Index k = 1; k <= 200; ++k) {
      r.require(en.g.contains(k) || en.g.contains(k + 1), name + ": gap property fails at " + std::to_string(k));
    }
    BracketChain done = complete_superdiag(en.g, f);
    verified(done, name + " complete_superdiag");
    r.require(done.target == mat::superdiagonal(f), name + ": pipeline does not end at S");
  }
  return r;
}

bool scalar_only(const MatExpr& a) {
  CanonicalForm cf = normalize(a);
  return cf.fr.empty() && cf.tail.empty();
}

MatExpr probe_local(Field f, gen::Rng& rng, Index n) {
  std::vector<MatExpr> parts{gen::finite(f, rng, n - 2, 5)};
  if (gen::coin(rng, 0.5)) parts.push_back(mat::row(gen::uniform(rng, 1, n - 2), gen::seq(f, rng)));
  if (gen::coin(rng, 0.6)) {
    parts.push_back(mat::diag(SeqDesc::periodic(f, gen::scalars(f, rng, gen::uniform(rng, 0, 2)),
                                                gen::scalars(f, rng, gen::uniform(rng, 1, 3)))));
  }
  if (gen::coin(rng, 0.3)) parts.push_back(mat::scalar(gen::scalar(f, rng, false)));
  return mat::sum(parts, f);
}

Outcome ac6() {
  Outcome r;
  gen::Rng rng(601);
  for (Field f : {Q(), Field::prime(5), Field::integers()}) {
    for (int t = 0; t < 50; ++t) {
      Index n = gen::uniform(rng, 4, 8);
      MatExpr b = probe_local(f, rng, n);
      std::string name = f.to_string() + " " + render(b);
      Decomposition d = decompose(oracles::inner(b), n);
      r.require(scalar_only(d.inner - b), name + ": B' - B is not scalar");
      r.require(d.sigma.empty(), name + ": nonzero central part");
      r.require(d.report.all_residuals_vanish(), name + ": residual does not vanish");
      r.require(d.report.diagonal_antisymmetry, name + ": diagonal antisymmetry fails");
      r.require(d.report.offdiagonal_antisymmetry, name + ": off-diagonal antisymmetry fails");
    }
  }
  Field f = Q();
  DerivationOracle squaring{[](const MatExpr& x) { return mat::prod(x, x); }, 0, f, "x^2"};
  for (const DerivationOracle& bad : {oracles::identity(f), squaring}) {
    try {
      (void)decompose(bad, 5);
      r.fail(bad.name + " accepted");
    } catch (const Error& e) {
      r.require(e.code() == Errc::NotADerivation || e.code() == Errc::SparsityViolated,
                bad.name + " rejected with " + e.what());
    }
  }
  return r;
}

using Sparse = std::map<std::pair<Index, Index>, Scalar>;

Sparse random_sparse(Field f, gen::Rng& rng) {
  Sparse m;
  for (Index k = gen::uniform(rng, 1, 6); k > 0; --k) {
    m[{gen::uniform(rng, -6, 6), gen::uniform(rng, -6, 6)}] = gen::scalar(f, rng, false);
  }
  return m;
}

Sparse multiply(Field f, const Sparse& a, const Sparse& b) {
  Sparse out;
  for (const auto& [ik, x] : a)
    for (const auto& [kj, y] : b) {
      if (ik.second != kj.first) continue;
      auto it = out.emplace(std::make_pair(ik.first, kj.second), Scalar::zero(f)).first;
      it->second += x * y;
    }
  return out;
}

DenseBlock placed(Field f, const Sparse& m, Index n) {
  auto to_n = [](Index z) { return z >= 0 ? 2 * z + 1 : -2 * z; };
  Sparse moved;
  for (const auto& [ij, v] : m) {
    if (!v.is_zero()) moved.emplace(std::make_pair(to_n(ij.first), to_n(ij.second)), v);
  }
  return window(mat::finite(f, moved), n, n);
}

Outcome ac7() {
  Outcome r;
  for (Index z = -1000; z <= 1000; ++z) r.require(sigma_inv(sigma(z)) == z, "sigma_inv(sigma(z)) != z");
  for (Index n = 1; n <= 2001; ++n) r.require(sigma(sigma_inv(n)) == n, "sigma(sigma_inv(n)) != n");
  gen::Rng rng(701);
  for (int t = 0; t < 100; ++t) {
    Field f = t % 3 == 0 ? Q() : t % 3 == 1 ? Field::prime(5) : Field::integers();
    Sparse ma = random_sparse(f, rng), mb = random_sparse(f, rng);
    ZMatExpr a = zmat::finite(f, ma), b = zmat::finite(f, mb);
    MatExpr na = reindex_to_N(a), nb = reindex_to_N(b);
    Scalar c = gen::scalar(f, rng);
    auto w = [](const MatExpr& e) { return window(e, 40, 40); };
    r.require(same(w(na), placed(f, ma, 40)), "image is not placed by the bijection");
    r.require(same(w(reindex_to_N(a + b)), w(na + nb)), "sum not preserved");
    r.require(same(w(reindex_to_N(c * a)), w(c * na)), "scaling not preserved");
    r.require(same(w(reindex_to_N(a * b)), w(na * nb)), "product not preserved");
    r.require(same(w(na * nb), placed(f, multiply(f, ma, mb), 40)), "product differs from the sparse oracle");
    r.require(same(w(reindex_to_N(zmat::bracket(a, b))), w(mat::bracket(na, nb))), "bracket not preserved");
  }
  return r;
}

Outcome ac8() {
  Outcome r;
  gen::Rng rng(801);
  for (int t = 0; t < 200; ++t) {
    Field f = t % 4 == 3 ? Field::prime(3) : Q();
    MatExpr a = gen::fragment(f, rng, 1), b = gen::fragment(f, rng, 1), c = gen::fragment(f, rng, 1);
    DenseBlock ab = window(mat::bracket(a, b), 40, 40), ba = window(mat::bracket(b, a), 40, 40);
    for (Index i = 1; i <= 40; ++i)
      for (Index j = 1; j <= 40; ++j) r.require(ab.at(i, j) == -ba.at(i, j), "antisymmetry fails");
    MatExpr jac = mat::sum({mat::bracket(a, mat::bracket(b, c)), mat::bracket(b, mat::bracket(c, a)),
                            mat::bracket(c, mat::bracket(a, b))},
                           f);
    r.require(window(jac, 40, 40).is_zero(), "Jacobi fails");
  }
  for (int t = 0; t < 100; ++t) {
    MatExpr a = gen::glfr(Q(), rng), b = gen::fragment(Q(), rng, 2);
    r.require(trace_fr(mat::bracket(a, b)).is_zero(), "nonzero trace of " + render(a) + " , " + render(b));
  }
  return r;
}

Outcome ac9() {
  Outcome r;
  auto cases = golden::load_cases();
  std::map<std::string, std::set<std::string>> formats;
  std::set<int> codes;
  const std::set<std::string> commands = {"classify", "window", "bracket", "solve-shift",
                                          "witness", "derive-decompose", "reindex", "lattice"};
  for (const auto& c : cases) {
    std::string diff = golden::check(c);
    r.require(diff.empty(), diff);
    codes.insert(c.exit);
    bool json = false;
    for (std::size_t k = 0; k < c.args.size(); ++k) {
      if (c.args[k] == "--format" && k + 1 < c.args.size() && c.args[k + 1] == "json") json = true;
      if (commands.count(c.args[k]) && c.exit == 0) {
        formats[c.args[k]].insert(json ? "json" : "text");
        break;
      }
    }
  }
  for (const auto& name : commands) {
    r.require(formats[name].size() == 2, name + " lacks a text or json golden");
  }
  r.require(codes == std::set<int>{0, 1, 2}, "goldens do not cover exit codes 0, 1 and 2");
  r.require(golden::run({"--help"}).code == cli::kOk, "--help is not exit 0");
  r.require(golden::run({"classify", "E(0,1)"}).code == cli::kDomainError, "parse error is not exit 1");
  r.require(golden::run({"classify"}).code == cli::kUsageError, "missing argument is not exit 2");

  gen::Rng rng(901);
  for (int t = 0; t < 500; ++t) {
    Field f = t % 3 == 0 ? Q() : t % 3 == 1 ? Field::prime(5) : Field::prime(2);
    MatExpr e = gen::any_expr(f, rng);
    std::string text = render(e);
    try {
      r.require(parse_expr(text, f) == e, "round trip changes " + text);
    } catch (const Error& err) {
      r.fail(text + ": " + err.what());
    }
  }
  return r;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5},
      {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9}};
  int failed = 0;
  for (const auto& [id, run] : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream line;
    line << (o.pass ? "[PASS] " : "[FAIL] ") << id;
    line.setf(std::ios::fixed);
    line.precision(2);
    line << " (" << secs << " s)";
    if (!o.pass) line << ": " << o.detail;
    std::cout << line.str() << std::endl;
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
