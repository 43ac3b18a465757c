#include <gtest/gtest.h>

#include "glcf/glcf.hpp"
#include "support/generators.hpp"
#include "support/oracle.hpp"

using namespace glcf;

namespace {

const Field Q = Field::rationals();
Scalar q(long n, long d = 1) { return Scalar::from_mpq(Q, mpq_class(n, d)); }
MatExpr E(Index i, Index j) { return mat::basis(Q, i, j); }
MatExpr S() { return mat::superdiagonal(Q); }
MatExpr P(const char* s) { return parse_expr(s, Q); }

void expect_window_eq(const MatExpr& a, const MatExpr& b, Index n) {
  auto d = window(a, n, n).first_difference(window(b, n, n));
  EXPECT_FALSE(d) << render(a) << " vs " << render(b) << " at (" << (d ? d->first : 0) << "," << (d ? d->second : 0)
                  << ")";
}

}  // namespace

TEST(Sequence, Canonical) {
  SeqDesc a = SeqDesc::periodic(Q, {q(1), q(2), q(1), q(2)}, {q(1), q(2), q(1), q(2)});
  EXPECT_EQ(a.prefix_length(), 0);
  EXPECT_EQ(a.period_length(), 2);
  EXPECT_EQ(a.kind(), SeqDesc::Kind::EventuallyPeriodic);

  SeqDesc b = SeqDesc::periodic(Q, {q(5), q(3)}, {q(3)});
  EXPECT_EQ(b.prefix_length(), 1);
  EXPECT_EQ(b.kind(), SeqDesc::Kind::EventuallyConstant);

  SeqDesc c = SeqDesc::periodic(Q, {q(4), q(0)}, {q(0)});
  EXPECT_EQ(c.kind(), SeqDesc::Kind::FiniteSupport);
  EXPECT_EQ(c.finite_entries().size(), 1u);
  EXPECT_EQ(c, SeqDesc::finite(Q, {{1, q(4)}}));
}

TEST(Sequence, Arithmetic) {
  SeqDesc a = SeqDesc::periodic(Q, {}, {q(1), q(2)});
  SeqDesc b = SeqDesc::periodic(Q, {q(7)}, {q(1), q(0), q(0)});
  SeqDesc s = a + b;
  for (Index i = 1; i <= 40; ++i) EXPECT_EQ(s.at(i), a.at(i) + b.at(i));
  SeqDesc p = a * b;
  for (Index i = 1; i <= 40; ++i) EXPECT_EQ(p.at(i), a.at(i) * b.at(i));
  SeqDesc sh = a.shifted(3);
  for (Index i = 1; i <= 20; ++i) EXPECT_EQ(sh.at(i), a.at(i + 3));
  EXPECT_TRUE((a - a).is_zero());
}

TEST(IndexSetOps, Basics) {
  IndexSet ev = IndexSet::progression(2, 2);
  EXPECT_TRUE(ev.contains(4));
  EXPECT_FALSE(ev.contains(5));
  EXPECT_TRUE(ev.is_infinite());
  IndexSet odd = ev.complement();
  EXPECT_TRUE((ev | odd).is_all());
  EXPECT_TRUE((ev & odd).is_empty());
  IndexSet fin = IndexSet::finite({1, 3, 9});
  EXPECT_FALSE(fin.is_infinite());
  EXPECT_EQ(fin.finite_members(), (std::vector<Index>{1, 3, 9}));
  EXPECT_EQ(IndexSet::periodic({true, false, true, false}, {true, false}), IndexSet::progression(1, 2));
  EXPECT_TRUE(IndexSet::progression(3, 4).complement().is_infinite());
  EXPECT_FALSE(IndexSet::finite({2, 3}).complement_has_no_adjacent_pair());
  EXPECT_TRUE(IndexSet::progression(3, 4).complement().complement_has_no_adjacent_pair());
  EXPECT_FALSE(IndexSet::progression(3, 4).complement_has_no_adjacent_pair());
}

TEST(Evaluation, Examples) {
  EXPECT_EQ(entry(E(2, 3), 2, 3), q(1));
  EXPECT_EQ(entry(mat::bracket(E(1, 2), E(2, 1)), 1, 1), q(1));
  MatExpr d12 = mat::diag(SeqDesc::periodic(Q, {}, {q(1), q(2)}));
  EXPECT_EQ(entry(mat::prod(d12, S()), 1, 2), oracle::eval(mat::prod(d12, S()), 5, 5).at(1, 2));
  EXPECT_EQ(entry(mat::prod(d12, S()), 1, 2), q(1));

  Column c5 = column(S(), 5);
  ASSERT_EQ(c5.size(), 1u);
  EXPECT_EQ(c5.begin()->first, 4);
  for (Index j : {1, 4, 17}) {
    Column c = column(mat::row(3, SeqDesc::constant(q(7))), j);
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c.at(3), q(7));
  }
  MatExpr x = mat::scale(q(-1), mat::shift(-1, IndexSet::all(), SeqDesc::constant(q(1))));
  EXPECT_TRUE(column(mat::prod(x, S()), 1).empty());
  for (Index n : {2, 3, 9}) {
    Column c = column(mat::prod(x, S()), n);
    oracle::Dense o = oracle::eval(mat::prod(x, S()), n + 3, n);
    for (Index i = 1; i <= n + 3; ++i) EXPECT_EQ(c.count(i) ? c.at(i) : q(0), o.at(i, n));
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c.at(n), q(-1));
  }

  DenseBlock w = window(mat::identity(Q), 2, 2);
  EXPECT_EQ(w.at(1, 1), q(1));
  EXPECT_EQ(w.at(1, 2), q(0));
  DenseBlock swap = window(E(1, 2) + E(2, 1), 2, 2);
  EXPECT_EQ(swap.at(1, 2), q(1));
  EXPECT_EQ(swap.at(2, 1), q(1));
  EXPECT_EQ(swap.at(1, 1), q(0));
}

TEST(Evaluation, BracketExamples) {
  MatExpr a = P("shift(2) + row(1, periodic(1, 2))");
  EXPECT_TRUE(window(mat::bracket(a, a), 30, 30).is_zero());
  EXPECT_TRUE(window(mat::bracket(mat::scalar(q(3)), a), 30, 30).is_zero());
  expect_window_eq(mat::bracket(E(1, 2), E(2, 3)), E(1, 3), 10);
}

TEST(Evaluation, AgreesWithDenseOracle) {
  gen::Rng rng(11);
  for (int t = 0; t < 150; ++t) {
    Field f = t % 3 == 0 ? Field::prime(5) : Q;
    MatExpr a = gen::fragment(f, rng, 3);
    oracle::Dense o = oracle::eval(a, 25, 25);
    EXPECT_TRUE(o.same_as(window(a, 25, 25))) << render(a);
  }
}

TEST(Evaluation, ExtensionNodesAgreeWithOracle) {
  gen::Rng rng(12);
  for (int t = 0; t < 60; ++t) {
    MatExpr a = gen::finitely_supported(Q, rng);
    MatExpr x = mat::shift_solve(a);
    EXPECT_TRUE(oracle::eval(x, 30, 30).same_as(window(x, 30, 30))) << render(a);
    MatExpr m = mat::match(Q, gen::set(rng), IndexSet::progression(gen::uniform(rng, 1, 4), gen::uniform(rng, 1, 3)),
                           gen::uniform(rng, 0, 2), gen::uniform(rng, 0, 2), gen::coin(rng));
    EXPECT_TRUE(oracle::eval(m, 30, 30).same_as(window(m, 30, 30))) << render(m);
  }
}

TEST(Evaluation, ColumnFinitenessAndCoherence) {
  gen::Rng rng(13);
  Evaluator ev;
  int samples = 0;
  while (samples < 1000) {
    MatExpr a = gen::fragment(Q, rng, 2);
    DenseBlock w = ev.window(a, 12, 12);
    for (int s = 0; s < 20; ++s, ++samples) {
      Index i = gen::uniform(rng, 1, 12), j = gen::uniform(rng, 1, 12);
      const Column& c = ev.column(a, j);
      Index bound = ev.row_bound(a, j);
      for (const auto& [r, v] : c) {
        EXPECT_LE(r, bound);
        EXPECT_FALSE(v.is_zero());
      }
      EXPECT_EQ(ev.entry(a, i, j), w.at(i, j));
      EXPECT_EQ(entry(a, i, j), w.at(i, j));
    }
  }
}

TEST(Algebra, AntisymmetryAndJacobi) {
  gen::Rng rng(14);
  for (int t = 0; t < 40; ++t) {
    Field f = t % 2 ? Field::prime(3) : Q;
    MatExpr a = gen::fragment(f, rng, 1), b = gen::fragment(f, rng, 1), c = gen::fragment(f, rng, 1);
    DenseBlock ab = window(mat::bracket(a, b), 20, 20), ba = window(mat::bracket(b, a), 20, 20);
    for (Index i = 1; i <= 20; ++i)
      for (Index j = 1; j <= 20; ++j) EXPECT_EQ(ab.at(i, j), -ba.at(i, j));
    MatExpr jac = mat::sum({mat::bracket(a, mat::bracket(b, c)), mat::bracket(b, mat::bracket(c, a)),
                            mat::bracket(c, mat::bracket(a, b))},
                           f);
    EXPECT_TRUE(window(jac, 20, 20).is_zero());
    EXPECT_TRUE(window(mat::bracket(mat::scalar(gen::scalar(f, rng)), a), 20, 20).is_zero());
  }
}

TEST(Normalize, Examples) {
  CanonicalForm a = normalize(mat::scalar(q(2)) + E(1, 1));
  EXPECT_EQ(a.alpha, q(2));
  ASSERT_EQ(a.fr.size(), 1u);
  EXPECT_EQ(a.fr.at(1), SeqDesc::unit(Q, 1));
  EXPECT_TRUE(a.tail.empty());

  MatExpr d = mat::diag(SeqDesc::periodic(Q, {q(5)}, {q(3)}));
  CanonicalForm b = normalize(d);
  EXPECT_EQ(b.alpha, q(3));
  ASSERT_EQ(b.fr.size(), 1u);
  EXPECT_EQ(b.fr.at(1), SeqDesc::unit(Q, 1).scaled(q(2)));
  EXPECT_TRUE(b.tail.empty());
  expect_window_eq(b.to_expr(), d, 10);
  EXPECT_TRUE(oracle::eval(b.to_expr(), 10, 10).same_as(window(d, 10, 10)));

  CanonicalForm c = normalize(S());
  EXPECT_TRUE(c.alpha.is_zero());
  EXPECT_TRUE(c.fr.empty());
  ASSERT_EQ(c.tail.size(), 1u);
  EXPECT_EQ(c.tail.front(), S());
}

TEST(Normalize, ProductRules) {
  expect_window_eq(normalize(S() * S()).to_expr(), mat::shift(Q, 2), 20);
  MatExpr d = P("diag(periodic(1, 2))");
  expect_window_eq(normalize(d * S()).to_expr(), P("shift(1, all, periodic(1, 2))"), 20);
  expect_window_eq(normalize(S() * d).to_expr(), P("shift(1, all, periodic(2, 1))"), 20);
  expect_window_eq(normalize(d * d).to_expr(), P("diag(periodic(1, 4))"), 20);
  EXPECT_TRUE(normalize(P("row(2, const(1)) * shift(-1)")).tail.empty());
  EXPECT_THROW(normalize(mat::shift_solve(E(1, 1))), Error);
}

TEST(Normalize, SoundnessOnRandomFragments) {
  gen::Rng rng(15);
  for (int t = 0; t < 120; ++t) {
    Field f = t % 4 == 0 ? Field::prime(7) : Q;
    MatExpr a = gen::fragment(f, rng, 3);
    CanonicalForm cf = normalize(a);
    expect_window_eq(cf.to_expr(), a, 50);
    // Canonical forms are stable.
    CanonicalForm again = normalize(cf.to_expr());
    EXPECT_EQ(again.to_expr(), cf.to_expr());
    Scalar tr = Scalar::zero(f);
    for (const auto& [r, s] : cf.fr) tr += s.at(r);
    EXPECT_EQ(tr, cf.fr_trace);
  }
}

TEST(Trace, Examples) {
  EXPECT_EQ(trace_fr(E(1, 1)), q(1));
  EXPECT_EQ(trace_fr(E(1, 2)), q(0));
  MatExpr br = mat::bracket(mat::row(1, SeqDesc::constant(q(1))), S());
  EXPECT_EQ(trace_fr(br), q(0));
  oracle::Dense o = oracle::eval(br, 30, 30);
  Scalar tr = q(0);
  for (Index i = 1; i <= 30; ++i) tr += o.at(i, i);
  EXPECT_EQ(tr, q(0));
  try {
    (void)trace_fr(S());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotInGlFr);
  }
}

TEST(Trace, VanishesOnBrackets) {
  gen::Rng rng(16);
  for (int t = 0; t < 100; ++t) {
    MatExpr a = gen::glfr(Q, rng);
    MatExpr b = gen::fragment(Q, rng, 2);
    EXPECT_TRUE(trace_fr(mat::bracket(a, b)).is_zero()) << render(a) << " , " << render(b);
  }
}

TEST(Normalize, SizeCap) {
  std::vector<Scalar> p1(1021, q(0)), p2(1031, q(0));
  p1[0] = q(1);
  p2[0] = q(1);
  try {
    (void)(SeqDesc::periodic(Q, {}, p1) + SeqDesc::periodic(Q, {}, p2));
    FAIL() << "expected the descriptor cap to trip";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotNormalizable);
  }
}
