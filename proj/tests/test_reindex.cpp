#include <gtest/gtest.h>

#include "glcf/parser.hpp"
#include "support/generators.hpp"

using namespace glcf;

namespace {

using Sparse = std::map<std::pair<Index, Index>, Scalar>;

Field Q() { return Field::rationals(); }

Sparse random_sparse(Field f, gen::Rng& rng, Index span = 6, Index count = 6) {
  Sparse m;
  for (Index k = gen::uniform(rng, 1, count); k > 0; --k) {
    m[{gen::uniform(rng, -span, span), gen::uniform(rng, -span, span)}] = gen::scalar(f, rng, false);
  }
  return m;
}

Sparse multiply(Field f, const Sparse& a, const Sparse& b) {
  Sparse out;
  for (const auto& [ik, x] : a) {
    for (const auto& [kj, y] : b) {
      if (ik.second != kj.first) continue;
      auto it = out.emplace(std::make_pair(ik.first, kj.second), Scalar::zero(f)).first;
      it->second += x * y;
    }
  }
  return out;
}

// Dense N-side picture of a Z-side sparse matrix, placed by the index bijection.
DenseBlock placed(Field f, const Sparse& m, Index n) {
  auto to_n = [](Index z) { return z >= 0 ? 2 * z + 1 : -2 * z; };
  Sparse moved;
  for (const auto& [ij, v] : m) {
    if (!v.is_zero()) moved.emplace(std::make_pair(to_n(ij.first), to_n(ij.second)), v);
  }
  return window(mat::finite(f, moved), n, n);
}

bool same(const DenseBlock& a, const DenseBlock& b) { return !a.first_difference(b); }

}  // namespace

TEST(Reindex, IndexMap) {
  EXPECT_EQ(sigma(0), 1);
  EXPECT_EQ(sigma(-1), 2);
  EXPECT_EQ(sigma(1), 3);
  EXPECT_EQ(sigma(-2), 4);
  for (Index z = -1000; z <= 1000; ++z) EXPECT_EQ(sigma_inv(sigma(z)), z);
  std::set<Index> image;
  for (Index z = -1000; z < 1000; ++z) image.insert(sigma(z));
  EXPECT_EQ(image.size(), 2000u);
  EXPECT_EQ(*image.begin(), 1);
  EXPECT_EQ(*image.rbegin(), 2000);
  for (Index n = 1; n <= 2000; ++n) EXPECT_EQ(sigma(sigma_inv(n)), n);
}

TEST(Reindex, Examples) {
  Field f = Q();
  EXPECT_EQ(reindex_to_N(zmat::basis(f, 0, 1)), mat::basis(f, 1, 3));
  Scalar c = Scalar::from_int(f, 4);
  EXPECT_EQ(reindex_to_N(zmat::scalar(c)), mat::scalar(c));
  EXPECT_EQ(reindex_to_Z(mat::basis(f, 2, 5)), zmat::basis(f, -1, 2));
}

TEST(Reindex, PlacedByBijection) {
  gen::Rng rng(41);
  Field f = Q();
  for (int t = 0; t < 100; ++t) {
    Sparse m = random_sparse(f, rng);
    EXPECT_TRUE(same(window(reindex_to_N(zmat::finite(f, m)), 40, 40), placed(f, m, 40)));
  }
}

TEST(Reindex, HomomorphismOnFinitePairs) {
  gen::Rng rng(42);
  for (Field f : {Q(), Field::prime(5), Field::integers()}) {
    for (int t = 0; t < 100; ++t) {
      Sparse ma = random_sparse(f, rng), mb = random_sparse(f, rng);
      ZMatExpr a = zmat::finite(f, ma), b = zmat::finite(f, mb);
      MatExpr na = reindex_to_N(a), nb = reindex_to_N(b);
      Scalar c = gen::scalar(f, rng);
      auto w = [](const MatExpr& e) { return window(e, 40, 40); };
      EXPECT_TRUE(same(w(reindex_to_N(a + b)), w(na + nb)));
      EXPECT_TRUE(same(w(reindex_to_N(c * a)), w(c * na)));
      EXPECT_TRUE(same(w(reindex_to_N(a * b)), w(na * nb)));
      EXPECT_TRUE(same(w(reindex_to_N(zmat::bracket(a, b))), w(mat::bracket(na, nb))));
      EXPECT_TRUE(same(w(na * nb), placed(f, multiply(f, ma, mb), 40)));
    }
  }
}

TEST(Reindex, EntriesPreservedOnStructuredExpressions) {
  gen::Rng rng(43);
  Field f = Q();
  for (int t = 0; t < 60; ++t) {
    ZMatExpr a = gen::any_zexpr(f, rng);
    MatExpr n = reindex_to_N(a);
    for (Index i = -6; i <= 6; ++i)
      for (Index j = -6; j <= 6; ++j) EXPECT_EQ(entry(n, sigma(i), sigma(j)), zentry(a, i, j)) << render(a);
  }
}

TEST(Reindex, RoundTripToZ) {
  gen::Rng rng(44);
  Field f = Q();
  for (int t = 0; t < 60; ++t) {
    ZMatExpr a = gen::any_zexpr(f, rng, 1);
    ZMatExpr back = reindex_to_Z(reindex_to_N(a));
    for (Index i = -8; i <= 8; ++i)
      for (Index j = -8; j <= 8; ++j) EXPECT_EQ(zentry(back, i, j), zentry(a, i, j)) << render(a);
  }
  for (int t = 0; t < 40; ++t) {
    MatExpr a = gen::fragment(f, rng, 1);
    MatExpr back;
    try {
      back = reindex_to_N(reindex_to_Z(a));
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::NotTransportable);
      continue;
    }
    EXPECT_TRUE(same(window(back, 30, 30), window(a, 30, 30))) << render(a);
  }
}

TEST(Reindex, ClassificationTransport) {
  gen::Rng rng(45);
  Field f = Q();
  for (int t = 0; t < 50; ++t) {
    Sparse m = random_sparse(f, rng);
    Scalar tr = Scalar::zero(f);
    for (const auto& [ij, v] : m) {
      if (ij.first == ij.second) tr += v;
    }
    Index off = 7 + t;
    m[{off, off}] = -tr;
    m[{-off, off + 1}] = Scalar::one(f);
    EXPECT_EQ(classify(reindex_to_N(zmat::finite(f, m))), IdealName::SlFr);
  }
  EXPECT_EQ(classify(reindex_to_N(zmat::shift(1, ZSet::all(), ZSeq::constant(Scalar::one(f))))), IdealName::GlCf);
}

TEST(Reindex, Errors) {
  Field f = Q();
  try {
    (void)reindex_to_Z(mat::superdiagonal(f));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotTransportable);
  }
  try {
    (void)reindex_to_Z(mat::shift_solve(mat::basis(f, 1, 1)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotTransportable);
  }
}
