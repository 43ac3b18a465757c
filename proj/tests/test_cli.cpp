#include <gtest/gtest.h>

#include "glcf/json_io.hpp"
#include "support/golden.hpp"

using namespace glcf;

namespace {

golden::Outcome run(std::vector<std::string> args) { return golden::run(args); }

}  // namespace

class Golden : public ::testing::TestWithParam<golden::Case> {};

TEST_P(Golden, MatchesRecordedOutput) {
  EXPECT_EQ(golden::check(GetParam()), "");
}

INSTANTIATE_TEST_SUITE_P(Cli, Golden, ::testing::ValuesIn(golden::load_cases()),
                         [](const auto& info) { return info.param.name; });

TEST(Cli, SpecExamples) {
  auto c = run({"classify", "E(1,2)"});
  EXPECT_EQ(c.code, cli::kOk);
  EXPECT_EQ(c.out, "sl_fr\n");
  EXPECT_EQ(run({"classify", "I"}).out, "d_sc\n");
  auto s = run({"solve-shift", "E(1,1)"});
  EXPECT_EQ(s.code, cli::kOk);
  EXPECT_NE(s.out.find("verified at 60x60: PASS"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"--help"}).code, cli::kOk);
  EXPECT_EQ(run({}).code, cli::kUsageError);
  EXPECT_EQ(run({"classify"}).code, cli::kUsageError);
  EXPECT_EQ(run({"--format", "xml", "lattice"}).code, cli::kUsageError);
  EXPECT_EQ(run({"--window-check", "0", "lattice"}).code, cli::kUsageError);
  EXPECT_EQ(run({"--field", "z", "bracket", "I", "I"}).code, cli::kUsageError);
  auto d = run({"classify", "E(0,1)"});
  EXPECT_EQ(d.code, cli::kDomainError);
  EXPECT_EQ(d.err.rfind("ParseError: ", 0), 0u);
  EXPECT_TRUE(d.out.empty());
  auto n = run({"witness", "superdiag", "3*I"});
  EXPECT_EQ(n.code, cli::kDomainError);
  EXPECT_EQ(n.err.rfind("FiniteDisagreement: ", 0), 0u);
}

TEST(Cli, WindowCheckSize) {
  auto a = run({"--window-check", "12", "solve-shift", "shift(1)"});
  EXPECT_NE(a.out.find("verified at 12x12: PASS"), std::string::npos);
  auto b = run({"--window-check", "12", "witness", "eij-diag", "diag(periodic(1; 2))", "1", "2"});
  EXPECT_NE(b.out.find("verified at 12x12: PASS"), std::string::npos);
}

TEST(Cli, JsonOutputsReparse) {
  auto c = run({"--format", "json", "classify", "I + shift(2)"});
  Json doc = Json::parse(c.out);
  EXPECT_EQ(doc["ideal"], "gl_cf");
  EXPECT_EQ(from_document(doc), parse_expr("I + shift(2)", Field::rationals()));

  auto w = run({"--format", "json", "witness", "slfr", "E(1,2)", "E(2,3)"});
  Json wj = Json::parse(w.out);
  EXPECT_EQ(wj["verified"]["pass"], true);
  BracketChain chain = chain_from_json(wj["chain"]);
  EXPECT_TRUE(verify_chain(chain, 30).pass);

  auto b = run({"--format", "json", "bracket", "E(1,2)", "E(2,3)"});
  Json bj = Json::parse(b.out);
  EXPECT_EQ(bj["text"], "finite{1,3: 1}");
}

TEST(Cli, ExpressionFromJsonText) {
  Json doc = to_document(parse_expr("E(1,1) + E(2,1)", Field::rationals()));
  auto c = run({"classify", doc.dump()});
  EXPECT_EQ(c.code, cli::kOk);
  EXPECT_EQ(c.out, "gl_fr\n");
  auto bad = run({"classify", R"({"field":"q","expr":{"kind":"foo"}})"});
  EXPECT_EQ(bad.code, cli::kDomainError);
  EXPECT_NE(bad.err.find("/expr/kind"), std::string::npos);
}
