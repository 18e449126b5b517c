#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "naive.hpp"
#include "vilogic/bundled.hpp"
#include "vilogic/io.hpp"
#include "vilogic/oracle.hpp"

using namespace vilogic;

namespace {

const Signature sig = bundled::boolean_signature();

Formula f(std::string_view text) { return parse_formula(text, sig); }
FormulaSet fs(std::string_view text) { return FormulaSet(parse_formula_list(text, sig)); }

Valuation val(const FiniteAlgebra& a, std::initializer_list<std::pair<const char*, const char*>> pairs) {
  Valuation v;
  for (auto [var, e] : pairs) v[var] = a.element(e);
  return v;
}

}  // namespace

TEST(Evaluate, WeakKleeneExamples) {
  auto wk = bundled::weak_kleene();
  EXPECT_EQ(wk.name(evaluate(wk, f("and(x, y)"), val(wk, {{"x", "1"}, {"y", "n"}}))), "n");
  EXPECT_EQ(wk.name(evaluate(wk, f("or(x, y)"), val(wk, {{"x", "0"}, {"y", "n"}}))), "n");
  EXPECT_EQ(wk.name(evaluate(wk, f("not(x)"), val(wk, {{"x", "n"}}))), "n");
}

TEST(Evaluate, ValueTableMatchesPointwiseEvaluation) {
  auto wk = bundled::weak_kleene();
  auto phi = f("or(and(x, not(y)), z)");
  std::vector<Variable> frame{"x", "y", "z"};
  auto table = value_table(wk, phi, frame);
  ASSERT_EQ(table.size(), 27u);
  for (std::size_t i = 0; i < table.size(); ++i) EXPECT_EQ(table[i], evaluate(wk, phi, decode_valuation(wk, frame, i)));
}

TEST(Evaluate, UnboundVariable) {
  auto wk = bundled::weak_kleene();
  EXPECT_THROW(evaluate(wk, f("and(x, y)"), val(wk, {{"x", "1"}})), UnboundVariable);
}

TEST(Algebra, RejectsPartialOrOutOfRangeTables) {
  Signature s{{"not", 1}};
  EXPECT_THROW(FiniteAlgebra(s, {"0", "1"}, {{1}}), Error);
  EXPECT_THROW(FiniteAlgebra(s, {"0", "1"}, {{1, 2}}), Error);
  EXPECT_THROW(FiniteAlgebra(s, {"0", "0"}, {{1, 0}}), Error);
}

TEST(Entails, MatrixExamples) {
  EXPECT_TRUE(entails(MatrixClass{bundled::b2()}, fs("x"), f("or(x, y)")));
  EXPECT_TRUE(entails(MatrixClass{bundled::bochvar()}, fs("x, not(x)"), f("y")));
  EXPECT_FALSE(entails(MatrixClass{bundled::pwk()}, fs("x, not(x)"), f("y")));
  EXPECT_TRUE(entails(MatrixClass{bundled::b2()}, {}, f("or(x, not(x))")));
  EXPECT_FALSE(entails(MatrixClass{bundled::b2()}, {}, f("x")));
}

TEST(Entails, CounterModelForPwk) {
  auto oracle = make_matrix_oracle(MatrixClass{bundled::pwk()});
  auto cm = oracle->counter_model(fs("x, not(x)"), f("y"));
  ASSERT_TRUE(cm.has_value());
  const auto pwk = bundled::pwk();
  const auto& wk = pwk.algebra();
  EXPECT_EQ(wk.name(cm->valuation.at("x")), "n");
  EXPECT_EQ(wk.name(cm->valuation.at("y")), "0");
  EXPECT_FALSE(oracle->counter_model(fs("x"), f("x")).has_value());
}

TEST(Entails, ClassIsIntersectionOfMembers) {
  MatrixClass both{bundled::b2(), bundled::pwk()};
  EXPECT_FALSE(entails(both, fs("x, not(x)"), f("y")));
  EXPECT_TRUE(entails(both, fs("and(x, y)"), f("or(y, x)")));
}

TEST(Entails, AgreesWithNaiveEvaluatorOnRandomInferences) {
  std::mt19937 rng(7);
  const std::vector<Variable> vars{"x", "y", "z"};
  auto oracle = make_matrix_oracle(MatrixClass{bundled::pwk(), bundled::b2()});
  const std::vector<naive::Matrix> cls{naive::weak_kleene({false, true, true}), naive::b2()};
  for (int trial = 0; trial < 400; ++trial) {
    std::vector<Formula> gamma;
    for (int i = trial % 4; i > 0; --i) gamma.push_back(naive::random_formula(rng, sig, vars, 3));
    auto phi = naive::random_formula(rng, sig, vars, 3);
    EXPECT_EQ(oracle->entails(FormulaSet(gamma), phi), naive::entails(cls, gamma, phi)) << to_string(phi);
  }
}

TEST(Theorems, LatticeReductHasNone) {
  auto oracle = make_matrix_oracle(MatrixClass{bundled::b2_lattice()});
  EXPECT_FALSE(first_theorem_in_fragment(*oracle, {{"x", "y"}, 2, 0}).has_value());
  auto cl = make_matrix_oracle(MatrixClass{bundled::b2()});
  auto t = first_theorem_in_fragment(*cl, {{"x"}, 2, 0});
  ASSERT_TRUE(t.has_value());
  EXPECT_EQ(*t, f("or(x, not(x))"));
}

TEST(Homomorphism, IdentityAndTrivialTarget) {
  auto b2 = bundled::b2().algebra();
  EXPECT_TRUE(check_homomorphism(b2, b2, {0, 1}));
  EXPECT_TRUE(check_homomorphism(b2, trivial_algebra(sig), {0, 0}));
}

// Expected failures computed by enumerating all argument tuples by hand.
TEST(Homomorphism, SwapAndConstantMaps) {
  Signature neg{{"not", 1}};
  FiniteAlgebra b2n(neg, {"0", "1"}, {{1, 0}});
  EXPECT_TRUE(check_homomorphism(b2n, b2n, {1, 0}));

  Signature conj{{"and", 2}};
  FiniteAlgebra b2a(conj, {"0", "1"}, {{0, 0, 0, 1}});
  auto swap = homomorphism_failure(b2a, b2a, {1, 0});
  ASSERT_TRUE(swap.has_value());
  EXPECT_EQ(swap->args, (std::vector<Element>{0, 1}));  // h(0∧1) = 1, h(0)∧h(1) = 0
  EXPECT_TRUE(check_homomorphism(b2a, b2a, {1, 1}));    // constant 1 respects ∧

  auto constant = homomorphism_failure(bundled::b2().algebra(), bundled::b2().algebra(), {1, 1});
  ASSERT_TRUE(constant.has_value());
  EXPECT_EQ(sig[constant->connective].name, "not");
  EXPECT_EQ(constant->args, (std::vector<Element>{0}));
}

TEST(Isomorphism, WeakKleeneAgainstItsSumPresentation) {
  auto iso = find_isomorphism(bundled::weak_kleene(), bundled::weak_kleene_as_sum());
  ASSERT_TRUE(iso.has_value());
  EXPECT_TRUE(check_homomorphism(bundled::weak_kleene(), bundled::weak_kleene_as_sum(), *iso));
  EXPECT_FALSE(find_isomorphism(bundled::b2().algebra(), bundled::weak_kleene()).has_value());
  EXPECT_FALSE(find_matrix_isomorphism(bundled::pwk(), bundled::bochvar()).has_value());
  EXPECT_TRUE(find_matrix_isomorphism(bundled::pwk(), bundled::pwk()).has_value());
}

TEST(MatrixFile, RoundTrip) {
  for (const auto& m : {bundled::b2(), bundled::pwk(), bundled::b2_lattice()}) {
    auto back = parse_matrix(format_matrix(m));
    EXPECT_EQ(format_matrix(back), format_matrix(m));
  }
}

TEST(MatrixFile, SpecLayoutLoads) {
  auto m = parse_matrix(R"(# weak Kleene, paraconsistent designation
signature: and/2, or/2, not/1
elements: 0, n, 1
table and: 0,0->0  0,n->n  0,1->0  n,0->n  n,n->n  n,1->n  1,0->0  1,n->n  1,1->1
table or:  0,0->0  0,n->n  0,1->1  n,0->n  n,n->n  n,1->n  1,0->1  1,n->n  1,1->1
table not: 0->1  n->n  1->0
designated: 1, n
)");
  EXPECT_EQ(format_matrix(m), format_matrix(bundled::pwk()));
}

TEST(MatrixFile, Errors) {
  const std::string head = "signature: not/1\nelements: 0, 1\n";
  EXPECT_THROW(parse_matrix(head + "table not: 0->1\n"), LoadError);
  EXPECT_THROW(parse_matrix(head), LoadError);
  EXPECT_THROW(parse_matrix(head + "table not: 0->1 1->2\n"), LoadError);
  EXPECT_THROW(parse_matrix(head + "table not: 0->1 0->0 1->0\n"), LoadError);
  EXPECT_THROW(parse_matrix(head + "table and: 0,0->0\n"), LoadError);
  EXPECT_THROW(parse_matrix("elements: 0\n"), LoadError);
  EXPECT_THROW(parse_matrix(head + "table not: 0->1 1->0\nweird: 1\n"), LoadError);
  auto m = parse_matrix(head + "table not: 0->1 1->0\n");
  EXPECT_TRUE(m.designates_nothing());
  EXPECT_THROW(load_matrix("/nonexistent/file.mat"), LoadError);
}

TEST(MatrixFile, MissingEntryIsNamed) {
  try {
    parse_matrix("signature: and/2\nelements: 0, 1\ntable and: 0,0->0 0,1->0 1,1->1\n");
    FAIL();
  } catch (const LoadError& e) {
    EXPECT_NE(std::string(e.what()).find("(1,0)"), std::string::npos) << e.what();
  }
}
