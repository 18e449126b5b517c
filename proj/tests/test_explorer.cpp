#include <gtest/gtest.h>

#include <random>

#include "naive.hpp"
#include "vilogic/bundled.hpp"
#include "vilogic/explorer.hpp"

using namespace vilogic;

namespace {

const Signature sig = bundled::boolean_signature();

Formula f(std::string_view text) { return parse_formula(text, sig); }
FormulaSet fs(std::string_view text) { return FormulaSet(parse_formula_list(text, sig)); }

OraclePtr cl() { return make_matrix_oracle(MatrixClass{bundled::b2()}, "CL"); }
OraclePtr derived(const std::string& seq) { return apply_sequence(cl(), VISequence(seq)); }

const FragmentSpec small{{"x", "y"}, 2, 2};
// Three variables are needed to see lrl below rlr.
const FragmentSpec medium{{"x", "y", "z"}, 1, 3};

}  // namespace

TEST(Inferences, ParseAndPrint) {
  auto inf = parse_inference("x, not(x) |- y", sig);
  EXPECT_EQ(inf.premises, fs("x, not(x)"));
  EXPECT_EQ(inf.conclusion, f("y"));
  EXPECT_EQ(parse_inference(to_string(inf), sig), inf);
  EXPECT_EQ(parse_inference(" |- or(x, not(x))", sig).premises.size(), 0u);
  EXPECT_THROW(parse_inference("x, y", sig), Error);
}

TEST(Classify, AllFourCases) {
  EXPECT_EQ(classify(false, false), Relation::equal);
  EXPECT_EQ(classify(false, true), Relation::strictly_below);
  EXPECT_EQ(classify(true, false), Relation::strictly_above);
  EXPECT_EQ(classify(true, true), Relation::incomparable);
  EXPECT_EQ(to_string(Relation::equal), "equal on fragment");
}

TEST(Grid, PremiseSetCounts) {
  const OraclePtr one[] = {cl()};
  FragmentGrid grid(sig, small, one);
  const auto n = grid.class_count();
  EXPECT_EQ(grid.premise_set_count(), 1 + n + n * (n - 1) / 2);
  EXPECT_EQ(grid.premises(0).size(), 0u);
  EXPECT_EQ(grid.premises(1).size(), 1u);
}

TEST(Grid, ClassicalFragmentClassCount) {
  const OraclePtr one[] = {cl()};
  FragmentGrid grid(sig, FragmentSpec{}, one);
  EXPECT_EQ(grid.formulas().size(), 1179u);
  EXPECT_EQ(grid.class_count(), 74u);
  EXPECT_EQ(grid.premise_set_count(), 67600u);
}

// Replacing formulas by their class representative never changes an answer.
TEST(Grid, ClassRepresentativesAreInterchangeable) {
  const OraclePtr oracles[] = {derived("l"), derived("r"), derived("rl")};
  FragmentGrid grid(sig, small, oracles);
  std::mt19937 rng(3);
  std::uniform_int_distribution<std::size_t> pick(0, grid.formulas().size() - 1);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Formula> prem, rep;
    for (int k = trial % 3; k > 0; --k) {
      auto i = pick(rng);
      prem.push_back(grid.formulas()[i]);
      rep.push_back(grid.representatives()[grid.class_of(i)]);
    }
    auto c = pick(rng);
    const auto& concl = grid.formulas()[c];
    const auto& concl_rep = grid.representatives()[grid.class_of(c)];
    for (const auto& o : oracles) {
      EXPECT_EQ(o->entails(FormulaSet(prem), concl), o->entails(FormulaSet(rep), concl_rep)) << o->label();
    }
  }
}

TEST(AnswerTables, MatchOracleAndAreMonotone) {
  auto o = derived("lr");
  const OraclePtr one[] = {o};
  FragmentGrid grid(sig, small, one);
  AnswerTable t(grid, *o);
  for (std::size_t p = 0; p < grid.premise_set_count(); p += 7) {
    for (std::size_t c = 0; c < grid.class_count(); ++c) {
      ASSERT_EQ(t.test(p, c), o->entails(grid.premises(p), grid.representatives()[c]));
    }
  }
  EXPECT_FALSE(t.first_excess_over(t).has_value());
}

TEST(Compare, LogicWithItself) {
  auto v = compare(derived("rl"), derived("rl"), small);
  EXPECT_EQ(v.relation, Relation::equal);
  EXPECT_TRUE(v.witnesses_ab.empty());
  EXPECT_TRUE(v.witnesses_ba.empty());
}

TEST(Compare, CompanionsAreIncomparable) {
  auto l = derived("l"), r = derived("r");
  auto v = compare(l, r, small);
  EXPECT_EQ(v.relation, Relation::incomparable);
  EXPECT_EQ(v.a, "CL^l");
  EXPECT_TRUE(witnesses_revalidate(v, *l, *r));
}

TEST(Compare, ExtrasComeFirst) {
  std::vector<Inference> extras{parse_inference("x |- and(x, or(x, y))", sig),
                                parse_inference("and(x, or(x, y)) |- x", sig)};
  auto v = compare(derived("l"), derived("r"), small, extras);
  ASSERT_FALSE(v.witnesses_ab.empty());
  ASSERT_FALSE(v.witnesses_ba.empty());
  EXPECT_EQ(v.witnesses_ab.front(), extras[0]);
  EXPECT_EQ(v.witnesses_ba.front(), extras[1]);
}

TEST(Compare, CompanionsBelowBase) {
  auto v = compare(derived("l"), cl(), small);
  EXPECT_EQ(v.relation, Relation::strictly_below);
  EXPECT_EQ(compare(cl(), derived("r"), small).relation, Relation::strictly_above);
}

// The doubly derived rlr coincides with the meet of lr and rl, not below it.
TEST(Compare, RlrAgainstMeetOfLrAndRl) {
  auto base = cl();
  auto v = compare(node_oracle(base, "rlr"), node_oracle(base, "meet(lr,rl)"), medium);
  EXPECT_EQ(v.relation, Relation::equal);
}

TEST(Compare, RejectsMixedSignatures) {
  auto other = make_matrix_oracle(MatrixClass{bundled::b2_lattice()});
  EXPECT_THROW(compare(cl(), other, small), SignatureMismatch);
}

TEST(NodeOracles, Ids) {
  auto base = cl();
  EXPECT_EQ(node_oracle(base, "base"), base);
  EXPECT_EQ(node_oracle(base, "lr")->label(), "CL^lr");
  EXPECT_TRUE(node_oracle(base, "meet(l,r)")->entails(fs("x, not(x)"), f("and(x, or(x, y))")));
  EXPECT_THROW(node_oracle(base, "meet(l)"), Error);
  EXPECT_THROW(node_oracle(base, "lx"), Error);
}

TEST(Lattice, TrivialBaseMakesNoClaims) {
  MatrixClass trivial{FiniteMatrix(bundled::b2().algebra(), std::vector<bool>{true, true})};
  auto rep = build_lattice(trivial, bundled::partition_term(sig), small);
  EXPECT_TRUE(rep.trivial_base);
  EXPECT_TRUE(rep.verdicts.empty());
}

TEST(Lattice, RejectsNonPartitionTerm) {
  EXPECT_THROW(build_lattice(MatrixClass{bundled::b2()}, f("or(x, y)"), small), PreconditionError);
}

TEST(Lattice, ClassicalOrderOnSmallFragment) {
  const MatrixClass base{bundled::b2()};
  const auto pi = bundled::partition_term(sig);
  auto suite = witness_suite(base, pi, bundled::classical_antitheorem(sig), "CL");
  std::vector<Inference> extras;
  for (const auto& c : suite.claims) extras.push_back(c.inference);
  auto rep = build_lattice(base, pi, medium, extras, "CL");
  EXPECT_FALSE(rep.trivial_base);
  EXPECT_TRUE(rep.has_antitheorems);
  EXPECT_EQ(rep.relation("l", "r"), Relation::incomparable);
  EXPECT_EQ(rep.relation("lr", "rl"), Relation::incomparable);
  EXPECT_EQ(rep.relation("lrl", "rlr"), Relation::strictly_below);
  EXPECT_EQ(rep.relation("rlr", "lrl"), Relation::strictly_above);
  EXPECT_EQ(rep.relation("lr", "meet(l,r)"), Relation::strictly_below);
  EXPECT_EQ(rep.relation("rlr", "meet(lr,rl)"), Relation::equal);
  auto by_label = [&rep](const std::string& label) -> const LogicOracle& {
    for (const auto& n : rep.nodes) {
      if (n.oracle && n.oracle->label() == label) return *n.oracle;
    }
    throw std::logic_error("no node labelled " + label);
  };
  for (const auto& v : rep.verdicts) {
    EXPECT_TRUE(witnesses_revalidate(v, by_label(v.a), by_label(v.b))) << v.a << " " << v.b;
  }
  bool formal = std::any_of(rep.hasse.begin(), rep.hasse.end(), [](const HasseEdge& e) { return e.formal; });
  EXPECT_TRUE(formal);
}

TEST(Lattice, AntitheoremFreeBase) {
  const MatrixClass base{bundled::b2_lattice()};
  const auto lsig = base.signature();
  auto rep = build_lattice(base, bundled::partition_term(lsig), {{"x", "y", "z"}, 1, 2}, {}, "B2ao");
  EXPECT_FALSE(rep.has_antitheorems);
  EXPECT_EQ(rep.nodes.size(), 5u + 2u);
  EXPECT_EQ(rep.relation("lr", "meet(l,r)"), Relation::equal);
  EXPECT_EQ(rep.relation("rl", "lr"), Relation::strictly_below);
  EXPECT_FALSE(rep.base_theorem.has_value());
}

TEST(WitnessSuite, ClassicalLogicClaimsHold) {
  auto suite = witness_suite(MatrixClass{bundled::b2()}, bundled::partition_term(sig),
                             bundled::classical_antitheorem(sig), "CL");
  EXPECT_GE(suite.claims.size(), 7u);
  for (const auto& c : suite.claims) EXPECT_TRUE(c.passed) << c.name << ": " << to_string(c.inference);
}

TEST(WitnessSuite, LatticeReductWithoutSigma) {
  const MatrixClass base{bundled::b2_lattice()};
  auto suite = witness_suite(base, bundled::partition_term(base.signature()), std::nullopt, "B2ao");
  EXPECT_TRUE(suite.passed());
}

// Companion answers from the library agree with the subset definitions on
// random fragment inferences.
TEST(Companions, AgreeWithNaiveOnFragment) {
  const naive::Logic base = [](const std::vector<Formula>& g, const Formula& p) {
    return naive::entails({naive::b2()}, g, p);
  };
  const OraclePtr oracles[] = {derived("rl"), derived("lrl")};
  FragmentGrid grid(sig, small, oracles);
  std::mt19937 rng(17);
  std::uniform_int_distribution<std::size_t> pset(0, grid.premise_set_count() - 1);
  std::uniform_int_distribution<std::size_t> pcl(0, grid.class_count() - 1);
  for (int i = 0; i < 200; ++i) {
    auto inf = grid.inference(pset(rng), pcl(rng));
    std::vector<Formula> gamma(inf.premises.begin(), inf.premises.end());
    EXPECT_EQ(oracles[0]->entails(inf.premises, inf.conclusion), naive::sequence(base, "rl")(gamma, inf.conclusion));
    EXPECT_EQ(oracles[1]->entails(inf.premises, inf.conclusion), naive::sequence(base, "lrl")(gamma, inf.conclusion));
  }
}
