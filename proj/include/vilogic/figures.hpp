#pragma once

#include <string>
#include <vector>

#include "vilogic/bundled.hpp"
#include "vilogic/explorer.hpp"

// Claim checks for the three lattice figures, over the bundled bases.

namespace vilogic {

struct Claim {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct FigureReport {
  int figure = 0;
  std::string base_name;
  LatticeReport lattice;
  WitnessSuiteReport witnesses;
  std::vector<Claim> claims;

  bool passed() const {
    return witnesses.passed() &&
           std::all_of(claims.begin(), claims.end(), [](const Claim& c) { return c.passed; });
  }
};

namespace detail {

inline std::string relation_text(const LatticeReport& r, std::string_view a, std::string_view b) {
  auto rel = r.relation(a, b);
  return std::string(a) + " " + (rel ? to_string(*rel) : "unknown") + " " + std::string(b);
}

inline Claim relation_claim(const LatticeReport& r, std::string_view a, Relation want, std::string_view b) {
  auto rel = r.relation(a, b);
  const std::string verb = want == Relation::equal ? "=" : to_string(want);
  Claim c{std::string(a) + " " + verb + " " + std::string(b), rel && *rel == want, {}};
  c.detail = relation_text(r, a, b);
  if (const auto* v = r.verdict(a, b)) {
    for (const auto& w : v->witnesses_ab) c.detail += "; " + v->a + " only: " + to_string(w);
    for (const auto& w : v->witnesses_ba) c.detail += "; " + v->b + " only: " + to_string(w);
  }
  return c;
}

/// Compares `reference` with each of `others` on one shared grid.
inline Claim fragment_equalities(const OraclePtr& root, const std::string& reference,
                                 const std::vector<std::string>& others, const FragmentSpec& spec) {
  std::vector<OraclePtr> oracles{node_oracle(root, reference)};
  for (const auto& id : others) oracles.push_back(node_oracle(root, id));
  FragmentGrid grid(root->signature(), spec, oracles);
  std::vector<AnswerTable> tables;
  for (const auto& o : oracles) tables.emplace_back(grid, *o);
  Claim c;
  c.name = reference;
  for (const auto& id : others) c.name += " = " + id;
  c.name += " on fragment";
  c.passed = true;
  for (std::size_t i = 1; i < oracles.size(); ++i) {
    auto v = compare_tables(grid, *oracles[0], tables[0], *oracles[i], tables[i]);
    if (v.relation != Relation::equal) {
      c.passed = false;
      c.detail += (c.detail.empty() ? "" : "; ") + others[i - 1] + ": " + to_string(v.relation);
      for (const auto& w : v.witnesses_ab) c.detail += " [" + reference + " only: " + to_string(w) + "]";
      for (const auto& w : v.witnesses_ba) c.detail += " [" + others[i - 1] + " only: " + to_string(w) + "]";
    }
  }
  if (c.passed) c.detail = std::to_string(grid.premise_set_count()) + " premise sets x " +
                           std::to_string(grid.class_count()) + " conclusion classes";
  return c;
}

inline std::vector<Inference> suite_inferences(const WitnessSuiteReport& suite) {
  std::vector<Inference> out;
  for (const auto& c : suite.claims) out.push_back(c.inference);
  return out;
}

inline std::vector<std::string> words_up_to(std::size_t length) {
  std::vector<std::string> out{""};
  for (std::size_t start = 0, n = 1; n <= length; ++n) {
    const std::size_t end = out.size();
    for (std::size_t i = start; i < end; ++i) {
      out.push_back(out[i] + "l");
      out.push_back(out[i] + "r");
    }
    start = end;
  }
  return out;
}

}  // namespace detail

/// Antitheorem-free base: ⟨B₂, {1}⟩ over and/or.
inline FigureReport reproduce_figure1(const FragmentSpec& spec = {}) {
  FigureReport rep;
  rep.figure = 1;
  rep.base_name = "B2 over and/or, designated {1}";
  const MatrixClass base{bundled::b2_lattice()};
  const auto pi = bundled::partition_term(base.signature());
  rep.witnesses = witness_suite(base, pi, std::nullopt, "B2ao");
  const auto extras = detail::suite_inferences(rep.witnesses);
  rep.lattice = build_lattice(base, pi, spec, extras, "B2ao");
  const auto& L = rep.lattice;
  OraclePtr root = make_matrix_oracle(base, "B2ao");

  {
    Claim c{"fresh-variable test finds no antitheorem", root->antitheorem_status().proven_absent(), {}};
    const OraclePtr one[] = {root};
    FragmentGrid grid(base.signature(), spec, one);
    std::size_t explosive = 0;
    for (std::size_t p = 0; p < grid.premise_set_count(); ++p) explosive += is_antitheorem(*root, grid.premises(p));
    c.passed = c.passed && explosive == 0;
    c.detail = "status " + to_string(root->antitheorem_status()) + "; " + std::to_string(explosive) + " of " +
               std::to_string(grid.premise_set_count()) + " fragment premise sets explosive";
    rep.claims.push_back(std::move(c));
  }
  rep.claims.push_back(detail::relation_claim(L, "l", Relation::incomparable, "r"));
  rep.claims.push_back(detail::relation_claim(L, "lr", Relation::equal, "meet(l,r)"));
  rep.claims.push_back(detail::relation_claim(L, "lr", Relation::strictly_below, "l"));
  rep.claims.push_back(detail::relation_claim(L, "lr", Relation::strictly_below, "r"));
  {
    auto c = detail::relation_claim(L, "rl", Relation::strictly_below, "lr");
    auto rel = L.relation("rl", "lr");
    c.name = "rl below lr";
    c.passed = rel && (*rel == Relation::equal || *rel == Relation::strictly_below);
    rep.claims.push_back(std::move(c));
  }
  {
    std::vector<std::string> others;
    for (const auto& s : detail::words_up_to(2)) {
      if (!s.empty()) others.push_back("rl" + s);
      others.push_back("lrl" + s);
    }
    rep.claims.push_back(detail::fragment_equalities(root, "rl", others, spec));
  }
  return rep;
}

namespace detail {

/// Claims shared by the abstract antitheorem figure and its CL instance.
inline void antitheorem_claims(FigureReport& rep, const OraclePtr& root, const FragmentSpec& spec) {
  const auto& L = rep.lattice;
  rep.claims.push_back(relation_claim(L, "l", Relation::strictly_below, "base"));
  rep.claims.push_back(relation_claim(L, "r", Relation::strictly_below, "base"));
  rep.claims.push_back(relation_claim(L, "l", Relation::incomparable, "r"));
  rep.claims.push_back(relation_claim(L, "meet(l,r)", Relation::strictly_below, "l"));
  rep.claims.push_back(relation_claim(L, "meet(l,r)", Relation::strictly_below, "r"));
  rep.claims.push_back(relation_claim(L, "rl", Relation::incomparable, "lr"));
  rep.claims.push_back(relation_claim(L, "lr", Relation::strictly_below, "meet(l,r)"));
  rep.claims.push_back(relation_claim(L, "rl", Relation::strictly_below, "meet(l,r)"));
  rep.claims.push_back(relation_claim(L, "rlr", Relation::strictly_below, "rl"));
  rep.claims.push_back(relation_claim(L, "lrl", Relation::strictly_below, "lr"));
  rep.claims.push_back(relation_claim(L, "rlr", Relation::strictly_below, "meet(lr,rl)"));
  rep.claims.push_back(fragment_equalities(root, "lrl", {"lrlr", "rlrl"}, spec));
  rep.claims.push_back(relation_claim(L, "lrl", Relation::strictly_below, "rlr"));
  for (std::string s : {"", "l", "r"}) rep.claims.push_back(fragment_equalities(root, "lrl" + s, {"rlrl" + s}, spec));
}

}  // namespace detail

/// Antitheorem base: classical logic with π = x∧(x∨y), Σ = {x, ¬x}.
inline FigureReport reproduce_figure2(const FragmentSpec& spec = {}) {
  FigureReport rep;
  rep.figure = 2;
  rep.base_name = "B2, designated {1}";
  const MatrixClass base{bundled::b2()};
  const auto& sig = base.signature();
  const auto pi = bundled::partition_term(sig);
  rep.witnesses = witness_suite(base, pi, bundled::classical_antitheorem(sig), "CL");
  const auto extras = detail::suite_inferences(rep.witnesses);
  rep.lattice = build_lattice(base, pi, spec, extras, "CL");
  detail::antitheorem_claims(rep, make_matrix_oracle(base, "CL"), spec);
  return rep;
}

/// One chain matrix against its syntactic counterpart.
struct ChainCheck {
  std::string sequence;
  FiniteMatrix matrix;
  ComparisonVerdict verdict;
};

inline ChainCheck check_chain_matrix(const FiniteMatrix& base, const VISequence& seq, const FragmentSpec& spec,
                                     const std::string& base_label = "CL") {
  auto chain = canonical_chain_matrix(base, seq);
  OraclePtr semantic = make_matrix_oracle(MatrixClass{chain}, "chain(" + seq.str() + ")");
  OraclePtr syntactic = apply_sequence(make_matrix_oracle(MatrixClass{base}, base_label), seq);
  return {seq.str(), chain, compare(syntactic, semantic, spec)};
}

/// Classical logic: the antitheorem lattice claims plus chain-matrix agreement.
inline FigureReport reproduce_figure3(const FragmentSpec& spec = {}) {
  FigureReport rep = reproduce_figure2(spec);
  rep.figure = 3;
  const auto& L = rep.lattice;
  {
    std::size_t computed = 0, meets = 0;
    for (const auto& n : L.nodes) {
      computed += n.kind == LatticeNode::Kind::computed;
      meets += n.kind == LatticeNode::Kind::meet;
    }
    rep.claims.push_back({"7 computed nodes and 2 meet nodes", computed == 7 && meets == 2,
                          std::to_string(computed) + " computed, " + std::to_string(meets) + " meet"});
  }
  const auto base = bundled::b2();
  static const std::vector<std::pair<std::string, std::vector<std::string>>> designations{
      {"l", {"1", "n"}},       {"r", {"1"}},          {"lr", {"1", "n"}},
      {"rl", {"1", "m"}},      {"rlr", {"1", "m"}},   {"lrl", {"1", "n", "p"}}};
  for (const auto& [seq, want] : designations) {
    auto check = check_chain_matrix(base, VISequence(seq), spec);
    auto got = check.matrix.designated_names();
    std::sort(got.begin(), got.end());
    auto sorted_want = want;
    std::sort(sorted_want.begin(), sorted_want.end());
    Claim c{"chain matrix for " + seq + " agrees with the derived logic",
            check.verdict.relation == Relation::equal && got == sorted_want, {}};
    c.detail = std::to_string(check.matrix.algebra().size()) + " elements, designated {";
    for (std::size_t i = 0; i < got.size(); ++i) c.detail += (i ? ", " : "") + got[i];
    c.detail += "}; " + to_string(check.verdict.relation);
    for (const auto& w : check.verdict.witnesses_ab) c.detail += "; derived only: " + to_string(w);
    for (const auto& w : check.verdict.witnesses_ba) c.detail += "; chain only: " + to_string(w);
    rep.claims.push_back(std::move(c));
  }
  {
    auto pwk = compare(apply_sequence(make_matrix_oracle(MatrixClass{base}, "CL"), VISequence("l")),
                       make_matrix_oracle(MatrixClass{bundled::pwk()}, "PWK"), spec);
    rep.claims.push_back({"l equals PWK", pwk.relation == Relation::equal, to_string(pwk.relation)});
    auto b3 = compare(apply_sequence(make_matrix_oracle(MatrixClass{base}, "CL"), VISequence("r")),
                      make_matrix_oracle(MatrixClass{bundled::bochvar()}, "B3"), spec);
    rep.claims.push_back({"r equals B3", b3.relation == Relation::equal, to_string(b3.relation)});
  }
  return rep;
}

inline FigureReport reproduce_figure(int figure, const FragmentSpec& spec = {}) {
  switch (figure) {
    case 1:
      return reproduce_figure1(spec);
    case 2:
      return reproduce_figure2(spec);
    case 3:
      return reproduce_figure3(spec);
    default:
      throw PreconditionError("figure must be 1, 2 or 3");
  }
}

}  // namespace vilogic
