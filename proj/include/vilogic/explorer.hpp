#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "vilogic/oracle.hpp"
#include "vilogic/plonka.hpp"
#include "vilogic/transforms.hpp"

namespace vilogic {

struct Inference {
  FormulaSet premises;
  Formula conclusion;

  friend bool operator==(const Inference&, const Inference&) = default;
};

/// `x, not(x) |- and(x, or(x, y))`; no premises prints as `|- φ`.
inline std::string to_string(const Inference& inf) {
  auto prem = to_string(inf.premises);
  return (prem.empty() ? "" : prem + " ") + "|- " + to_string(inf.conclusion);
}

/// Reads "Γ |- φ" with Γ a comma-separated list, possibly empty.
inline Inference parse_inference(std::string_view text, const Signature& sig) {
  auto turnstile = text.find("|-");
  if (turnstile == std::string_view::npos) throw ParseError("inference needs '|-'", 0);
  return {FormulaSet(parse_formula_list(text.substr(0, turnstile), sig)),
          parse_formula(text.substr(turnstile + 2), sig)};
}

// ---------------------------------------------------------------------------
// Inference grid
// ---------------------------------------------------------------------------

/// The fragment quotiented by the joint semantic keys of a set of oracles.
/// Premise sets range over sets of classes, so every fragment inference is
/// covered through class representatives (first formula of each class).
class FragmentGrid {
 public:
  FragmentGrid(const Signature& sig, FragmentSpec spec, std::span<const OraclePtr> oracles) : spec_(std::move(spec)) {
    if (spec_.max_premises < 0) throw PreconditionError("fragment premise bound must be non-negative");
    formulas_ = enumerate_fragment(sig, spec_);
    auto frame = spec_.variables;
    std::sort(frame.begin(), frame.end());
    std::unordered_map<std::string, std::uint32_t> index;
    class_of_.reserve(formulas_.size());
    for (std::size_t i = 0; i < formulas_.size(); ++i) {
      std::string key;
      for (const auto& o : oracles) {
        auto k = o->semantic_key(formulas_[i], frame);
        key += std::to_string(k.size()) + ':' + k;
      }
      auto [it, inserted] = index.emplace(std::move(key), static_cast<std::uint32_t>(representatives_.size()));
      if (inserted) representatives_.push_back(formulas_[i]);
      class_of_.push_back(it->second);
    }
    enumerate_premise_sets();
  }

  const FragmentSpec& spec() const { return spec_; }
  const std::vector<Formula>& formulas() const { return formulas_; }
  /// One formula per class, in enumeration order of first occurrence.
  const std::vector<Formula>& representatives() const { return representatives_; }
  std::size_t class_count() const { return representatives_.size(); }
  std::uint32_t class_of(std::size_t formula) const { return class_of_[formula]; }
  std::size_t premise_set_count() const { return premise_sets_.size(); }
  const FormulaSet& premises(std::size_t set) const { return premise_sets_[set]; }
  Inference inference(std::size_t set, std::size_t conclusion) const {
    return {premise_sets_[set], representatives_[conclusion]};
  }

 private:
  /// Sets of classes by size, then lexicographically by class index.
  void enumerate_premise_sets() {
    const auto n = representatives_.size();
    const auto kmax = std::min<std::size_t>(static_cast<std::size_t>(spec_.max_premises), n);
    for (std::size_t k = 0; k <= kmax; ++k) {
      std::vector<std::size_t> idx(k);
      for (std::size_t i = 0; i < k; ++i) idx[i] = i;
      while (true) {
        std::vector<Formula> members;
        for (auto i : idx) members.push_back(representatives_[i]);
        premise_sets_.emplace_back(std::move(members));
        std::size_t pos = k;
        while (pos > 0 && idx[pos - 1] == n - k + pos - 1) --pos;
        if (pos == 0) break;
        ++idx[pos - 1];
        for (std::size_t i = pos; i < k; ++i) idx[i] = idx[i - 1] + 1;
      }
    }
  }

  FragmentSpec spec_;
  std::vector<Formula> formulas_;
  std::vector<Formula> representatives_;
  std::vector<std::uint32_t> class_of_;
  std::vector<FormulaSet> premise_sets_;
};

/// Row per premise set, bit per conclusion class.
class AnswerTable {
 public:
  AnswerTable(const FragmentGrid& grid, const LogicOracle& oracle)
      : rows_(grid.premise_set_count()), cols_(grid.class_count()), stride_((cols_ + 63) / 64) {
    words_.assign(rows_ * stride_, 0);
    const auto& concl = grid.representatives();
    for (std::size_t p = 0; p < rows_; ++p) {
      auto answers = oracle.entails_each(grid.premises(p), concl);
      for (std::size_t c = 0; c < cols_; ++c) {
        if (answers[c]) words_[p * stride_ + c / 64] |= 1ULL << (c % 64);
      }
    }
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool test(std::size_t row, std::size_t col) const { return (words_[row * stride_ + col / 64] >> (col % 64)) & 1ULL; }

  /// First (row, col) valid here and not in `other`.
  std::optional<std::pair<std::size_t, std::size_t>> first_excess_over(const AnswerTable& other) const {
    for (std::size_t p = 0; p < rows_; ++p) {
      for (std::size_t w = 0; w < stride_; ++w) {
        auto diff = words_[p * stride_ + w] & ~other.words_[p * stride_ + w];
        if (diff) return std::pair{p, w * 64 + static_cast<std::size_t>(std::countr_zero(diff))};
      }
    }
    return std::nullopt;
  }

  std::size_t count() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::size_t stride_;
  std::vector<std::uint64_t> words_;
};

// ---------------------------------------------------------------------------
// Pairwise comparison
// ---------------------------------------------------------------------------

/// Position of `a` relative to `b` in the sublogic order.
enum class Relation { equal, strictly_below, strictly_above, incomparable };

/// Equality is only ever established on the fragment.
inline std::string to_string(Relation r) {
  switch (r) {
    case Relation::equal:
      return "equal on fragment";
    case Relation::strictly_below:
      return "strictly below";
    case Relation::strictly_above:
      return "strictly above";
    case Relation::incomparable:
      break;
  }
  return "incomparable";
}

struct ComparisonVerdict {
  std::string a;
  std::string b;
  Relation relation = Relation::equal;
  std::vector<Inference> witnesses_ab;  // valid in a, not in b
  std::vector<Inference> witnesses_ba;  // valid in b, not in a
  FragmentSpec fragment;

  bool a_below_or_equal() const { return witnesses_ab.empty(); }
  bool b_below_or_equal() const { return witnesses_ba.empty(); }
};

inline Relation classify(bool ab, bool ba) {
  if (!ab && !ba) return Relation::equal;
  if (!ab) return Relation::strictly_below;
  if (!ba) return Relation::strictly_above;
  return Relation::incomparable;
}

namespace detail {

inline void add_unique(std::vector<Inference>& list, Inference inf) {
  if (std::find(list.begin(), list.end(), inf) == list.end()) list.push_back(std::move(inf));
}

}  // namespace detail

/// Extra inferences that separate the oracles come first, followed by the
/// first separating fragment inference in grid order.
inline ComparisonVerdict compare_tables(const FragmentGrid& grid, const LogicOracle& a, const AnswerTable& ta,
                                        const LogicOracle& b, const AnswerTable& tb,
                                        std::span<const Inference> extras = {}) {
  ComparisonVerdict v;
  v.a = a.label();
  v.b = b.label();
  v.fragment = grid.spec();
  for (const auto& inf : extras) {
    bool in_a = a.entails(inf.premises, inf.conclusion);
    bool in_b = b.entails(inf.premises, inf.conclusion);
    if (in_a && !in_b) detail::add_unique(v.witnesses_ab, inf);
    if (in_b && !in_a) detail::add_unique(v.witnesses_ba, inf);
  }
  if (auto w = ta.first_excess_over(tb)) detail::add_unique(v.witnesses_ab, grid.inference(w->first, w->second));
  if (auto w = tb.first_excess_over(ta)) detail::add_unique(v.witnesses_ba, grid.inference(w->first, w->second));
  v.relation = classify(!v.witnesses_ab.empty(), !v.witnesses_ba.empty());
  return v;
}

inline ComparisonVerdict compare(const OraclePtr& a, const OraclePtr& b, const FragmentSpec& spec,
                                 std::span<const Inference> extras = {}) {
  if (!(a->signature() == b->signature())) throw SignatureMismatch("comparing logics over different signatures");
  const OraclePtr both[] = {a, b};
  FragmentGrid grid(a->signature(), spec, both);
  AnswerTable ta(grid, *a);
  AnswerTable tb(grid, *b);
  return compare_tables(grid, *a, ta, *b, tb, extras);
}

/// Re-submits every witness to both oracles.
inline bool witnesses_revalidate(const ComparisonVerdict& v, const LogicOracle& a, const LogicOracle& b) {
  auto check = [](const std::vector<Inference>& ws, const LogicOracle& yes, const LogicOracle& no) {
    return std::all_of(ws.begin(), ws.end(), [&](const Inference& w) {
      return yes.entails(w.premises, w.conclusion) && !no.entails(w.premises, w.conclusion);
    });
  };
  return check(v.witnesses_ab, a, b) && check(v.witnesses_ba, b, a);
}

// ---------------------------------------------------------------------------
// Lattice of variable inclusion companions
// ---------------------------------------------------------------------------

struct LatticeNode {
  enum class Kind { computed, meet, join };

  std::string id;  // sequence ("base", "l", "rl", ...) or "meet(a,b)" / "join(a,b)"
  Kind kind = Kind::computed;
  OraclePtr oracle;  // null for join nodes
};

struct HasseEdge {
  std::string lower;
  std::string upper;
  bool formal = false;  // involves an uncomputed join node
};

struct LatticeReport {
  FragmentSpec fragment;
  bool trivial_base = false;
  bool has_antitheorems = false;
  AntitheoremStatus base_status;
  std::optional<Formula> base_theorem;  // first theorem in x alone, if any
  std::vector<LatticeNode> nodes;
  std::vector<ComparisonVerdict> verdicts;  // every pair of non-join nodes, in node order
  std::vector<std::vector<std::string>> equal_groups;
  std::vector<HasseEdge> hasse;
  std::vector<std::string> unresolved;

  const LatticeNode* node(std::string_view id) const {
    for (const auto& n : nodes) {
      if (n.id == id) return &n;
    }
    return nullptr;
  }

  /// Relation of `a` to `b`, looked up in either orientation.
  std::optional<Relation> relation(std::string_view a, std::string_view b) const {
    auto ia = index_of(a);
    auto ib = index_of(b);
    if (!ia || !ib) return std::nullopt;
    if (*ia == *ib) return Relation::equal;
    for (const auto& v : verdicts) {
      if (v.a == nodes[*ia].oracle->label() && v.b == nodes[*ib].oracle->label()) return v.relation;
      if (v.b == nodes[*ia].oracle->label() && v.a == nodes[*ib].oracle->label()) {
        switch (v.relation) {
          case Relation::strictly_below:
            return Relation::strictly_above;
          case Relation::strictly_above:
            return Relation::strictly_below;
          default:
            return v.relation;
        }
      }
    }
    return std::nullopt;
  }

  const ComparisonVerdict* verdict(std::string_view a, std::string_view b) const {
    auto ia = index_of(a);
    auto ib = index_of(b);
    if (!ia || !ib) return nullptr;
    for (const auto& v : verdicts) {
      if ((v.a == nodes[*ia].oracle->label() && v.b == nodes[*ib].oracle->label()) ||
          (v.b == nodes[*ia].oracle->label() && v.a == nodes[*ib].oracle->label())) {
        return &v;
      }
    }
    return nullptr;
  }

 private:
  std::optional<std::size_t> index_of(std::string_view id) const {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (nodes[i].id == id && nodes[i].oracle) return i;
    }
    return std::nullopt;
  }
};

/// Oracle for a node id: a word over {l, r}, "base", or "meet(u,v)".
inline OraclePtr node_oracle(const OraclePtr& base, std::string_view id) {
  if (id == "base" || id.empty()) return base;
  if (id.starts_with("meet(") && id.ends_with(")")) {
    auto inner = id.substr(5, id.size() - 6);
    auto comma = inner.find(',');
    if (comma == std::string_view::npos) throw Error("malformed meet node '" + std::string(id) + "'");
    return intersect(node_oracle(base, inner.substr(0, comma)), node_oracle(base, inner.substr(comma + 1)),
                     base->label() + "^" + std::string(id));
  }
  return apply_sequence(base, VISequence(std::string(id)));
}

namespace detail {

inline void require_partition_function(const MatrixClass& base, const Formula& pi) {
  for (const auto& m : base.matrices()) {
    auto report = check_partition_function(m.algebra(), pi);
    if (auto f = report.first_failure()) {
      throw PreconditionError("partition check failed: " + f->axiom +
                              (f->connective.empty() ? "" : " for " + f->connective));
    }
  }
}

}  // namespace detail

/// Compares the canonical companions of `base` (plus the meet nodes of the
/// relevant figure) on every fragment inference and assembles the order.
inline LatticeReport build_lattice(const MatrixClass& base, const Formula& pi, const FragmentSpec& spec,
                                   std::span<const Inference> extras = {}, std::string base_label = "M") {
  LatticeReport report;
  report.fragment = spec;
  if (base.trivial()) {
    report.trivial_base = true;
    report.unresolved.push_back("base designates every element; no lattice claims");
    return report;
  }
  detail::require_partition_function(base, pi);

  OraclePtr root = make_matrix_oracle(base, std::move(base_label));
  report.base_status = root->antitheorem_status();
  if (report.base_status.kind == AntitheoremStatus::Kind::unknown) {
    throw PreconditionError("antitheorem status of the base could not be decided");
  }
  report.has_antitheorems = report.base_status.has_witness();
  report.base_theorem = first_theorem_in_fragment(*root, FragmentSpec{{"x"}, spec.max_depth, 0});

  auto add = [&](std::string id, LatticeNode::Kind kind) {
    OraclePtr o = kind == LatticeNode::Kind::join ? nullptr : node_oracle(root, id);
    report.nodes.push_back({std::move(id), kind, std::move(o)});
  };
  add("base", LatticeNode::Kind::computed);
  for (const auto& s : canonical_sequences(report.has_antitheorems)) {
    if (!s.empty()) add(s.str(), LatticeNode::Kind::computed);
  }
  add("meet(l,r)", LatticeNode::Kind::meet);
  add("join(l,r)", LatticeNode::Kind::join);
  if (report.has_antitheorems) {
    add("meet(lr,rl)", LatticeNode::Kind::meet);
    add("join(lr,rl)", LatticeNode::Kind::join);
  }

  std::vector<std::size_t> live;
  std::vector<OraclePtr> oracles;
  for (std::size_t i = 0; i < report.nodes.size(); ++i) {
    if (report.nodes[i].oracle) {
      live.push_back(i);
      oracles.push_back(report.nodes[i].oracle);
    }
  }
  FragmentGrid grid(base.signature(), spec, oracles);
  std::vector<AnswerTable> tables;
  tables.reserve(oracles.size());
  for (const auto& o : oracles) tables.emplace_back(grid, *o);

  const std::size_t n = live.size();
  std::vector<std::vector<bool>> le(n, std::vector<bool>(n, true));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      auto v = compare_tables(grid, *oracles[i], tables[i], *oracles[j], tables[j], extras);
      le[i][j] = v.witnesses_ab.empty();
      le[j][i] = v.witnesses_ba.empty();
      report.verdicts.push_back(std::move(v));
    }
  }

  // Equality groups, each named by its first member.
  std::vector<std::size_t> group(n);
  std::vector<std::size_t> leaders;
  for (std::size_t i = 0; i < n; ++i) {
    group[i] = i;
    for (auto l : leaders) {
      if (le[i][l] && le[l][i]) {
        group[i] = l;
        break;
      }
    }
    if (group[i] == i) leaders.push_back(i);
  }
  for (auto l : leaders) {
    std::vector<std::string> members;
    for (std::size_t i = 0; i < n; ++i) {
      if (group[i] == l) members.push_back(report.nodes[live[i]].id);
    }
    if (members.size() > 1) {
      std::string line;
      for (const auto& m : members) line += (line.empty() ? "" : " = ") + m;
      report.unresolved.push_back(line + " holds on the fragment only");
    }
    report.equal_groups.push_back(std::move(members));
  }
  auto strictly_below = [&](std::size_t a, std::size_t b) { return le[a][b] && !le[b][a]; };
  for (auto a : leaders) {
    for (auto b : leaders) {
      if (!strictly_below(a, b)) continue;
      bool covered = std::none_of(leaders.begin(), leaders.end(),
                                  [&](std::size_t c) { return strictly_below(a, c) && strictly_below(c, b); });
      if (covered) report.hasse.push_back({report.nodes[live[a]].id, report.nodes[live[b]].id, false});
    }
  }

  report.hasse.push_back({"l", "join(l,r)", true});
  report.hasse.push_back({"r", "join(l,r)", true});
  report.hasse.push_back({"join(l,r)", "base", true});
  report.unresolved.push_back("join(l,r): not computed, no construction for joins");
  if (report.has_antitheorems) {
    report.hasse.push_back({"lr", "join(lr,rl)", true});
    report.hasse.push_back({"rl", "join(lr,rl)", true});
    report.hasse.push_back({"join(lr,rl)", "meet(l,r)", true});
    report.unresolved.push_back("join(lr,rl): not computed, no construction for joins");
  }
  return report;
}

// ---------------------------------------------------------------------------
// Witness inferences from the separation arguments
// ---------------------------------------------------------------------------

struct WitnessClaim {
  std::string name;
  Inference inference;
  std::vector<std::pair<std::string, bool>> expected;  // node id -> should hold
  std::vector<std::pair<std::string, bool>> observed;
  bool passed = false;
};

struct WitnessSuiteReport {
  std::vector<WitnessClaim> claims;
  bool passed() const {
    return std::all_of(claims.begin(), claims.end(), [](const WitnessClaim& c) { return c.passed; });
  }
};

/// Instantiates the separating inferences with `pi` and `sigma` and checks
/// each against the companions named in the argument. `sigma` is a set in
/// the single variable x.
inline WitnessSuiteReport witness_suite(const MatrixClass& base, const Formula& pi,
                                        const std::optional<FormulaSet>& sigma, std::string base_label = "M") {
  OraclePtr root = make_matrix_oracle(base, std::move(base_label));
  const auto status = root->antitheorem_status();
  if (sigma) {
    if (vars_of_set(*sigma) != std::vector<Variable>{"x"}) throw PreconditionError("Σ must be a set in the variable x");
    if (!is_antitheorem(*root, *sigma)) throw PreconditionError("Σ is not an antitheorem of the base");
  } else if (status.has_witness()) {
    throw PreconditionError("the base has antitheorems; Σ is required");
  }
  const auto x = Formula::variable("x");
  const auto y = Formula::variable("y");
  const auto z = Formula::variable("z");
  auto p = [&](const Formula& a, const Formula& b) { return instantiate_binary(pi, a, b); };

  WitnessSuiteReport report;
  auto claim = [&](std::string name, std::vector<Formula> prem, Formula concl,
                   std::vector<std::pair<std::string, bool>> expected) {
    report.claims.push_back({std::move(name), {FormulaSet(std::move(prem)), std::move(concl)}, std::move(expected), {}, false});
  };

  claim("pi(x,y) |-r x, not |-l x", {p(x, y)}, x, {{"r", true}, {"l", false}, {"lr", false}});
  claim("x |-l pi(x,y), not |-r x", {x}, p(x, y), {{"l", true}, {"r", false}, {"lr", false}});

  if (auto theorem = first_theorem_in_fragment(*root, FragmentSpec{{"x"}, 2, 0})) {
    claim("theorems separate lr from rl", {p(x, y)}, *theorem, {{"lr", true}, {"rl", false}});
  }

  if (sigma) {
    std::vector<Formula> sig_x(sigma->begin(), sigma->end());
    claim("Sigma(x) |-rl pi(x,y), not |-lr", sig_x, p(x, y),
          {{"rl", true}, {"lr", false}, {"meet(l,r)", true}});
    std::vector<Formula> backward{y};
    for (const auto& eps : *sigma) backward.push_back(p(eps, z));
    claim("y, pi(eps_i(x),z) |-lr pi(y,z), not |-rl", backward, p(y, z),
          {{"lr", true}, {"rl", false}, {"meet(l,r)", true}, {"lrl", false}});
    claim("Sigma(x) not |-rlr pi(x,y)", sig_x, p(x, y), {{"rlr", false}});
    std::vector<Formula> gap{p(y, z)};
    gap.insert(gap.end(), sig_x.begin(), sig_x.end());
    claim("pi(y,z), Sigma(x) |-rlr pi(y,x), not |-rlrl", gap, p(y, x), {{"rlr", true}, {"rlrl", false}});
  }

  std::map<std::string, OraclePtr> cache;
  for (auto& c : report.claims) {
    c.passed = true;
    for (const auto& [id, want] : c.expected) {
      auto& o = cache[id];
      if (!o) o = node_oracle(root, id);
      bool got = o->entails(c.inference.premises, c.inference.conclusion);
      c.observed.emplace_back(id, got);
      if (got != want) c.passed = false;
    }
  }
  return report;
}

}  // namespace vilogic
