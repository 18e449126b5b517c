#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "vilogic/algebra.hpp"
#include "vilogic/formula.hpp"
#include "vilogic/oracle.hpp"
#include "vilogic/transforms.hpp"

namespace vilogic {

// ---------------------------------------------------------------------------
// Semilattices
// ---------------------------------------------------------------------------

/// Finite join-semilattice given by its join table; i ≤ j iff i ∨ j = j.
class Semilattice {
 public:
  Semilattice() = default;
  Semilattice(std::vector<std::string> names, std::vector<std::vector<std::size_t>> join)
      : names_(std::move(names)), join_(std::move(join)) {
    if (join_.size() != names_.size()) throw LoadError("join table has the wrong number of rows");
    for (const auto& row : join_) {
      if (row.size() != names_.size()) throw LoadError("join table row has the wrong length");
      for (auto v : row) {
        if (v >= names_.size()) throw LoadError("join table refers to an unknown index");
      }
    }
  }

  /// names[0] < names[1] < ...
  static Semilattice chain(std::vector<std::string> names) {
    const std::size_t n = names.size();
    std::vector<std::vector<std::size_t>> join(n, std::vector<std::size_t>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) join[i][j] = std::max(i, j);
    }
    return Semilattice(std::move(names), std::move(join));
  }

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  std::span<const std::string> names() const { return names_; }
  std::optional<std::size_t> find(std::string_view name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - names_.begin());
  }
  std::size_t join(std::size_t i, std::size_t j) const { return join_[i][j]; }
  bool leq(std::size_t i, std::size_t j) const { return join_[i][j] == j; }

  std::optional<std::size_t> bottom() const {
    for (std::size_t i = 0; i < size(); ++i) {
      bool least = true;
      for (std::size_t j = 0; j < size() && least; ++j) least = leq(i, j);
      if (least) return i;
    }
    return std::nullopt;
  }

  /// Violations of commutativity, associativity and idempotence.
  std::vector<std::string> axiom_violations() const {
    std::vector<std::string> out;
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
      if (join(i, i) != i) out.push_back("idempotence fails at " + name(i));
      for (std::size_t j = 0; j < n; ++j) {
        if (join(i, j) != join(j, i)) out.push_back("commutativity fails at " + name(i) + ", " + name(j));
        for (std::size_t k = 0; k < n; ++k) {
          if (join(i, join(j, k)) != join(join(i, j), k)) {
            out.push_back("associativity fails at " + name(i) + ", " + name(j) + ", " + name(k));
          }
        }
      }
    }
    return out;
  }

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<std::size_t>> join_;
};

// ---------------------------------------------------------------------------
// Direct systems
// ---------------------------------------------------------------------------

enum class SystemKind { algebraic, l_matrix, r_matrix };

inline std::string to_string(SystemKind k) {
  switch (k) {
    case SystemKind::algebraic:
      return "algebraic";
    case SystemKind::l_matrix:
      return "l";
    case SystemKind::r_matrix:
      break;
  }
  return "r";
}

/// Semilattice-indexed family of matrices with connecting homomorphisms.
/// Component universes are disjoint by construction: the sum tags every
/// element with its index. Identity maps f_ii may be omitted.
struct DirectSystem {
  SystemKind kind = SystemKind::algebraic;
  Semilattice semilattice;
  std::vector<FiniteMatrix> components;
  std::map<std::pair<std::size_t, std::size_t>, ElementMap> homs;

  /// f_ij; identity when i == j and no map is stored.
  std::optional<ElementMap> hom(std::size_t i, std::size_t j) const {
    auto it = homs.find({i, j});
    if (it != homs.end()) return it->second;
    if (i == j) {
      ElementMap id(components.at(i).algebra().size());
      for (std::size_t k = 0; k < id.size(); ++k) id[k] = k;
      return id;
    }
    return std::nullopt;
  }

  bool designation_matters() const { return kind != SystemKind::algebraic; }
};

struct Violation {
  std::string rule;
  std::string witness;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

inline std::string sum_element_name(const std::string& index, const std::string& element) {
  return index + "." + element;
}

inline ValidationReport validate_system(const DirectSystem& sys) {
  ValidationReport report;
  auto fail = [&report](std::string rule, std::string witness) {
    report.violations.push_back({std::move(rule), std::move(witness)});
  };
  const auto& I = sys.semilattice;
  for (auto& v : I.axiom_violations()) fail("semilattice", v);
  if (sys.components.size() != I.size()) {
    fail("components", "expected " + std::to_string(I.size()) + " components, got " + std::to_string(sys.components.size()));
    return report;
  }
  if (I.size() == 0) {
    fail("components", "empty index set");
    return report;
  }
  for (std::size_t i = 0; i < I.size(); ++i) {
    if (!(sys.components[i].signature() == sys.components[0].signature())) {
      fail("signature", "component " + I.name(i) + " has a different signature");
    }
  }
  {
    std::map<std::string, std::string> seen;
    for (std::size_t i = 0; i < I.size(); ++i) {
      for (const auto& e : sys.components[i].algebra().elements()) {
        auto tagged = sum_element_name(I.name(i), e);
        if (!seen.emplace(tagged, I.name(i)).second) fail("disjoint universes", "tagged name " + tagged + " is ambiguous");
      }
    }
  }
  if (!report.ok()) return report;

  const auto& dname = [&](std::size_t i, Element e) { return sys.components[i].algebra().name(e); };
  for (const auto& [ij, map] : sys.homs) {
    if (ij.first >= I.size() || ij.second >= I.size()) {
      fail("homomorphisms", "map for unknown index pair");
    } else if (!I.leq(ij.first, ij.second)) {
      fail("homomorphisms", "map given for " + I.name(ij.first) + " ≰ " + I.name(ij.second));
    }
  }
  if (!report.ok()) return report;

  bool maps_ok = true;
  for (std::size_t i = 0; i < I.size(); ++i) {
    for (std::size_t j = 0; j < I.size(); ++j) {
      if (!I.leq(i, j)) continue;
      auto f = sys.hom(i, j);
      const std::string pair = "f(" + I.name(i) + "," + I.name(j) + ")";
      if (!f) {
        fail("homomorphisms", pair + " is missing");
        maps_ok = false;
        continue;
      }
      const auto& Ai = sys.components[i].algebra();
      const auto& Aj = sys.components[j].algebra();
      if (f->size() != Ai.size() || std::any_of(f->begin(), f->end(), [&](Element e) { return e >= Aj.size(); })) {
        fail("homomorphisms", pair + " is not a total map between the universes");
        maps_ok = false;
        continue;
      }
      if (auto bad = homomorphism_failure(Ai, Aj, *f)) {
        std::string args;
        for (auto a : bad->args) args += (args.empty() ? "" : ",") + Ai.name(a);
        fail("homomorphism", pair + " does not commute with " + Ai.signature()[bad->connective].name + " at (" + args + ")");
      }
      if (i == j) {
        for (Element a = 0; a < Ai.size(); ++a) {
          if ((*f)[a] != a) {
            fail("identity", pair + " moves " + dname(i, a));
            break;
          }
        }
      }
      if (sys.kind == SystemKind::l_matrix) {
        for (Element a = 0; a < Ai.size(); ++a) {
          if (sys.components[i].designated(a) && !sys.components[j].designated((*f)[a])) {
            fail("f_ij[F_i] ⊆ F_j", pair + " sends designated " + dname(i, a) + " to undesignated " + dname(j, (*f)[a]));
            break;
          }
        }
      }
      if (sys.kind == SystemKind::r_matrix && !sys.components[j].designates_nothing()) {
        for (Element a = 0; a < Ai.size(); ++a) {
          if (sys.components[i].designated(a) != sys.components[j].designated((*f)[a])) {
            fail("f_ij⁻¹[F_j] = F_i", pair + " at " + dname(i, a));
            break;
          }
        }
      }
    }
  }
  if (maps_ok) {
    for (std::size_t i = 0; i < I.size(); ++i) {
      for (std::size_t j = 0; j < I.size(); ++j) {
        for (std::size_t k = 0; k < I.size(); ++k) {
          if (!I.leq(i, j) || !I.leq(j, k)) continue;
          auto fij = *sys.hom(i, j);
          auto fjk = *sys.hom(j, k);
          auto fik = *sys.hom(i, k);
          for (Element a = 0; a < fij.size(); ++a) {
            if (fik[a] != fjk[fij[a]]) {
              fail("composition", "f(" + I.name(i) + "," + I.name(k) + ") ≠ f(" + I.name(j) + "," + I.name(k) + ")∘f(" +
                                      I.name(i) + "," + I.name(j) + ") at " + dname(i, a));
              break;
            }
          }
        }
      }
    }
  }
  if (sys.kind == SystemKind::r_matrix) {
    for (std::size_t i = 0; i < I.size(); ++i) {
      for (std::size_t j = 0; j < I.size(); ++j) {
        if (sys.components[i].designates_nothing() || sys.components[j].designates_nothing()) continue;
        if (sys.components[I.join(i, j)].designates_nothing()) {
          fail("I+ sub-semilattice", I.name(i) + " ∨ " + I.name(j) + " has an empty filter");
        }
      }
    }
  }
  return report;
}

inline std::string describe(const ValidationReport& r) {
  std::ostringstream os;
  for (const auto& v : r.violations) os << v.rule << ": " << v.witness << '\n';
  return os.str();
}

/// Płonka sum: universe is the tagged disjoint union ("i.a"), operations push
/// every argument to the join of their indices, designated set is the union.
inline FiniteMatrix plonka_sum(const DirectSystem& sys) {
  auto report = validate_system(sys);
  if (!report.ok()) throw PreconditionError("invalid direct system:\n" + describe(report));
  const auto& I = sys.semilattice;
  const auto& sig = sys.components.front().signature();

  std::vector<std::string> names;
  std::vector<std::pair<std::size_t, Element>> origin;  // sum element -> (index, local element)
  std::vector<bool> designated;
  for (std::size_t i = 0; i < I.size(); ++i) {
    const auto& m = sys.components[i];
    for (Element e = 0; e < m.algebra().size(); ++e) {
      names.push_back(sum_element_name(I.name(i), m.algebra().name(e)));
      origin.emplace_back(i, e);
      designated.push_back(sys.designation_matters() && m.designated(e));
    }
  }
  std::vector<std::size_t> offset(I.size(), 0);
  for (std::size_t i = 1; i < I.size(); ++i) offset[i] = offset[i - 1] + sys.components[i - 1].algebra().size();

  // Cached homomorphisms, homs[i][j] valid when i ≤ j.
  std::vector<std::vector<ElementMap>> homs(I.size(), std::vector<ElementMap>(I.size()));
  for (std::size_t i = 0; i < I.size(); ++i) {
    for (std::size_t j = 0; j < I.size(); ++j) {
      if (I.leq(i, j)) homs[i][j] = *sys.hom(i, j);
    }
  }

  const std::size_t n = names.size();
  std::vector<std::vector<Element>> tables;
  for (std::size_t c = 0; c < sig.size(); ++c) {
    const int arity = sig[c].arity;
    std::size_t count = 1;
    for (int k = 0; k < arity; ++k) count *= n;
    std::vector<Element> table(count);
    if (arity == 0) {
      auto bottom = I.bottom();
      if (!bottom) throw PreconditionError("constants need a least index in the semilattice");
      table[0] = offset[*bottom] + sys.components[*bottom].algebra().table(c)[0];
      tables.push_back(std::move(table));
      continue;
    }
    std::vector<Element> args(static_cast<std::size_t>(arity));
    for (std::size_t idx = 0; idx < count; ++idx) {
      std::size_t rest = idx;
      for (int k = arity - 1; k >= 0; --k) {
        args[static_cast<std::size_t>(k)] = rest % n;
        rest /= n;
      }
      std::size_t j = origin[args[0]].first;
      for (auto a : args) j = I.join(j, origin[a].first);
      std::vector<Element> pushed(args.size());
      for (std::size_t k = 0; k < args.size(); ++k) {
        auto [i, local] = origin[args[k]];
        pushed[k] = homs[i][j][local];
      }
      table[idx] = offset[j] + sys.components[j].algebra().apply(c, pushed);
    }
    tables.push_back(std::move(table));
  }
  return FiniteMatrix(FiniteAlgebra(sig, std::move(names), std::move(tables)), std::move(designated));
}

/// Same algebra and designation with elements renamed.
inline FiniteMatrix rename_elements(const FiniteMatrix& m, std::vector<std::string> names) {
  const auto& a = m.algebra();
  std::vector<std::vector<Element>> tables;
  for (std::size_t c = 0; c < a.signature().size(); ++c) {
    auto t = a.table(c);
    tables.emplace_back(t.begin(), t.end());
  }
  return FiniteMatrix(FiniteAlgebra(a.signature(), std::move(names), std::move(tables)), m.designation());
}

// ---------------------------------------------------------------------------
// Partition functions
// ---------------------------------------------------------------------------

enum class PartitionMode { algebraic, left, right };

struct AxiomCheck {
  std::string axiom;       // "P1".."P5", or an oracle condition
  std::string connective;  // P4/P5 only
  bool passed = true;
  bool skipped = false;
  /// Labelled element names of the first failing tuple.
  std::vector<std::pair<std::string, std::string>> counterexample;
};

struct PartitionReport {
  std::vector<AxiomCheck> checks;
  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const AxiomCheck& c) { return c.passed; });
  }
  const AxiomCheck* first_failure() const {
    for (const auto& c : checks) {
      if (!c.passed) return &c;
    }
    return nullptr;
  }
  const AxiomCheck* find(std::string_view axiom, std::string_view connective = {}) const {
    for (const auto& c : checks) {
      if (c.axiom == axiom && c.connective == connective) return &c;
    }
    return nullptr;
  }
};

/// The binary operation a·b induced by `term` on `a` (first-occurring
/// variable of the term takes the left argument).
class TermOperation {
 public:
  TermOperation(const FiniteAlgebra& alg, const Formula& term) : n_(alg.size()) {
    auto vs = vars_by_occurrence(term);
    if (vs.size() != 2) throw PreconditionError("term '" + to_string(term) + "' is not bivariate");
    table_ = value_table(alg, term, vs);
  }
  Element operator()(Element a, Element b) const { return table_[a * n_ + b]; }

 private:
  std::size_t n_;
  std::vector<Element> table_;
};

inline PartitionReport check_partition_function(const FiniteAlgebra& alg, const Formula& term,
                                                const LogicOracle* oracle = nullptr,
                                                PartitionMode mode = PartitionMode::algebraic) {
  const TermOperation dot(alg, term);
  const std::size_t n = alg.size();
  const auto& sig = alg.signature();
  auto nm = [&](Element e) { return alg.name(e); };
  PartitionReport report;

  AxiomCheck p1{"P1", {}, true, false, {}};
  for (Element a = 0; a < n && p1.passed; ++a) {
    if (dot(a, a) != a) p1 = {"P1", {}, false, false, {{"a", nm(a)}}};
  }
  report.checks.push_back(p1);

  AxiomCheck p2{"P2", {}, true, false, {}};
  AxiomCheck p3{"P3", {}, true, false, {}};
  for (Element a = 0; a < n; ++a) {
    for (Element b = 0; b < n; ++b) {
      for (Element c = 0; c < n; ++c) {
        if (p2.passed && dot(a, dot(b, c)) != dot(dot(a, b), c)) p2 = {"P2", {}, false, false, {{"a", nm(a)}, {"b", nm(b)}, {"c", nm(c)}}};
        if (p3.passed && dot(a, dot(b, c)) != dot(a, dot(c, b))) p3 = {"P3", {}, false, false, {{"a", nm(a)}, {"b", nm(b)}, {"c", nm(c)}}};
      }
    }
  }
  report.checks.push_back(p2);
  report.checks.push_back(p3);

  for (std::size_t g = 0; g < sig.size(); ++g) {
    const int arity = sig[g].arity;
    if (arity < 1) continue;
    AxiomCheck p4{"P4", sig[g].name, true, false, {}};
    AxiomCheck p5{"P5", sig[g].name, true, false, {}};
    for (Element b = 0; b < n; ++b) {
      for (std::size_t idx = 0; idx < alg.table_size(arity); ++idx) {
        auto args = alg.decode(idx, arity);
        const Element ga = alg.table(g)[idx];
        auto witness = [&] {
          std::vector<std::pair<std::string, std::string>> w{{"b", nm(b)}};
          for (std::size_t k = 0; k < args.size(); ++k) w.emplace_back("a" + std::to_string(k + 1), nm(args[k]));
          return w;
        };
        if (p4.passed) {
          std::vector<Element> pushed(args.size());
          for (std::size_t k = 0; k < args.size(); ++k) pushed[k] = dot(args[k], b);
          if (dot(ga, b) != alg.apply(g, pushed)) {
            p4.passed = false;
            p4.counterexample = witness();
          }
        }
        if (p5.passed) {
          Element rhs = b;
          for (auto a : args) rhs = dot(rhs, a);
          if (dot(b, ga) != rhs) {
            p5.passed = false;
            p5.counterexample = witness();
          }
        }
      }
    }
    report.checks.push_back(p4);
    report.checks.push_back(p5);
  }

  if (mode != PartitionMode::algebraic) {
    auto vs = vars_by_occurrence(term);
    const auto x = Formula::variable(vs[0]);
    const auto y = Formula::variable(vs[1]);
    auto oracle_check = [&](std::string name, const FormulaSet& premises, const Formula& conclusion) {
      AxiomCheck c{std::move(name), {}, true, oracle == nullptr, {}};
      if (oracle) {
        if (!(oracle->signature() == sig)) throw SignatureMismatch("oracle and algebra have different signatures");
        c.passed = oracle->entails(premises, conclusion);
        if (!c.passed) c.counterexample = {{"premises", to_string(premises)}, {"conclusion", to_string(conclusion)}};
      }
      report.checks.push_back(std::move(c));
    };
    if (mode == PartitionMode::left) {
      oracle_check("x ⊢ x·y", {x}, term);
    } else {
      oracle_check("x, y ⊢ x*y", {x, y}, term);
      oracle_check("x*y ⊢ x", {term}, x);
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Płonka decomposition
// ---------------------------------------------------------------------------

struct Decomposition {
  DirectSystem system;
  /// members[i] = elements of the input algebra in component i (ascending).
  std::vector<std::vector<Element>> members;
  /// Input element behind each element of plonka_sum(system), in sum order.
  ElementMap sum_to_input;
};

/// Splits `alg` into the components of the partition function induced by
/// `term`: a ~ b iff a·b = a and b·a = b; i ≤ j iff b·a = b for some a ∈ A_i,
/// b ∈ A_j; f_ij(a) = a·b for any b ∈ A_j.
inline Decomposition decompose(const FiniteAlgebra& alg, const Formula& term) {
  auto check = check_partition_function(alg, term);
  if (!check.passed()) {
    const auto* f = check.first_failure();
    throw PreconditionError("term is not a partition function: " + f->axiom + (f->connective.empty() ? "" : " for " + f->connective) + " fails");
  }
  const TermOperation dot(alg, term);
  const std::size_t n = alg.size();
  auto same = [&](Element a, Element b) { return dot(a, b) == a && dot(b, a) == b; };

  std::vector<std::size_t> comp(n, n);
  std::vector<std::vector<Element>> members;
  for (Element a = 0; a < n; ++a) {
    if (comp[a] != n) continue;
    comp[a] = members.size();
    members.push_back({a});
    for (Element b = a + 1; b < n; ++b) {
      if (comp[b] == n && same(a, b)) {
        comp[b] = comp[a];
        members.back().push_back(b);
      }
    }
  }
  for (Element a = 0; a < n; ++a) {
    for (Element b = 0; b < n; ++b) {
      if (same(a, b) != (comp[a] == comp[b])) throw PreconditionError("a·b = a ∧ b·a = b is not an equivalence");
    }
  }
  const std::size_t k = members.size();
  const auto& sig = alg.signature();

  for (std::size_t c = 0; c < sig.size(); ++c) {
    const int arity = sig[c].arity;
    for (std::size_t idx = 0; idx < alg.table_size(arity); ++idx) {
      auto args = alg.decode(idx, arity);
      const Element out = alg.table(c)[idx];
      if (arity == 0) {
        if (k > 1) throw PreconditionError("constant '" + sig[c].name + "' cannot lie in every component");
        continue;
      }
      bool inside = std::all_of(args.begin(), args.end(), [&](Element a) { return comp[a] == comp[args[0]]; });
      if (inside && comp[out] != comp[args[0]]) throw PreconditionError("component is not closed under " + sig[c].name);
    }
  }

  std::vector<std::vector<bool>> leq(k, std::vector<bool>(k, false));
  for (Element a = 0; a < n; ++a) {
    for (Element b = 0; b < n; ++b) {
      if (dot(b, a) == b) leq[comp[a]][comp[b]] = true;
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (!leq[i][i]) throw PreconditionError("component order is not reflexive");
    for (std::size_t j = 0; j < k; ++j) {
      if (i != j && leq[i][j] && leq[j][i]) throw PreconditionError("component order is not antisymmetric");
      for (std::size_t l = 0; l < k; ++l) {
        if (leq[i][j] && leq[j][l] && !leq[i][l]) throw PreconditionError("component order is not transitive");
      }
    }
  }
  std::vector<std::vector<std::size_t>> join(k, std::vector<std::size_t>(k));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      std::optional<std::size_t> least;
      for (std::size_t u = 0; u < k; ++u) {
        if (!leq[i][u] || !leq[j][u]) continue;
        if (!least || leq[u][*least]) least = u;
      }
      if (!least) throw PreconditionError("components have no join");
      for (std::size_t u = 0; u < k; ++u) {
        if (leq[i][u] && leq[j][u] && !leq[*least][u]) throw PreconditionError("components have no least upper bound");
      }
      join[i][j] = *least;
    }
  }

  std::vector<std::string> index_names;
  for (std::size_t i = 0; i < k; ++i) index_names.push_back("i" + std::to_string(i));

  // Subalgebras on each component, local order = ascending input order.
  std::vector<std::size_t> local(n);
  for (const auto& ms : members) {
    for (std::size_t p = 0; p < ms.size(); ++p) local[ms[p]] = p;
  }
  DirectSystem sys;
  sys.kind = SystemKind::algebraic;
  sys.semilattice = Semilattice(index_names, join);
  for (std::size_t i = 0; i < k; ++i) {
    const auto& ms = members[i];
    std::vector<std::string> names;
    for (auto a : ms) names.push_back(alg.name(a));
    std::vector<std::vector<Element>> tables;
    for (std::size_t c = 0; c < sig.size(); ++c) {
      const int arity = sig[c].arity;
      std::size_t count = 1;
      for (int r = 0; r < arity; ++r) count *= ms.size();
      std::vector<Element> table(count);
      for (std::size_t idx = 0; idx < count; ++idx) {
        std::vector<Element> args(static_cast<std::size_t>(arity));
        std::size_t rest = idx;
        for (int r = arity - 1; r >= 0; --r) {
          args[static_cast<std::size_t>(r)] = ms[rest % ms.size()];
          rest /= ms.size();
        }
        table[idx] = local[alg.apply(c, args)];
      }
      tables.push_back(std::move(table));
    }
    sys.components.emplace_back(FiniteAlgebra(sig, std::move(names), std::move(tables)),
                                std::vector<bool>(ms.size(), false));
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j || !leq[i][j]) continue;
      ElementMap f(members[i].size());
      for (std::size_t p = 0; p < members[i].size(); ++p) {
        const Element a = members[i][p];
        const Element image = dot(a, members[j].front());
        for (auto b : members[j]) {
          if (dot(a, b) != image) throw PreconditionError("f_ij depends on the choice of b");
        }
        if (comp[image] != j) throw PreconditionError("a·b leaves the target component");
        f[p] = local[image];
      }
      sys.homs[{i, j}] = std::move(f);
    }
  }
  Decomposition out{std::move(sys), members, {}};
  for (const auto& ms : out.members) out.sum_to_input.insert(out.sum_to_input.end(), ms.begin(), ms.end());
  return out;
}

/// True iff `map` (sum element -> input element) is a bijection carrying the
/// sum's tables onto `alg`'s tables.
inline bool is_isomorphism(const FiniteAlgebra& from, const FiniteAlgebra& to, const ElementMap& map) {
  if (from.size() != to.size() || map.size() != from.size()) return false;
  std::vector<bool> hit(to.size(), false);
  for (auto e : map) {
    if (e >= to.size() || hit[e]) return false;
    hit[e] = true;
  }
  return check_homomorphism(from, to, map);
}

// ---------------------------------------------------------------------------
// Regular identities
// ---------------------------------------------------------------------------

struct IdentityCheck {
  bool regular = false;
  bool holds = false;
  std::optional<Valuation> counterexample;
};

inline IdentityCheck check_regular_identity(const Formula& lhs, const Formula& rhs, const FiniteAlgebra& alg) {
  IdentityCheck out;
  out.regular = lhs.vars() == rhs.vars();
  std::vector<Variable> frame;
  std::set_union(lhs.vars().begin(), lhs.vars().end(), rhs.vars().begin(), rhs.vars().end(), std::back_inserter(frame));
  auto l = value_table(alg, lhs, frame);
  auto r = value_table(alg, rhs, frame);
  out.holds = true;
  for (std::size_t i = 0; i < l.size(); ++i) {
    if (l[i] != r[i]) {
      out.holds = false;
      out.counterexample = decode_valuation(alg, frame, i);
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Chain matrices
// ---------------------------------------------------------------------------

/// Appends one trivial component on top of `base` per letter of `seq`,
/// designated for l and undesignated for r, each step an l- or r-system sum.
/// New elements are named n, m, p, q, ... avoiding names already in use.
inline FiniteMatrix canonical_chain_matrix(const FiniteMatrix& base, const VISequence& seq) {
  static const std::vector<std::string> pool{"n", "m", "p", "q", "s", "t", "u", "v", "w"};
  FiniteMatrix current = base;
  std::size_t next_name = 0;
  for (char step : seq.str()) {
    const auto& elems = current.algebra().elements();
    std::string top;
    while (top.empty()) {
      std::string cand = next_name < pool.size() ? pool[next_name] : "e" + std::to_string(next_name);
      ++next_name;
      if (std::find(elems.begin(), elems.end(), cand) == elems.end()) top = cand;
    }
    DirectSystem sys;
    sys.kind = step == 'l' ? SystemKind::l_matrix : SystemKind::r_matrix;
    sys.semilattice = Semilattice::chain({"0", "1"});
    sys.components = {current, FiniteMatrix(trivial_algebra(current.signature(), top), std::vector<bool>{step == 'l'})};
    sys.homs[{0, 1}] = ElementMap(current.algebra().size(), 0);
    auto sum = plonka_sum(sys);
    std::vector<std::string> names(elems.begin(), elems.end());
    names.push_back(top);
    current = rename_elements(sum, std::move(names));
  }
  return current;
}

}  // namespace vilogic
