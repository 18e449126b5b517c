#pragma once

#include <string>
#include <vector>

#include "vilogic/algebra.hpp"
#include "vilogic/formula.hpp"
#include "vilogic/plonka.hpp"

// Reference matrices. Boolean tables are generated from the C++ operators;
// the weak Kleene tables are entered by hand.

namespace vilogic::bundled {

inline Signature boolean_signature() {
  Signature s;
  s.add("and", 2);
  s.add("or", 2);
  s.add("not", 1);
  return s;
}

inline Signature lattice_signature() {
  Signature s;
  s.add("and", 2);
  s.add("or", 2);
  return s;
}

namespace detail {

inline FiniteAlgebra boolean_algebra(const Signature& sig) {
  std::vector<std::vector<Element>> tables;
  for (const auto& c : sig.connectives()) {
    std::vector<Element> t;
    if (c.name == "and" || c.name == "or") {
      for (Element a = 0; a < 2; ++a) {
        for (Element b = 0; b < 2; ++b) t.push_back(c.name == "and" ? (a && b) : (a || b));
      }
    } else if (c.name == "not") {
      for (Element a = 0; a < 2; ++a) t.push_back(!a);
    } else {
      throw PreconditionError("no Boolean interpretation for '" + c.name + "'");
    }
    tables.push_back(std::move(t));
  }
  return FiniteAlgebra(sig, {"0", "1"}, std::move(tables));
}

}  // namespace detail

/// ⟨B₂, {1}⟩ over and/or/not.
inline FiniteMatrix b2() { return FiniteMatrix(detail::boolean_algebra(boolean_signature()), std::vector<std::string>{"1"}); }

/// ⟨B₂, {1}⟩ over and/or only.
inline FiniteMatrix b2_lattice() { return FiniteMatrix(detail::boolean_algebra(lattice_signature()), std::vector<std::string>{"1"}); }

/// Weak Kleene algebra, elements 0, n, 1; n is infectious.
inline FiniteAlgebra weak_kleene() {
  // clang-format off
  std::vector<std::vector<Element>> tables{
      // and      0  n  1
      /* 0 */   { 0, 1, 0,
      /* n */     1, 1, 1,
      /* 1 */     0, 1, 2 },
      // or       0  n  1
      /* 0 */   { 0, 1, 2,
      /* n */     1, 1, 1,
      /* 1 */     2, 1, 2 },
      // not
                { 2, 1, 0 },
  };
  // clang-format on
  return FiniteAlgebra(boolean_signature(), {"0", "n", "1"}, std::move(tables));
}

/// ⟨WK, {1, n}⟩.
inline FiniteMatrix pwk() { return FiniteMatrix(weak_kleene(), std::vector<std::string>{"1", "n"}); }

/// ⟨WK, {1}⟩.
inline FiniteMatrix bochvar() { return FiniteMatrix(weak_kleene(), std::vector<std::string>{"1"}); }

/// WK rebuilt as the sum of B₂ below the trivial algebra, elements renamed
/// to 0, 1, n (sum order).
inline FiniteAlgebra weak_kleene_as_sum() {
  DirectSystem sys;
  sys.semilattice = Semilattice::chain({"0", "1"});
  const auto sig = boolean_signature();
  sys.components = {FiniteMatrix(detail::boolean_algebra(sig), std::vector<bool>{false, false}),
                    FiniteMatrix(trivial_algebra(sig, "n"), std::vector<bool>{false})};
  sys.homs[{0, 1}] = ElementMap{0, 0};
  return rename_elements(plonka_sum(sys), {"0", "1", "n"}).algebra();
}

/// x ∧ (x ∨ y).
inline Formula partition_term(const Signature& sig) { return parse_formula("and(x, or(x, y))", sig); }

/// {x, ¬x}.
inline FormulaSet classical_antitheorem(const Signature& sig) {
  return FormulaSet(parse_formula_list("x, not(x)", sig));
}

}  // namespace vilogic::bundled
