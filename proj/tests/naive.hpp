#pragma once

// Brute-force reference semantics used to cross-check the library. Kept
// deliberately naive: recursive evaluation from explicit lambdas, valuations
// by odometer, companions straight from their subset definitions.

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "vilogic/formula.hpp"

namespace naive {

using vilogic::Formula;
using vilogic::Variable;

struct Matrix {
  int size;
  std::map<std::string, std::function<int(const std::vector<int>&)>> ops;
  std::vector<bool> designated;
};

// 0 = false, 1 = true.
inline Matrix b2(bool with_not = true) {
  Matrix m{2, {}, {false, true}};
  m.ops["and"] = [](const std::vector<int>& a) { return a[0] & a[1]; };
  m.ops["or"] = [](const std::vector<int>& a) { return a[0] | a[1]; };
  if (with_not) m.ops["not"] = [](const std::vector<int>& a) { return 1 - a[0]; };
  return m;
}

// 0 = false, 1 = true, 2 = n (infectious).
inline Matrix weak_kleene(std::vector<bool> designated) {
  Matrix m{3, {}, std::move(designated)};
  m.ops["and"] = [](const std::vector<int>& a) { return (a[0] == 2 || a[1] == 2) ? 2 : (a[0] & a[1]); };
  m.ops["or"] = [](const std::vector<int>& a) { return (a[0] == 2 || a[1] == 2) ? 2 : (a[0] | a[1]); };
  m.ops["not"] = [](const std::vector<int>& a) { return a[0] == 2 ? 2 : 1 - a[0]; };
  return m;
}

inline int eval(const Matrix& m, const Formula& f, const std::map<Variable, int>& v) {
  if (f.is_variable()) return v.at(f.symbol());
  std::vector<int> args;
  for (const auto& a : f.args()) args.push_back(eval(m, a, v));
  return m.ops.at(f.symbol())(args);
}

inline std::vector<Variable> all_vars(const std::vector<Formula>& gamma, const Formula& phi) {
  std::set<Variable> s(phi.vars().begin(), phi.vars().end());
  for (const auto& g : gamma) s.insert(g.vars().begin(), g.vars().end());
  return {s.begin(), s.end()};
}

/// Γ ⊨ φ in every matrix of the class.
inline bool entails(const std::vector<Matrix>& cls, const std::vector<Formula>& gamma, const Formula& phi) {
  auto vars = all_vars(gamma, phi);
  for (const auto& m : cls) {
    std::vector<int> digits(vars.size(), 0);
    while (true) {
      std::map<Variable, int> v;
      for (std::size_t i = 0; i < vars.size(); ++i) v[vars[i]] = digits[i];
      bool premises = true;
      for (const auto& g : gamma) premises = premises && m.designated[static_cast<std::size_t>(eval(m, g, v))];
      if (premises && !m.designated[static_cast<std::size_t>(eval(m, phi, v))]) return false;
      std::size_t k = 0;
      while (k < digits.size() && ++digits[k] == m.size) digits[k++] = 0;
      if (k == digits.size()) break;
    }
  }
  return true;
}

using Logic = std::function<bool(const std::vector<Formula>&, const Formula&)>;

inline bool subset(const std::vector<Variable>& a, const std::vector<Variable>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline std::vector<Variable> vars_of(const std::vector<Formula>& gamma) {
  std::set<Variable> s;
  for (const auto& g : gamma) s.insert(g.vars().begin(), g.vars().end());
  return {s.begin(), s.end()};
}

/// Some Δ ⊆ Γ with Var(Δ) ⊆ Var(φ) and Δ ⊢ φ (every subset is tried).
inline Logic left(Logic base) {
  return [base](const std::vector<Formula>& gamma, const Formula& phi) {
    for (std::size_t bits = 0; bits < (std::size_t{1} << gamma.size()); ++bits) {
      std::vector<Formula> delta;
      for (std::size_t i = 0; i < gamma.size(); ++i) {
        if (bits >> i & 1) delta.push_back(gamma[i]);
      }
      if (subset(vars_of(delta), phi.vars()) && base(delta, phi)) return true;
    }
    return false;
  };
}

/// Γ ⊢ φ with Var(φ) ⊆ Var(Γ), or Γ explosive (Γ ⊢ w for a variable w
/// outside Γ).
inline Logic right(Logic base) {
  return [base](const std::vector<Formula>& gamma, const Formula& phi) {
    auto vs = vars_of(gamma);
    std::string w = "w";
    while (std::find(vs.begin(), vs.end(), w) != vs.end()) w += "w";
    if (base(gamma, Formula::variable(w))) return true;
    return subset(phi.vars(), vs) && base(gamma, phi);
  };
}

inline Logic sequence(Logic base, const std::string& word) {
  for (char c : word) base = c == 'l' ? left(base) : right(base);
  return base;
}

/// Random formula over `vars` with depth at most `depth`.
inline Formula random_formula(std::mt19937& rng, const vilogic::Signature& sig, const std::vector<Variable>& vars,
                              int depth) {
  std::uniform_int_distribution<int> coin(0, 2);
  if (depth == 0 || coin(rng) == 0) {
    std::uniform_int_distribution<std::size_t> pick(0, vars.size() - 1);
    return Formula::variable(vars[pick(rng)]);
  }
  std::uniform_int_distribution<std::size_t> pick(0, sig.size() - 1);
  const auto& c = sig[pick(rng)];
  std::vector<Formula> args;
  for (int i = 0; i < c.arity; ++i) args.push_back(random_formula(rng, sig, vars, depth - 1));
  return Formula::apply(sig, c.name, std::move(args));
}

}  // namespace naive
