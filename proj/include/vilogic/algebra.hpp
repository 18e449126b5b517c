#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vilogic/error.hpp"
#include "vilogic/formula.hpp"

namespace vilogic {

using Element = std::size_t;  // index into FiniteAlgebra::elements()

/// Finite algebra with total operation tables. Tables are stored flat in
/// mixed radix, first argument most significant.
class FiniteAlgebra {
 public:
  FiniteAlgebra() = default;

  /// `tables[c]` holds |elements|^arity(c) outputs for connective c
  /// (signature order).
  FiniteAlgebra(Signature sig, std::vector<std::string> elements, std::vector<std::vector<Element>> tables)
      : sig_(std::move(sig)), elements_(std::move(elements)), tables_(std::move(tables)) {
    if (elements_.empty()) throw LoadError("algebra needs at least one element");
    for (std::size_t i = 0; i < elements_.size(); ++i) {
      if (!index_.emplace(elements_[i], i).second) throw LoadError("duplicate element '" + elements_[i] + "'");
    }
    if (tables_.size() != sig_.size()) throw LoadError("one table per connective required");
    for (std::size_t c = 0; c < sig_.size(); ++c) {
      if (tables_[c].size() != table_size(sig_[c].arity)) {
        throw LoadError("table '" + sig_[c].name + "' has " + std::to_string(tables_[c].size()) + " entries, expected " +
                        std::to_string(table_size(sig_[c].arity)));
      }
      for (auto out : tables_[c]) {
        if (out >= elements_.size()) throw LoadError("table '" + sig_[c].name + "' outputs an undeclared element");
      }
    }
  }

  const Signature& signature() const { return sig_; }
  std::span<const std::string> elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  const std::string& name(Element e) const { return elements_.at(e); }

  std::optional<Element> find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  Element element(std::string_view name) const {
    auto e = find(name);
    if (!e) throw Error("unknown element '" + std::string(name) + "'");
    return *e;
  }

  Element apply(std::size_t connective, std::span<const Element> args) const {
    std::size_t idx = 0;
    for (auto a : args) idx = idx * elements_.size() + a;
    return tables_[connective][idx];
  }

  Element apply(std::string_view connective, std::span<const Element> args) const {
    auto c = sig_.index_of(connective);
    if (!c) throw UnknownConnectiveError("algebra has no connective '" + std::string(connective) + "'");
    if (args.size() != static_cast<std::size_t>(sig_[*c].arity)) throw ArityError("wrong argument count");
    return apply(*c, args);
  }

  std::span<const Element> table(std::size_t connective) const { return tables_[connective]; }

  std::size_t table_size(int arity) const {
    std::size_t n = 1;
    for (int i = 0; i < arity; ++i) n *= elements_.size();
    return n;
  }

  /// Decodes a flat table index into an argument tuple.
  std::vector<Element> decode(std::size_t idx, int arity) const {
    std::vector<Element> args(static_cast<std::size_t>(arity));
    for (int i = arity - 1; i >= 0; --i) {
      args[static_cast<std::size_t>(i)] = idx % elements_.size();
      idx /= elements_.size();
    }
    return args;
  }

 private:
  Signature sig_;
  std::vector<std::string> elements_;
  std::vector<std::vector<Element>> tables_;
  std::map<std::string, Element, std::less<>> index_;
};

/// Single-element algebra over `sig`.
inline FiniteAlgebra trivial_algebra(const Signature& sig, std::string element = "n") {
  std::vector<std::vector<Element>> tables(sig.size(), std::vector<Element>{0});
  return FiniteAlgebra(sig, {std::move(element)}, std::move(tables));
}

/// Logical matrix: algebra plus designated subset (possibly empty or full).
class FiniteMatrix {
 public:
  FiniteMatrix() = default;
  FiniteMatrix(FiniteAlgebra algebra, std::vector<bool> designated)
      : algebra_(std::move(algebra)), designated_(std::move(designated)) {
    if (designated_.size() != algebra_.size()) throw LoadError("designation mask size differs from universe size");
  }

  FiniteMatrix(FiniteAlgebra algebra, const std::vector<std::string>& designated_names) : algebra_(std::move(algebra)) {
    designated_.assign(algebra_.size(), false);
    for (const auto& n : designated_names) {
      auto e = algebra_.find(n);
      if (!e) throw LoadError("designated element '" + n + "' is not in the universe");
      designated_[*e] = true;
    }
  }

  const FiniteAlgebra& algebra() const { return algebra_; }
  const Signature& signature() const { return algebra_.signature(); }
  bool designated(Element e) const { return designated_[e]; }
  const std::vector<bool>& designation() const { return designated_; }

  std::vector<std::string> designated_names() const {
    std::vector<std::string> out;
    for (Element e = 0; e < algebra_.size(); ++e) {
      if (designated_[e]) out.push_back(algebra_.name(e));
    }
    return out;
  }

  bool designates_nothing() const { return std::none_of(designated_.begin(), designated_.end(), [](bool b) { return b; }); }
  bool designates_everything() const { return std::all_of(designated_.begin(), designated_.end(), [](bool b) { return b; }); }

 private:
  FiniteAlgebra algebra_;
  std::vector<bool> designated_;
};

/// Nonempty family of matrices over one signature.
class MatrixClass {
 public:
  MatrixClass(std::initializer_list<FiniteMatrix> ms) : MatrixClass(std::vector<FiniteMatrix>(ms)) {}
  explicit MatrixClass(std::vector<FiniteMatrix> ms) : matrices_(std::move(ms)) {
    if (matrices_.empty()) throw PreconditionError("matrix class must be nonempty");
    for (const auto& m : matrices_) {
      if (!(m.signature() == matrices_.front().signature())) throw SignatureMismatch("matrices have different signatures");
    }
  }

  const Signature& signature() const { return matrices_.front().signature(); }
  std::span<const FiniteMatrix> matrices() const { return matrices_; }
  std::size_t size() const { return matrices_.size(); }
  const FiniteMatrix& operator[](std::size_t i) const { return matrices_[i]; }

  bool trivial() const {
    return std::all_of(matrices_.begin(), matrices_.end(), [](const auto& m) { return m.designates_everything(); });
  }

 private:
  std::vector<FiniteMatrix> matrices_;
};

using Valuation = std::map<Variable, Element>;

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

inline Element evaluate(const FiniteAlgebra& a, const Formula& f, const Valuation& h) {
  if (f.is_variable()) {
    auto it = h.find(f.symbol());
    if (it == h.end()) throw UnboundVariable("variable '" + f.symbol() + "' is not bound by the valuation");
    if (it->second >= a.size()) throw Error("valuation assigns an element outside the universe");
    return it->second;
  }
  auto c = a.signature().index_of(f.symbol());
  if (!c) throw UnknownConnectiveError("algebra has no connective '" + f.symbol() + "'");
  std::vector<Element> args;
  args.reserve(f.args().size());
  for (const auto& g : f.args()) args.push_back(evaluate(a, g, h));
  return a.apply(*c, args);
}

/// Number of valuations of `k` variables into `a`.
inline std::size_t valuation_count(const FiniteAlgebra& a, std::size_t k) {
  std::size_t n = 1;
  for (std::size_t i = 0; i < k; ++i) n *= a.size();
  return n;
}

/// Valuation number `idx` of `frame` (mixed radix, first variable most
/// significant).
inline Valuation decode_valuation(const FiniteAlgebra& a, const std::vector<Variable>& frame, std::size_t idx) {
  Valuation h;
  for (std::size_t i = frame.size(); i-- > 0;) {
    h[frame[i]] = idx % a.size();
    idx /= a.size();
  }
  return h;
}

/// Values of `f` under every valuation of `frame` (vars(f) ⊆ frame), in
/// decode_valuation order. Evaluates node by node over the whole table.
inline std::vector<Element> value_table(const FiniteAlgebra& a, const Formula& f, const std::vector<Variable>& frame) {
  const std::size_t n = valuation_count(a, frame.size());
  if (f.is_variable()) {
    auto pos = std::find(frame.begin(), frame.end(), f.symbol());
    if (pos == frame.end()) throw UnboundVariable("variable '" + f.symbol() + "' is outside the valuation frame");
    std::size_t stride = valuation_count(a, static_cast<std::size_t>(frame.end() - pos - 1));
    std::vector<Element> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = (i / stride) % a.size();
    return out;
  }
  auto c = a.signature().index_of(f.symbol());
  if (!c) throw UnknownConnectiveError("algebra has no connective '" + f.symbol() + "'");
  std::vector<std::vector<Element>> cols;
  cols.reserve(f.args().size());
  for (const auto& g : f.args()) cols.push_back(value_table(a, g, frame));
  auto table = a.table(*c);
  std::vector<Element> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t idx = 0;
    for (const auto& col : cols) idx = idx * a.size() + col[i];
    out[i] = table[idx];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Homomorphisms
// ---------------------------------------------------------------------------

/// Element mapping A -> B given as `map[a] = b`.
using ElementMap = std::vector<Element>;

/// First argument tuple (and connective) at which `map` fails to commute, if any.
struct HomomorphismFailure {
  std::size_t connective;
  std::vector<Element> args;
};

inline std::optional<HomomorphismFailure> homomorphism_failure(const FiniteAlgebra& a, const FiniteAlgebra& b,
                                                               const ElementMap& map) {
  if (!(a.signature() == b.signature())) throw SignatureMismatch("homomorphism between different signatures");
  if (map.size() != a.size()) throw Error("element map does not cover the domain");
  for (auto img : map) {
    if (img >= b.size()) throw Error("element map leaves the codomain");
  }
  const auto& sig = a.signature();
  for (std::size_t c = 0; c < sig.size(); ++c) {
    const int arity = sig[c].arity;
    for (std::size_t idx = 0; idx < a.table_size(arity); ++idx) {
      auto args = a.decode(idx, arity);
      std::vector<Element> mapped(args.size());
      for (std::size_t k = 0; k < args.size(); ++k) mapped[k] = map[args[k]];
      if (map[a.table(c)[idx]] != b.apply(c, mapped)) return HomomorphismFailure{c, std::move(args)};
    }
  }
  return std::nullopt;
}

inline bool check_homomorphism(const FiniteAlgebra& a, const FiniteAlgebra& b, const ElementMap& map) {
  return !homomorphism_failure(a, b, map).has_value();
}

/// Builds an ElementMap from name pairs; every domain element must be mapped.
inline ElementMap element_map(const FiniteAlgebra& a, const FiniteAlgebra& b,
                              const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::vector<std::optional<Element>> partial(a.size());
  for (const auto& [from, to] : pairs) partial[a.element(from)] = b.element(to);
  ElementMap out;
  for (Element e = 0; e < a.size(); ++e) {
    if (!partial[e]) throw Error("element map misses '" + a.name(e) + "'");
    out.push_back(*partial[e]);
  }
  return out;
}

/// Brute-force isomorphism search (backtracking over bijections, pruned by
/// partial table checks). `compatible(a, b)` restricts which pairs may be
/// matched. Returns `map[a] = b`.
inline std::optional<ElementMap> find_isomorphism(const FiniteAlgebra& a, const FiniteAlgebra& b,
                                                  const std::function<bool(Element, Element)>& compatible = {}) {
  if (!(a.signature() == b.signature()) || a.size() != b.size()) return std::nullopt;
  const std::size_t n = a.size();
  const auto& sig = a.signature();
  ElementMap map(n, 0);
  std::vector<bool> used(n, false);

  // Checks every table entry whose arguments lie in [0, k).
  auto consistent = [&](std::size_t k) {
    for (std::size_t c = 0; c < sig.size(); ++c) {
      const int arity = sig[c].arity;
      for (std::size_t idx = 0; idx < a.table_size(arity); ++idx) {
        auto args = a.decode(idx, arity);
        if (std::any_of(args.begin(), args.end(), [&](Element e) { return e >= k; })) continue;
        Element out = a.table(c)[idx];
        std::vector<Element> mapped(args.size());
        for (std::size_t i = 0; i < args.size(); ++i) mapped[i] = map[args[i]];
        Element image = b.apply(c, mapped);
        if (out < k) {
          if (map[out] != image) return false;
        } else if (std::find(map.begin(), map.begin() + static_cast<std::ptrdiff_t>(k), image) !=
                   map.begin() + static_cast<std::ptrdiff_t>(k)) {
          return false;  // image already taken by an element other than `out`
        }
      }
    }
    return true;
  };

  std::function<bool(std::size_t)> extend = [&](std::size_t k) {
    if (k == n) return true;
    for (Element cand = 0; cand < n; ++cand) {
      if (used[cand] || (compatible && !compatible(k, cand))) continue;
      map[k] = cand;
      used[cand] = true;
      if (consistent(k + 1) && extend(k + 1)) return true;
      used[cand] = false;
    }
    return false;
  };
  if (!extend(0)) return std::nullopt;
  return map;
}

/// Algebra isomorphism mapping designated elements exactly onto designated ones.
inline std::optional<ElementMap> find_matrix_isomorphism(const FiniteMatrix& a, const FiniteMatrix& b) {
  return find_isomorphism(a.algebra(), b.algebra(),
                          [&](Element x, Element y) { return a.designated(x) == b.designated(y); });
}

}  // namespace vilogic
