#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vilogic/error.hpp"

namespace vilogic {

using Variable = std::string;

// ---------------------------------------------------------------------------
// Signature
// ---------------------------------------------------------------------------

/// Finite set of connectives with arities, in declaration order. The order
/// matters: fragment enumeration and algebra tables follow it.
class Signature {
 public:
  struct Connective {
    std::string name;
    int arity;
    friend bool operator==(const Connective&, const Connective&) = default;
  };

  Signature() = default;
  Signature(std::initializer_list<Connective> connectives) {
    for (const auto& c : connectives) add(c.name, c.arity);
  }

  void add(std::string name, int arity) {
    if (arity < 0) throw ArityError("connective '" + name + "' has negative arity");
    if (!is_name(name)) throw Error("invalid connective name '" + name + "'");
    if (index_.contains(name)) throw Error("duplicate connective '" + name + "'");
    index_.emplace(name, connectives_.size());
    connectives_.push_back({std::move(name), arity});
  }

  std::optional<std::size_t> index_of(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  bool contains(std::string_view name) const { return index_of(name).has_value(); }

  std::optional<int> arity(std::string_view name) const {
    auto i = index_of(name);
    if (!i) return std::nullopt;
    return connectives_[*i].arity;
  }

  std::span<const Connective> connectives() const { return connectives_; }
  std::size_t size() const { return connectives_.size(); }
  const Connective& operator[](std::size_t i) const { return connectives_[i]; }

  friend bool operator==(const Signature& a, const Signature& b) {
    return a.connectives_ == b.connectives_;
  }

  /// `[a-zA-Z_][a-zA-Z0-9_']*`
  static bool is_name(std::string_view s) {
    if (s.empty()) return false;
    auto head = static_cast<unsigned char>(s.front());
    if (!(std::isalpha(head) || head == '_')) return false;
    return std::all_of(s.begin() + 1, s.end(), [](char ch) {
      auto c = static_cast<unsigned char>(ch);
      return std::isalnum(c) || c == '_' || c == '\'';
    });
  }

 private:
  std::vector<Connective> connectives_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

// ---------------------------------------------------------------------------
// Formula
// ---------------------------------------------------------------------------

/// Immutable term over a signature. Copies share structure, so passing by
/// value is cheap. Variables have depth 0, constants depth 1.
class Formula {
 public:
  static Formula variable(Variable name) {
    if (!Signature::is_name(name)) throw Error("invalid variable name '" + name + "'");
    auto node = std::make_shared<Node>();
    node->symbol = std::move(name);
    node->is_variable = true;
    node->vars = {node->symbol};
    node->depth = 0;
    node->hash = std::hash<std::string>{}(node->symbol) * 0x9e3779b97f4a7c15ULL;
    return Formula(std::move(node));
  }

  /// Application of a declared connective; checks the arity.
  static Formula apply(const Signature& sig, std::string_view connective, std::vector<Formula> args) {
    auto arity = sig.arity(connective);
    if (!arity) throw UnknownConnectiveError("unknown connective '" + std::string(connective) + "'");
    if (static_cast<std::size_t>(*arity) != args.size()) {
      throw ArityError("connective '" + std::string(connective) + "' expects " + std::to_string(*arity) +
                       " argument(s), got " + std::to_string(args.size()));
    }
    return make_application(std::string(connective), std::move(args));
  }

  bool is_variable() const { return node_->is_variable; }
  /// Variable name or connective name.
  const std::string& symbol() const { return node_->symbol; }
  std::span<const Formula> args() const { return node_->args; }
  /// Variables really occurring, sorted and without repetition.
  const std::vector<Variable>& vars() const { return node_->vars; }
  int depth() const { return node_->depth; }
  std::size_t hash() const { return node_->hash; }
  /// Identity of the shared node; stable while any copy is alive.
  const void* identity() const { return node_.get(); }

  /// Same connective, new arguments. Arity is inherited from `this`.
  Formula with_args(std::vector<Formula> args) const {
    if (args.size() != node_->args.size()) throw ArityError("with_args: argument count changed");
    return make_application(node_->symbol, std::move(args));
  }

  friend bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.hash() != b.hash() || a.depth() != b.depth() || a.is_variable() != b.is_variable()) return false;
    if (a.symbol() != b.symbol() || a.args().size() != b.args().size()) return false;
    return std::equal(a.args().begin(), a.args().end(), b.args().begin());
  }

  /// Total order: depth, variables before applications, symbol, arguments.
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    if (auto c = a.depth() <=> b.depth(); c != 0) return c;
    if (auto c = b.is_variable() <=> a.is_variable(); c != 0) return c;
    if (auto c = a.symbol().compare(b.symbol()) <=> 0; c != 0) return c;
    if (auto c = a.args().size() <=> b.args().size(); c != 0) return c;
    for (std::size_t i = 0; i < a.args().size(); ++i) {
      if (auto c = a.args()[i] <=> b.args()[i]; c != 0) return c;
    }
    return std::strong_ordering::equal;
  }

 private:
  struct Node {
    std::string symbol;
    bool is_variable = false;
    std::vector<Formula> args;
    std::vector<Variable> vars;
    int depth = 0;
    std::size_t hash = 0;
  };

  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  static Formula make_application(std::string symbol, std::vector<Formula> args) {
    auto node = std::make_shared<Node>();
    std::size_t h = std::hash<std::string>{}(symbol) ^ 0x51ed270b27c0ffeeULL;
    int depth = 0;
    std::vector<Variable> vars;
    for (const auto& a : args) {
      h = h * 1000003ULL ^ a.hash();
      depth = std::max(depth, a.depth());
      std::vector<Variable> merged;
      merged.reserve(vars.size() + a.vars().size());
      std::set_union(vars.begin(), vars.end(), a.vars().begin(), a.vars().end(), std::back_inserter(merged));
      vars = std::move(merged);
    }
    node->symbol = std::move(symbol);
    node->args = std::move(args);
    node->vars = std::move(vars);
    node->depth = depth + 1;
    node->hash = h;
    return Formula(std::move(node));
  }

  std::shared_ptr<const Node> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

/// Prints in the input grammar: `and(x, or(x, y))`; constants bare.
inline void print(std::ostream& os, const Formula& f) {
  os << f.symbol();
  if (f.is_variable() || f.args().empty()) return;
  os << '(';
  for (std::size_t i = 0; i < f.args().size(); ++i) {
    if (i) os << ", ";
    print(os, f.args()[i]);
  }
  os << ')';
}

inline std::string to_string(const Formula& f) {
  std::ostringstream os;
  print(os, f);
  return os.str();
}

inline std::ostream& operator<<(std::ostream& os, const Formula& f) {
  print(os, f);
  return os;
}

// ---------------------------------------------------------------------------
// Formula sets
// ---------------------------------------------------------------------------

/// Finite set of formulas kept sorted by the total formula order.
class FormulaSet {
 public:
  using const_iterator = std::vector<Formula>::const_iterator;

  FormulaSet() = default;
  FormulaSet(std::initializer_list<Formula> fs) : FormulaSet(std::vector<Formula>(fs)) {}
  explicit FormulaSet(std::vector<Formula> fs) : items_(std::move(fs)) {
    std::sort(items_.begin(), items_.end());
    items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
  }

  bool insert(const Formula& f) {
    auto it = std::lower_bound(items_.begin(), items_.end(), f);
    if (it != items_.end() && *it == f) return false;
    items_.insert(it, f);
    return true;
  }

  bool contains(const Formula& f) const { return std::binary_search(items_.begin(), items_.end(), f); }
  bool includes(const FormulaSet& other) const {
    return std::includes(items_.begin(), items_.end(), other.items_.begin(), other.items_.end());
  }

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const Formula& operator[](std::size_t i) const { return items_[i]; }
  const_iterator begin() const { return items_.begin(); }
  const_iterator end() const { return items_.end(); }
  std::span<const Formula> items() const { return items_; }

  friend bool operator==(const FormulaSet& a, const FormulaSet& b) { return a.items_ == b.items_; }
  friend auto operator<=>(const FormulaSet& a, const FormulaSet& b) {
    return std::lexicographical_compare_three_way(a.items_.begin(), a.items_.end(), b.items_.begin(),
                                                  b.items_.end());
  }

 private:
  std::vector<Formula> items_;
};

inline std::string to_string(const FormulaSet& s) {
  std::ostringstream os;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) os << ", ";
    os << s[i];
  }
  return os.str();
}

inline const std::vector<Variable>& vars(const Formula& f) { return f.vars(); }

inline std::vector<Variable> vars_of_set(std::span<const Formula> fs) {
  std::set<Variable> out;
  for (const auto& f : fs) out.insert(f.vars().begin(), f.vars().end());
  return {out.begin(), out.end()};
}

inline std::vector<Variable> vars_of_set(const FormulaSet& fs) { return vars_of_set(fs.items()); }

/// `a ⊆ b` for sorted variable lists.
inline bool vars_subset(const std::vector<Variable>& a, const std::vector<Variable>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

/// Fresh variable not in `taken`: `base`, then `base'`, `base''`, ...
inline Variable fresh_variable(const std::vector<Variable>& taken, std::string base = "y") {
  Variable candidate = std::move(base);
  while (std::binary_search(taken.begin(), taken.end(), candidate)) candidate += '\'';
  return candidate;
}

// ---------------------------------------------------------------------------
// Substitution
// ---------------------------------------------------------------------------

/// Variables outside the mapping are fixed.
using Substitution = std::map<Variable, Formula>;

inline Formula substitute(const Formula& f, const Substitution& sigma) {
  if (f.is_variable()) {
    auto it = sigma.find(f.symbol());
    return it == sigma.end() ? f : it->second;
  }
  if (f.args().empty()) return f;
  std::vector<Formula> args;
  args.reserve(f.args().size());
  bool changed = false;
  for (const auto& a : f.args()) {
    args.push_back(substitute(a, sigma));
    changed = changed || args.back().identity() != a.identity();
  }
  return changed ? f.with_args(std::move(args)) : f;
}

inline FormulaSet substitute(const FormulaSet& fs, const Substitution& sigma) {
  std::vector<Formula> out;
  out.reserve(fs.size());
  for (const auto& f : fs) out.push_back(substitute(f, sigma));
  return FormulaSet(std::move(out));
}

/// Variables of a formula in order of first occurrence (left to right).
inline std::vector<Variable> vars_by_occurrence(const Formula& f) {
  std::vector<Variable> out;
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    if (g.is_variable()) {
      if (std::find(out.begin(), out.end(), g.symbol()) == out.end()) out.push_back(g.symbol());
      return;
    }
    for (const auto& a : g.args()) walk(a);
  };
  walk(f);
  return out;
}

/// Instantiates a binary term `t(u, v)`: the first-occurring variable of `t`
/// becomes `first`, the second becomes `second`.
inline Formula instantiate_binary(const Formula& term, const Formula& first, const Formula& second) {
  auto vs = vars_by_occurrence(term);
  if (vs.size() != 2) throw PreconditionError("term '" + to_string(term) + "' is not in exactly two variables");
  return substitute(term, Substitution{{vs[0], first}, {vs[1], second}});
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace detail {

class FormulaParser {
 public:
  FormulaParser(std::string_view text, const Signature& sig) : text_(text), sig_(sig) {}

  Formula parse_all() {
    auto f = parse();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("unexpected '" + std::string(1, text_[pos_]) + "'", pos_);
    return f;
  }

  Formula parse() {
    skip_ws();
    const std::size_t start = pos_;
    std::string name = read_name();
    skip_ws();
    const bool has_args = pos_ < text_.size() && text_[pos_] == '(';
    auto arity = sig_.arity(name);
    if (!arity) {
      if (has_args) throw UnknownConnectiveError("unknown connective '" + name + "' at position " + std::to_string(start));
      return Formula::variable(std::move(name));
    }
    std::vector<Formula> args;
    if (has_args) {
      ++pos_;
      args.push_back(parse());
      skip_ws();
      while (pos_ < text_.size() && text_[pos_] == ',') {
        ++pos_;
        args.push_back(parse());
        skip_ws();
      }
      if (pos_ >= text_.size() || text_[pos_] != ')') throw ParseError("expected ')'", pos_);
      ++pos_;
    }
    if (static_cast<std::size_t>(*arity) != args.size()) {
      throw ArityError("connective '" + name + "' at position " + std::to_string(start) + " expects " +
                       std::to_string(*arity) + " argument(s), got " + std::to_string(args.size()));
    }
    return Formula::apply(sig_, name, std::move(args));
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string read_name() {
    const std::size_t start = pos_;
    if (pos_ >= text_.size()) throw ParseError("expected a name, found end of input", pos_);
    auto head = static_cast<unsigned char>(text_[pos_]);
    if (!(std::isalpha(head) || head == '_')) throw ParseError("expected a name", pos_);
    ++pos_;
    while (pos_ < text_.size()) {
      auto c = static_cast<unsigned char>(text_[pos_]);
      if (!(std::isalnum(c) || c == '_' || c == '\'')) break;
      ++pos_;
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string_view text_;
  const Signature& sig_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Formula parse_formula(std::string_view text, const Signature& sig) {
  return detail::FormulaParser(text, sig).parse_all();
}

/// Comma-separated formula list; commas nested inside parentheses belong to
/// the formulas. Blank input gives an empty list.
inline std::vector<Formula> parse_formula_list(std::string_view text, const Signature& sig) {
  std::vector<Formula> out;
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) return out;
  int level = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || (text[i] == ',' && level == 0)) {
      try {
        out.push_back(parse_formula(text.substr(start, i - start), sig));
      } catch (const ParseError& e) {
        throw ParseError(std::string("in list item: ") + e.what(), start + e.position());
      }
      start = i + 1;
    } else if (text[i] == '(') {
      ++level;
    } else if (text[i] == ')') {
      --level;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fragments
// ---------------------------------------------------------------------------

/// Desk-scale truncation of the formula algebra.
struct FragmentSpec {
  std::vector<Variable> variables{"x", "y", "z"};
  int max_depth = 2;
  int max_premises = 3;

  friend bool operator==(const FragmentSpec&, const FragmentSpec&) = default;
};

inline std::string to_string(const FragmentSpec& spec) {
  std::ostringstream os;
  os << "vars=";
  for (std::size_t i = 0; i < spec.variables.size(); ++i) os << (i ? "," : "") << spec.variables[i];
  os << ";depth=" << spec.max_depth << ";premises=" << spec.max_premises;
  return os.str();
}

/// Parses "vars=x,y,z;depth=2;premises=3". Keys may be omitted or
/// reordered; omitted keys keep the values of `defaults`.
inline FragmentSpec parse_fragment_spec(std::string_view text, FragmentSpec defaults = {}) {
  FragmentSpec spec = std::move(defaults);
  auto trim = [](std::string_view v) {
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front()))) v.remove_prefix(1);
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) v.remove_suffix(1);
    return v;
  };
  auto number = [](std::string_view key, std::string_view v) {
    int out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || out < 0) {
      throw Error("fragment: '" + std::string(key) + "' needs a non-negative integer");
    }
    return out;
  };
  while (!text.empty()) {
    auto semi = text.find(';');
    auto item = trim(text.substr(0, semi));
    text = semi == std::string_view::npos ? std::string_view{} : text.substr(semi + 1);
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string_view::npos) throw Error("fragment: expected key=value in '" + std::string(item) + "'");
    auto key = trim(item.substr(0, eq));
    auto value = trim(item.substr(eq + 1));
    if (key == "vars") {
      spec.variables.clear();
      while (!value.empty()) {
        auto comma = value.find(',');
        auto v = trim(value.substr(0, comma));
        if (!Signature::is_name(v)) throw Error("fragment: invalid variable '" + std::string(v) + "'");
        spec.variables.emplace_back(v);
        value = comma == std::string_view::npos ? std::string_view{} : value.substr(comma + 1);
      }
      if (spec.variables.empty()) throw Error("fragment: no variables");
    } else if (key == "depth") {
      spec.max_depth = number(key, value);
    } else if (key == "premises") {
      spec.max_premises = number(key, value);
    } else {
      throw Error("fragment: unknown key '" + std::string(key) + "'");
    }
  }
  return spec;
}

/// All formulas over `spec.variables` of depth at most `spec.max_depth`,
/// ordered by depth, then by connective in signature order, then by
/// arguments in enumeration order.
inline std::vector<Formula> enumerate_fragment(const Signature& sig, const FragmentSpec& spec) {
  if (spec.variables.empty()) throw PreconditionError("fragment needs at least one variable");
  if (spec.max_depth < 0) throw PreconditionError("fragment depth must be non-negative");
  std::vector<Formula> all;
  for (const auto& v : spec.variables) all.push_back(Formula::variable(v));
  {
    auto check = all;
    std::sort(check.begin(), check.end());
    if (std::adjacent_find(check.begin(), check.end()) != check.end()) {
      throw PreconditionError("fragment variables must be distinct");
    }
  }
  std::size_t below = 0;  // formulas [0, below) have depth < d - 1
  for (int d = 1; d <= spec.max_depth; ++d) {
    const std::size_t upto = all.size();  // formulas [0, upto) have depth <= d - 1
    for (const auto& c : sig.connectives()) {
      if (c.arity == 0) {
        if (d == 1) all.push_back(Formula::apply(sig, c.name, {}));
        continue;
      }
      std::vector<std::size_t> idx(static_cast<std::size_t>(c.arity), 0);
      while (true) {
        bool reaches = std::any_of(idx.begin(), idx.end(), [&](std::size_t i) { return i >= below; });
        if (reaches) {
          std::vector<Formula> args;
          args.reserve(idx.size());
          for (auto i : idx) args.push_back(all[i]);
          all.push_back(Formula::apply(sig, c.name, std::move(args)));
        }
        std::size_t k = idx.size();
        while (k > 0 && ++idx[k - 1] == upto) idx[--k] = 0;
        if (k == 0) break;
      }
    }
    below = upto;
  }
  return all;
}

}  // namespace vilogic

template <>
struct std::hash<vilogic::Formula> {
  std::size_t operator()(const vilogic::Formula& f) const noexcept { return f.hash(); }
};
