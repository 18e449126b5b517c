#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vilogic/oracle.hpp"

namespace vilogic {

/// Word over {l, r}; read left to right, each letter applied to the logic
/// built so far.
class VISequence {
 public:
  VISequence() = default;
  explicit VISequence(std::string letters) : letters_(std::move(letters)) {
    for (char c : letters_) {
      if (c != 'l' && c != 'r') throw Error("sequence '" + letters_ + "' has a letter other than l or r");
    }
  }

  const std::string& str() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  bool contains_l() const { return letters_.find('l') != std::string::npos; }
  char operator[](std::size_t i) const { return letters_[i]; }

  VISequence operator+(const VISequence& o) const { return VISequence(letters_ + o.letters_); }
  friend bool operator==(const VISequence&, const VISequence&) = default;
  friend auto operator<=>(const VISequence&, const VISequence&) = default;

 private:
  std::string letters_;
};

/// "ε" for the empty word.
inline std::string display(const VISequence& s) { return s.empty() ? "ε" : s.str(); }

// ---------------------------------------------------------------------------
// Combinators
// ---------------------------------------------------------------------------

/// Γ ⊢ˡ φ iff Δ ⊢ φ for Δ = {γ ∈ Γ : Var(γ) ⊆ Var(φ)}. Taking the largest
/// admissible Δ is enough because the base is monotone.
class LeftTransform final : public LogicOracle {
 public:
  explicit LeftTransform(OraclePtr base, std::string label = {}) : base_(std::move(base)), label_(std::move(label)) {
    if (label_.empty()) label_ = base_->label() + "^l";
    // A logic with a nontrivial model loses every antitheorem under l; when
    // ∅ ⊢ y the base is trivial and nothing is claimed.
    status_ = base_->entails({}, Formula::variable("y")) ? AntitheoremStatus::unknown() : AntitheoremStatus::none();
  }

  const Signature& signature() const override { return base_->signature(); }
  std::string label() const override { return label_; }
  AntitheoremStatus antitheorem_status() const override { return status_; }
  const OraclePtr& base() const { return base_; }

  std::vector<bool> entails_each(const FormulaSet& premises, std::span<const Formula> conclusions) const override {
    std::vector<bool> out(conclusions.size());
    // Conclusions sharing a variable set share the admissible premise subset.
    std::map<std::vector<Variable>, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < conclusions.size(); ++i) groups[conclusions[i].vars()].push_back(i);
    for (const auto& [vs, members] : groups) {
      std::vector<Formula> kept;
      for (const auto& g : premises) {
        if (vars_subset(g.vars(), vs)) kept.push_back(g);
      }
      std::vector<Formula> batch;
      batch.reserve(members.size());
      for (auto i : members) batch.push_back(conclusions[i]);
      auto answers = base_->entails_each(FormulaSet(std::move(kept)), batch);
      for (std::size_t k = 0; k < members.size(); ++k) out[members[k]] = answers[k];
    }
    return out;
  }

  std::string semantic_key(const Formula& f, const std::vector<Variable>& frame) const override {
    return vars_key(f) + base_->semantic_key(f, frame);
  }

  static std::string vars_key(const Formula& f) {
    std::string key;
    for (const auto& v : f.vars()) key += v + ',';
    return key + '|';
  }

 private:
  OraclePtr base_;
  std::string label_;
  AntitheoremStatus status_;
};

/// Γ ⊢ʳ φ iff (Γ ⊢ φ and Var(φ) ⊆ Var(Γ)) or Γ is an antitheorem of the
/// base. Antitheorems are tested on the immediate base.
class RightTransform final : public LogicOracle {
 public:
  explicit RightTransform(OraclePtr base, std::string label = {}) : base_(std::move(base)), label_(std::move(label)) {
    if (label_.empty()) label_ = base_->label() + "^r";
  }

  const Signature& signature() const override { return base_->signature(); }
  std::string label() const override { return label_; }
  AntitheoremStatus antitheorem_status() const override { return base_->antitheorem_status(); }
  const OraclePtr& base() const { return base_; }

  std::vector<bool> entails_each(const FormulaSet& premises, std::span<const Formula> conclusions) const override {
    if (is_antitheorem(*base_, premises)) return std::vector<bool>(conclusions.size(), true);
    const auto gamma_vars = vars_of_set(premises);
    std::vector<std::size_t> contained;
    std::vector<Formula> batch;
    for (std::size_t i = 0; i < conclusions.size(); ++i) {
      if (vars_subset(conclusions[i].vars(), gamma_vars)) {
        contained.push_back(i);
        batch.push_back(conclusions[i]);
      }
    }
    std::vector<bool> out(conclusions.size(), false);
    if (batch.empty()) return out;
    auto answers = base_->entails_each(premises, batch);
    for (std::size_t k = 0; k < contained.size(); ++k) out[contained[k]] = answers[k];
    return out;
  }

  std::string semantic_key(const Formula& f, const std::vector<Variable>& frame) const override {
    return LeftTransform::vars_key(f) + base_->semantic_key(f, frame);
  }

 private:
  OraclePtr base_;
  std::string label_;
};

/// Meet in the lattice of logics: pointwise conjunction.
class Intersection final : public LogicOracle {
 public:
  Intersection(OraclePtr a, OraclePtr b, std::string label = {})
      : a_(std::move(a)), b_(std::move(b)), label_(std::move(label)) {
    if (!(a_->signature() == b_->signature())) throw SignatureMismatch("intersecting logics over different signatures");
    if (label_.empty()) label_ = a_->label() + " ∩ " + b_->label();
  }

  const Signature& signature() const override { return a_->signature(); }
  std::string label() const override { return label_; }

  /// An antitheorem of both sides is one of the meet; an absent side proves
  /// absence (the meet is a sublogic).
  AntitheoremStatus antitheorem_status() const override {
    auto sa = a_->antitheorem_status();
    auto sb = b_->antitheorem_status();
    if (sa.proven_absent() || sb.proven_absent()) return AntitheoremStatus::none();
    if (sa.has_witness() && sb.has_witness()) {
      std::vector<Formula> both(sa.witness.begin(), sa.witness.end());
      both.insert(both.end(), sb.witness.begin(), sb.witness.end());
      return AntitheoremStatus::with_witness(FormulaSet(std::move(both)));
    }
    return AntitheoremStatus::unknown();
  }

  std::vector<bool> entails_each(const FormulaSet& premises, std::span<const Formula> conclusions) const override {
    auto left = a_->entails_each(premises, conclusions);
    auto right = b_->entails_each(premises, conclusions);
    for (std::size_t i = 0; i < left.size(); ++i) left[i] = left[i] && right[i];
    return left;
  }

  std::string semantic_key(const Formula& f, const std::vector<Variable>& frame) const override {
    auto ka = a_->semantic_key(f, frame);
    return std::to_string(ka.size()) + ':' + ka + b_->semantic_key(f, frame);
  }

 private:
  OraclePtr a_;
  OraclePtr b_;
  std::string label_;
};

inline OraclePtr left_transform(OraclePtr base) { return std::make_shared<const LeftTransform>(std::move(base)); }
inline OraclePtr right_transform(OraclePtr base) { return std::make_shared<const RightTransform>(std::move(base)); }

inline OraclePtr intersect(OraclePtr a, OraclePtr b, std::string label = {}) {
  return std::make_shared<const Intersection>(std::move(a), std::move(b), std::move(label));
}

/// Applies the letters of `seq` to `base` from left to right.
inline OraclePtr apply_sequence(OraclePtr base, const VISequence& seq) {
  const std::string root = base->label();
  std::string prefix;
  for (char c : seq.str()) {
    prefix += c;
    if (c == 'l') {
      base = std::make_shared<const LeftTransform>(std::move(base), root + "^" + prefix);
    } else {
      base = std::make_shared<const RightTransform>(std::move(base), root + "^" + prefix);
    }
  }
  return base;
}

/// Base matrix class, word over {l, r}, and the binary term used as
/// partition function.
struct DerivedLogicSpec {
  MatrixClass base;
  VISequence sequence;
  Formula partition_term;
};

/// Tower of transforms over the matrix oracle of `spec.base`.
inline OraclePtr derive(const DerivedLogicSpec& spec, std::string base_label = "M") {
  if (vars_by_occurrence(spec.partition_term).size() != 2) {
    throw PreconditionError("partition term must have exactly two variables");
  }
  OraclePtr base = make_matrix_oracle(spec.base, std::move(base_label));
  return apply_sequence(std::move(base), spec.sequence);
}

// ---------------------------------------------------------------------------
// Sequence normal forms
// ---------------------------------------------------------------------------

struct BaseTraits {
  bool has_antitheorems = false;
  /// Informational: theorems make ⊢ʳˡ strictly smaller than ⊢ˡʳ, but they do
  /// not change which words coincide.
  bool has_theorems = false;
};

/// Rewrites to a fixpoint: ll→l, rr→r; with antitheorems rlrl→lrl and
/// lrlr→lrl; without, any word containing rl becomes rl.
inline VISequence canonicalize_sequence(const VISequence& seq, BaseTraits traits) {
  std::string s = seq.str();
  auto rewrite = [&s](std::string_view from, std::string_view to) {
    auto pos = s.find(from);
    if (pos == std::string::npos) return false;
    s.replace(pos, from.size(), to);
    return true;
  };
  bool changed = true;
  while (changed) {
    changed = rewrite("ll", "l") || rewrite("rr", "r");
    if (changed) continue;
    if (traits.has_antitheorems) {
      changed = rewrite("rlrl", "lrl") || rewrite("lrlr", "lrl");
    } else if (s.find("rl") != std::string::npos && s != "rl") {
      s = "rl";
      changed = true;
    }
  }
  return VISequence(s);
}

/// The distinct words up to canonicalization.
inline std::vector<VISequence> canonical_sequences(bool has_antitheorems) {
  if (has_antitheorems) {
    return {VISequence(""),   VISequence("l"),   VISequence("r"),  VISequence("lr"),
            VISequence("rl"), VISequence("rlr"), VISequence("lrl")};
  }
  return {VISequence(""), VISequence("l"), VISequence("r"), VISequence("lr"), VISequence("rl")};
}

/// Subset Δ ⊆ Γ with Δ ⊢ φ and Var(Δ) = Var(φ), by exhaustive search.
inline std::optional<FormulaSet> find_variable_exact_support(const LogicOracle& oracle, const FormulaSet& gamma,
                                                             const Formula& phi) {
  std::vector<Formula> candidates;
  for (const auto& g : gamma) {
    if (vars_subset(g.vars(), phi.vars())) candidates.push_back(g);
  }
  if (candidates.size() > 20) throw Error("too many premises for subset search");
  for (std::size_t bits = 0; bits < (std::size_t{1} << candidates.size()); ++bits) {
    std::vector<Formula> delta;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (bits >> i & 1) delta.push_back(candidates[i]);
    }
    FormulaSet ds(std::move(delta));
    if (vars_of_set(ds) == phi.vars() && oracle.entails(ds, phi)) return ds;
  }
  return std::nullopt;
}

}  // namespace vilogic
