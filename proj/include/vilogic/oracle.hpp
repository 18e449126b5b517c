#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "vilogic/algebra.hpp"
#include "vilogic/formula.hpp"

namespace vilogic {

/// What is known about antitheorems of a logic.
struct AntitheoremStatus {
  enum class Kind { none_proven, witness, unknown };

  Kind kind = Kind::unknown;
  FormulaSet witness;  // meaningful for Kind::witness only

  static AntitheoremStatus none() { return {Kind::none_proven, {}}; }
  static AntitheoremStatus unknown() { return {Kind::unknown, {}}; }
  static AntitheoremStatus with_witness(FormulaSet w) { return {Kind::witness, std::move(w)}; }

  bool has_witness() const { return kind == Kind::witness; }
  bool proven_absent() const { return kind == Kind::none_proven; }
};

inline std::string to_string(const AntitheoremStatus& s) {
  switch (s.kind) {
    case AntitheoremStatus::Kind::none_proven:
      return "none";
    case AntitheoremStatus::Kind::witness:
      return "witness {" + to_string(s.witness) + "}";
    case AntitheoremStatus::Kind::unknown:
      break;
  }
  return "unknown";
}

/// A decidable, finitary logic. Implementations are immutable after
/// construction and safe to query from several threads.
class LogicOracle {
 public:
  virtual ~LogicOracle() = default;

  virtual const Signature& signature() const = 0;
  virtual std::string label() const = 0;

  /// `result[i]` is whether `premises ⊢ conclusions[i]`.
  virtual std::vector<bool> entails_each(const FormulaSet& premises, std::span<const Formula> conclusions) const = 0;

  bool entails(const FormulaSet& premises, const Formula& conclusion) const {
    return entails_each(premises, std::span<const Formula>(&conclusion, 1))[0];
  }

  virtual AntitheoremStatus antitheorem_status() const = 0;

  /// A string such that, for formulas over `frame` (sorted), every answer of
  /// this oracle depends on its arguments only through their keys. Equal
  /// keys make formulas interchangeable in any inference.
  virtual std::string semantic_key(const Formula& f, const std::vector<Variable>& frame) const = 0;
};

using OraclePtr = std::shared_ptr<const LogicOracle>;

/// Γ is an antitheorem iff Γ ⊢ y for a variable y not occurring in Γ.
inline bool is_antitheorem(const LogicOracle& oracle, const FormulaSet& gamma) {
  return oracle.entails(gamma, Formula::variable(fresh_variable(vars_of_set(gamma))));
}

inline bool is_theorem(const LogicOracle& oracle, const Formula& f) { return oracle.entails({}, f); }

/// First theorem of the fragment in enumeration order.
inline std::optional<Formula> first_theorem_in_fragment(const LogicOracle& oracle, const FragmentSpec& spec) {
  auto formulas = enumerate_fragment(oracle.signature(), spec);
  auto answers = oracle.entails_each({}, formulas);
  for (std::size_t i = 0; i < formulas.size(); ++i) {
    if (answers[i]) return formulas[i];
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Matrix semantics
// ---------------------------------------------------------------------------

/// Dynamic bitset used for designation masks.
class Bits {
 public:
  Bits() = default;
  explicit Bits(std::size_t n, bool value = false) : n_(n), words_((n + 63) / 64, value ? ~0ULL : 0ULL) { trim(); }

  std::size_t size() const { return n_; }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1ULL; }
  void set(std::size_t i) { words_[i / 64] |= 1ULL << (i % 64); }
  void reset(std::size_t i) { words_[i / 64] &= ~(1ULL << (i % 64)); }

  Bits& operator&=(const Bits& o) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= o.words_[w];
    return *this;
  }

  /// this ⊆ o
  bool subset_of(const Bits& o) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      if (words_[w] & ~o.words_[w]) return false;
    }
    return true;
  }

  bool none() const {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
  }

  std::optional<std::size_t> first_difference_from(const Bits& o) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      auto d = words_[w] & ~o.words_[w];
      if (d) return w * 64 + static_cast<std::size_t>(__builtin_ctzll(d));
    }
    return std::nullopt;
  }

  std::string bytes() const {
    std::string out(words_.size() * 8, '\0');
    for (std::size_t w = 0; w < words_.size(); ++w) {
      for (std::size_t b = 0; b < 8; ++b) out[w * 8 + b] = static_cast<char>((words_[w] >> (8 * b)) & 0xff);
    }
    return out;
  }

  friend bool operator==(const Bits&, const Bits&) = default;

 private:
  void trim() {
    if (n_ % 64 && !words_.empty()) words_.back() &= (1ULL << (n_ % 64)) - 1;
  }

  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Falsifying model of an inference.
struct CounterModel {
  std::size_t matrix;
  Valuation valuation;
};

/// ⊢_M for a finite class of finite matrices, decided by enumerating the
/// valuations of the variables in play.
class MatrixOracle final : public LogicOracle {
 public:
  static constexpr std::size_t max_mask_bits = std::size_t{1} << 24;

  explicit MatrixOracle(MatrixClass matrices, std::string label = "M")
      : matrices_(std::move(matrices)), label_(std::move(label)) {
    status_ = compute_antitheorem_status();
  }

  const Signature& signature() const override { return matrices_.signature(); }
  std::string label() const override { return label_; }
  const MatrixClass& matrices() const { return matrices_; }

  std::vector<bool> entails_each(const FormulaSet& premises, std::span<const Formula> conclusions) const override {
    auto frame = vars_of_set(premises.items());
    {
      auto more = vars_of_set(conclusions);
      std::vector<Variable> merged;
      std::set_union(frame.begin(), frame.end(), more.begin(), more.end(), std::back_inserter(merged));
      frame = std::move(merged);
    }
    Bits assumed(frame_bits(frame), true);
    for (const auto& p : premises) assumed &= *mask(p, frame);
    std::vector<bool> out(conclusions.size());
    for (std::size_t i = 0; i < conclusions.size(); ++i) out[i] = assumed.subset_of(*mask(conclusions[i], frame));
    return out;
  }

  AntitheoremStatus antitheorem_status() const override { return status_; }

  std::string semantic_key(const Formula& f, const std::vector<Variable>& frame) const override {
    std::string key;
    for (const auto& v : f.vars()) key += v + ',';
    key += '|';
    key += mask(f, frame)->bytes();
    return key;
  }

  /// First matrix and valuation (over vars(Γ ∪ {φ})) designating Γ but not φ.
  std::optional<CounterModel> counter_model(const FormulaSet& premises, const Formula& conclusion) const {
    auto frame = vars_of_set(premises.items());
    {
      std::vector<Variable> merged;
      std::set_union(frame.begin(), frame.end(), conclusion.vars().begin(), conclusion.vars().end(),
                     std::back_inserter(merged));
      frame = std::move(merged);
    }
    for (std::size_t m = 0; m < matrices_.size(); ++m) {
      const auto& mat = matrices_[m];
      const auto& alg = mat.algebra();
      std::vector<std::vector<Element>> prem;
      for (const auto& p : premises) prem.push_back(value_table(alg, p, frame));
      auto concl = value_table(alg, conclusion, frame);
      for (std::size_t v = 0; v < concl.size(); ++v) {
        bool ok = std::all_of(prem.begin(), prem.end(), [&](const auto& t) { return mat.designated(t[v]); });
        if (ok && !mat.designated(concl[v])) return CounterModel{m, decode_valuation(alg, frame, v)};
      }
    }
    return std::nullopt;
  }

 private:
  struct Key {
    Formula formula;
    std::string frame;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const { return k.formula.hash() ^ (std::hash<std::string>{}(k.frame) * 31); }
  };

  std::size_t frame_bits(const std::vector<Variable>& frame) const {
    std::size_t total = 0;
    for (const auto& m : matrices_.matrices()) {
      std::size_t n = valuation_count(m.algebra(), frame.size());
      if (n > max_mask_bits || total > max_mask_bits) throw Error("too many valuations to enumerate");
      total += n;
    }
    return total;
  }

  /// Designation of `f` under every valuation of `frame`, matrices concatenated.
  std::shared_ptr<const Bits> mask(const Formula& f, const std::vector<Variable>& frame) const {
    Key key{f, {}};
    for (const auto& v : frame) key.frame += v + ',';
    {
      std::shared_lock lock(cache_mutex_);
      auto it = cache_.find(key);
      if (it != cache_.end()) return it->second;
    }
    auto bits = std::make_shared<Bits>(frame_bits(frame));
    std::size_t offset = 0;
    for (const auto& m : matrices_.matrices()) {
      auto values = value_table(m.algebra(), f, frame);
      for (std::size_t i = 0; i < values.size(); ++i) {
        if (m.designated(values[i])) bits->set(offset + i);
      }
      offset += values.size();
    }
    std::unique_lock lock(cache_mutex_);
    if (cache_.size() > 1'000'000) cache_.clear();
    cache_.emplace(std::move(key), bits);
    return bits;
  }

  /// Closes {x} under the operations to get every unary term function; the
  /// logic has an antitheorem iff the whole closure is one (every antitheorem
  /// yields one in a single variable). A witness is then shrunk greedily.
  AntitheoremStatus compute_antitheorem_status() const {
    constexpr std::size_t closure_limit = 4096;
    const auto& sig = signature();
    const std::vector<Variable> frame{"x"};
    std::vector<Formula> terms{Formula::variable("x")};
    std::vector<std::string> seen_keys{function_key(terms[0], frame)};
    std::unordered_map<std::string, std::size_t> seen{{seen_keys[0], 0}};
    std::size_t processed = 0;  // terms [0, processed) were combined as arguments
    bool grown = true;
    while (grown) {
      grown = false;
      const std::size_t upto = terms.size();
      for (std::size_t c = 0; c < sig.size(); ++c) {
        const int arity = sig[c].arity;
        std::vector<std::size_t> idx(static_cast<std::size_t>(arity), 0);
        while (true) {
          bool fresh = arity == 0 ? processed == 0
                                  : std::any_of(idx.begin(), idx.end(), [&](std::size_t i) { return i >= processed; });
          if (fresh) {
            std::vector<Formula> args;
            for (auto i : idx) args.push_back(terms[i]);
            auto t = Formula::apply(sig, sig[c].name, std::move(args));
            auto k = function_key(t, frame);
            if (!seen.contains(k)) {
              seen.emplace(k, terms.size());
              terms.push_back(t);
              grown = true;
              if (terms.size() > closure_limit) return AntitheoremStatus::unknown();
            }
          }
          if (arity == 0) break;
          std::size_t pos = idx.size();
          while (pos > 0 && ++idx[pos - 1] == upto) idx[--pos] = 0;
          if (pos == 0) break;
        }
      }
      processed = upto;
    }
    FormulaSet all(terms);
    if (!is_antitheorem(*this, all)) return AntitheoremStatus::none();
    // Drop members from the back while the set stays explosive.
    std::vector<Formula> kept = terms;
    for (std::size_t i = kept.size(); i-- > 0;) {
      std::vector<Formula> trial = kept;
      trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(i));
      if (is_antitheorem(*this, FormulaSet(trial))) kept = std::move(trial);
    }
    return AntitheoremStatus::with_witness(FormulaSet(kept));
  }

  /// Full value tables (not just designation) identify unary term functions.
  std::string function_key(const Formula& t, const std::vector<Variable>& frame) const {
    std::string key;
    for (const auto& m : matrices_.matrices()) {
      for (auto e : value_table(m.algebra(), t, frame)) key += std::to_string(e) + ',';
      key += ';';
    }
    return key;
  }

  MatrixClass matrices_;
  std::string label_;
  AntitheoremStatus status_;
  mutable std::shared_mutex cache_mutex_;
  mutable std::unordered_map<Key, std::shared_ptr<const Bits>, KeyHash> cache_;
};

inline std::shared_ptr<const MatrixOracle> make_matrix_oracle(MatrixClass m, std::string label = "M") {
  return std::make_shared<const MatrixOracle>(std::move(m), std::move(label));
}

/// Γ ⊢_M φ.
inline bool entails(const MatrixClass& m, const FormulaSet& premises, const Formula& conclusion) {
  return MatrixOracle(m).entails(premises, conclusion);
}

}  // namespace vilogic
