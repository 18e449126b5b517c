#pragma once

#include <sstream>
#include <string>

#include "json.hpp"
#include "vilogic/figures.hpp"
#include "vilogic/io.hpp"

// Text and JSON renderings shared by the CLI subcommands.

namespace vilogic::report {

using nlohmann::ordered_json;

inline ordered_json to_json(const Inference& inf) {
  ordered_json prem = ordered_json::array();
  for (const auto& p : inf.premises) prem.push_back(to_string(p));
  return {{"premises", prem}, {"conclusion", to_string(inf.conclusion)}};
}

inline ordered_json to_json(const ComparisonVerdict& v) {
  ordered_json ab = ordered_json::array();
  ordered_json ba = ordered_json::array();
  for (const auto& w : v.witnesses_ab) ab.push_back(to_json(w));
  for (const auto& w : v.witnesses_ba) ba.push_back(to_json(w));
  return {{"a", v.a},
          {"b", v.b},
          {"relation", to_string(v.relation)},
          {"fragment", to_string(v.fragment)},
          {"witnesses_ab", ab},
          {"witnesses_ba", ba}};
}

inline std::string text(const ComparisonVerdict& v) {
  std::ostringstream os;
  os << v.a << " " << to_string(v.relation) << " " << v.b << "  [fragment " << to_string(v.fragment) << "]\n";
  for (const auto& w : v.witnesses_ab) os << "  only " << v.a << ": " << to_string(w) << '\n';
  for (const auto& w : v.witnesses_ba) os << "  only " << v.b << ": " << to_string(w) << '\n';
  return os.str();
}

inline std::string kind_name(LatticeNode::Kind k) {
  switch (k) {
    case LatticeNode::Kind::computed:
      return "computed";
    case LatticeNode::Kind::meet:
      return "meet";
    case LatticeNode::Kind::join:
      break;
  }
  return "join (not computed)";
}

inline ordered_json to_json(const LatticeReport& r) {
  ordered_json out;
  out["fragment"] = to_string(r.fragment);
  out["trivial_base"] = r.trivial_base;
  out["has_antitheorems"] = r.has_antitheorems;
  out["base_antitheorem_status"] = to_string(r.base_status);
  out["base_theorem"] = r.base_theorem ? ordered_json(to_string(*r.base_theorem)) : ordered_json(nullptr);
  out["nodes"] = ordered_json::array();
  for (const auto& n : r.nodes) {
    out["nodes"].push_back({{"id", n.id}, {"kind", kind_name(n.kind)}});
  }
  out["verdicts"] = ordered_json::array();
  for (const auto& v : r.verdicts) out["verdicts"].push_back(to_json(v));
  out["equal_groups"] = r.equal_groups;
  out["hasse"] = ordered_json::array();
  for (const auto& e : r.hasse) out["hasse"].push_back({{"lower", e.lower}, {"upper", e.upper}, {"formal", e.formal}});
  out["unresolved"] = r.unresolved;
  return out;
}

inline std::string text(const LatticeReport& r) {
  std::ostringstream os;
  os << "fragment: " << to_string(r.fragment) << '\n';
  if (r.trivial_base) {
    os << "trivial base: no lattice claims\n";
    return os.str();
  }
  os << "base antitheorems: " << to_string(r.base_status) << '\n';
  os << "base theorem in x: " << (r.base_theorem ? to_string(*r.base_theorem) : "none") << '\n';
  os << "nodes:\n";
  for (const auto& n : r.nodes) {
    os << "  " << n.id << " (" << kind_name(n.kind) << ")";
    if (n.oracle) os << "  " << n.oracle->label();
    os << '\n';
  }
  os << "groups:\n";
  for (const auto& g : r.equal_groups) {
    os << "  ";
    for (std::size_t i = 0; i < g.size(); ++i) os << (i ? " = " : "") << g[i];
    os << '\n';
  }
  os << "hasse edges (lower < upper):\n";
  for (const auto& e : r.hasse) os << "  " << e.lower << " < " << e.upper << (e.formal ? "  (formal)" : "") << '\n';
  os << "verdicts:\n";
  for (const auto& v : r.verdicts) os << "  " << text(v);
  os << "fragment-relative or uncomputed:\n";
  for (const auto& u : r.unresolved) os << "  " << u << '\n';
  return os.str();
}

inline ordered_json to_json(const WitnessSuiteReport& s) {
  ordered_json out = ordered_json::array();
  for (const auto& c : s.claims) {
    ordered_json expected = ordered_json::object();
    ordered_json observed = ordered_json::object();
    for (const auto& [id, b] : c.expected) expected[id] = b;
    for (const auto& [id, b] : c.observed) observed[id] = b;
    out.push_back({{"name", c.name},
                   {"inference", to_json(c.inference)},
                   {"expected", expected},
                   {"observed", observed},
                   {"passed", c.passed}});
  }
  return out;
}

inline std::string text(const WitnessSuiteReport& s) {
  std::ostringstream os;
  for (const auto& c : s.claims) {
    os << (c.passed ? "PASS " : "FAIL ") << c.name << "\n     " << to_string(c.inference) << "\n    ";
    for (const auto& [id, b] : c.observed) os << ' ' << id << (b ? "=yes" : "=no");
    os << '\n';
  }
  return os.str();
}

inline ordered_json to_json(const FigureReport& f) {
  ordered_json claims = ordered_json::array();
  for (const auto& c : f.claims) claims.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  return {{"figure", f.figure},
          {"base", f.base_name},
          {"passed", f.passed()},
          {"claims", claims},
          {"witness_suite", to_json(f.witnesses)},
          {"lattice", to_json(f.lattice)}};
}

inline std::string text(const FigureReport& f) {
  std::ostringstream os;
  os << "figure " << f.figure << " over " << f.base_name << '\n';
  os << text(f.lattice);
  os << "witness suite:\n" << text(f.witnesses);
  os << "claims:\n";
  for (const auto& c : f.claims) {
    os << (c.passed ? "PASS " : "FAIL ") << c.name << '\n';
    if (!c.detail.empty()) os << "     " << c.detail << '\n';
  }
  os << (f.passed() ? "all claims confirmed\n" : "some claims failed\n");
  return os.str();
}

inline std::string text(const PartitionReport& r) {
  std::ostringstream os;
  for (const auto& c : r.checks) {
    os << (c.skipped ? "SKIP " : c.passed ? "PASS " : "FAIL ") << c.axiom;
    if (!c.connective.empty()) os << " (" << c.connective << ")";
    if (!c.passed && !c.counterexample.empty()) {
      os << ":";
      for (const auto& [label, value] : c.counterexample) os << ' ' << label << '=' << value;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace vilogic::report
