#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vilogic/algebra.hpp"
#include "vilogic/plonka.hpp"

// Line-oriented description files. `#` starts a comment.
//
//   signature: and/2, or/2, not/1
//   elements: 0, n, 1
//   table and: 0,0->0  0,n->n  ...
//   table not: 0->1  n->n  1->0
//   designated: 1, n
//
// Direct systems reference one matrix file per component:
//
//   kind: l
//   semilattice: a, b
//   join: a,a->a  a,b->b  b,a->b  b,b->b
//   component a: a.mat
//   component b: b.mat
//   hom a b: 0->n  1->n

namespace vilogic {

namespace detail {

inline std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_list(std::string_view s, char sep = ',') {
  std::vector<std::string> out;
  if (trim(s).empty()) return out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

inline std::vector<std::string> split_ws(std::string_view s) {
  std::istringstream is{std::string(s)};
  std::vector<std::string> out;
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

/// Non-comment lines as (line number, key, value) for "key: value".
struct Line {
  int number;
  std::string key;
  std::string value;
};

inline std::vector<Line> read_lines(std::string_view text) {
  std::vector<Line> out;
  std::istringstream is{std::string(text)};
  int number = 0;
  for (std::string raw; std::getline(is, raw);) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    auto line = trim(raw);
    if (line.empty()) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) throw LoadError("line " + std::to_string(number) + ": expected 'key: value'");
    out.push_back({number, trim(std::string_view(line).substr(0, colon)), trim(std::string_view(line).substr(colon + 1))});
  }
  return out;
}

/// Entries "a,b->c" separated by whitespace; a trailing comma on an entry
/// is accepted as separator.
inline std::vector<std::pair<std::vector<std::string>, std::string>> parse_entries(std::string_view s, int line) {
  std::vector<std::pair<std::vector<std::string>, std::string>> out;
  for (auto tok : split_ws(s)) {
    while (!tok.empty() && tok.back() == ',') tok.pop_back();
    if (tok.empty()) continue;
    auto arrow = tok.find("->");
    if (arrow == std::string::npos) throw LoadError("line " + std::to_string(line) + ": entry '" + tok + "' lacks '->'");
    auto lhs = tok.substr(0, arrow);
    auto rhs = tok.substr(arrow + 2);
    if (rhs.empty()) throw LoadError("line " + std::to_string(line) + ": entry '" + tok + "' has no output");
    out.emplace_back(split_list(lhs), rhs);
  }
  return out;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
}

}  // namespace detail

inline FiniteMatrix parse_matrix(std::string_view text) {
  std::optional<Signature> sig;
  std::vector<std::string> elements;
  bool have_elements = false;
  std::map<std::string, std::vector<std::optional<Element>>> tables;
  std::vector<std::string> designated;

  for (const auto& line : detail::read_lines(text)) {
    const std::string where = "line " + std::to_string(line.number) + ": ";
    if (line.key == "signature") {
      Signature s;
      for (const auto& item : detail::split_list(line.value)) {
        auto slash = item.find('/');
        if (slash == std::string::npos) throw LoadError(where + "connective '" + item + "' lacks '/arity'");
        int arity = 0;
        try {
          arity = std::stoi(item.substr(slash + 1));
        } catch (const std::exception&) {
          throw LoadError(where + "bad arity in '" + item + "'");
        }
        try {
          s.add(detail::trim(item.substr(0, slash)), arity);
        } catch (const Error& e) {
          throw LoadError(where + e.what());
        }
      }
      sig = std::move(s);
    } else if (line.key == "elements") {
      elements = detail::split_list(line.value);
      have_elements = true;
    } else if (line.key == "designated") {
      designated = detail::split_list(line.value);
    } else if (line.key.rfind("table ", 0) == 0) {
      if (!sig || !have_elements) throw LoadError(where + "tables must follow 'signature:' and 'elements:'");
      auto name = detail::trim(std::string_view(line.key).substr(6));
      auto c = sig->index_of(name);
      if (!c) throw LoadError(where + "table for undeclared connective '" + name + "'");
      const int arity = (*sig)[*c].arity;
      std::size_t size = 1;
      for (int k = 0; k < arity; ++k) size *= elements.size();
      auto& table = tables[name];
      if (table.empty()) table.assign(size, std::nullopt);
      auto index_of = [&](const std::string& e) {
        auto it = std::find(elements.begin(), elements.end(), e);
        if (it == elements.end()) throw LoadError(where + "unknown element '" + e + "'");
        return static_cast<Element>(it - elements.begin());
      };
      for (const auto& [args, out] : detail::parse_entries(line.value, line.number)) {
        if (args.size() != static_cast<std::size_t>(arity)) throw LoadError(where + "entry for '" + name + "' has wrong arity");
        std::size_t idx = 0;
        for (const auto& a : args) idx = idx * elements.size() + index_of(a);
        auto value = index_of(out);
        if (table[idx] && *table[idx] != value) throw LoadError(where + "conflicting entries for '" + name + "'");
        table[idx] = value;
      }
    } else {
      throw LoadError(where + "unknown key '" + line.key + "'");
    }
  }
  if (!sig) throw LoadError("missing 'signature:'");
  if (!have_elements) throw LoadError("missing 'elements:'");

  std::vector<std::vector<Element>> flat;
  for (const auto& c : sig->connectives()) {
    auto it = tables.find(c.name);
    if (it == tables.end()) throw LoadError("missing table for '" + c.name + "'");
    std::vector<Element> t;
    for (std::size_t idx = 0; idx < it->second.size(); ++idx) {
      if (!it->second[idx]) {
        std::string args;
        std::size_t rest = idx;
        std::vector<std::string> parts(static_cast<std::size_t>(c.arity));
        for (int k = c.arity - 1; k >= 0; --k) {
          parts[static_cast<std::size_t>(k)] = elements[rest % elements.size()];
          rest /= elements.size();
        }
        for (const auto& p : parts) args += (args.empty() ? "" : ",") + p;
        throw LoadError("table '" + c.name + "' misses the entry for (" + args + ")");
      }
      t.push_back(*it->second[idx]);
    }
    flat.push_back(std::move(t));
  }
  return FiniteMatrix(FiniteAlgebra(*sig, elements, std::move(flat)), designated);
}

inline std::string format_signature(const Signature& sig) {
  std::string out;
  for (const auto& c : sig.connectives()) out += (out.empty() ? "" : ", ") + c.name + "/" + std::to_string(c.arity);
  return out;
}

inline std::string format_matrix(const FiniteMatrix& m, bool with_designated = true) {
  const auto& a = m.algebra();
  std::ostringstream os;
  os << "signature: " << format_signature(a.signature()) << '\n';
  os << "elements: ";
  for (std::size_t i = 0; i < a.size(); ++i) os << (i ? ", " : "") << a.name(i);
  os << '\n';
  for (std::size_t c = 0; c < a.signature().size(); ++c) {
    const int arity = a.signature()[c].arity;
    os << "table " << a.signature()[c].name << ':';
    for (std::size_t idx = 0; idx < a.table_size(arity); ++idx) {
      os << ' ';
      auto args = a.decode(idx, arity);
      for (std::size_t k = 0; k < args.size(); ++k) os << (k ? "," : "") << a.name(args[k]);
      os << "->" << a.name(a.table(c)[idx]);
    }
    os << '\n';
  }
  if (with_designated) {
    os << "designated: ";
    auto d = m.designated_names();
    for (std::size_t i = 0; i < d.size(); ++i) os << (i ? ", " : "") << d[i];
    os << '\n';
  }
  return os.str();
}

inline FiniteMatrix load_matrix(const std::filesystem::path& path) {
  try {
    return parse_matrix(detail::read_file(path));
  } catch (const LoadError& e) {
    throw LoadError(path.string() + ": " + e.what());
  }
}

inline void save_matrix(const FiniteMatrix& m, const std::filesystem::path& path) {
  detail::write_file(path, format_matrix(m));
}

// ---------------------------------------------------------------------------
// Direct systems
// ---------------------------------------------------------------------------

/// Component file references are resolved against `base_dir`.
inline DirectSystem parse_system(std::string_view text, const std::filesystem::path& base_dir) {
  DirectSystem sys;
  std::optional<SystemKind> kind;
  std::vector<std::string> names;
  std::vector<std::pair<std::vector<std::string>, std::string>> join_entries;
  std::map<std::string, FiniteMatrix> components;
  std::vector<std::tuple<std::string, std::string, std::vector<std::pair<std::vector<std::string>, std::string>>, int>> homs;

  for (const auto& line : detail::read_lines(text)) {
    const std::string where = "line " + std::to_string(line.number) + ": ";
    if (line.key == "kind") {
      if (line.value == "algebraic") kind = SystemKind::algebraic;
      else if (line.value == "l") kind = SystemKind::l_matrix;
      else if (line.value == "r") kind = SystemKind::r_matrix;
      else throw LoadError(where + "kind must be l, r or algebraic");
    } else if (line.key == "semilattice") {
      names = detail::split_list(line.value);
    } else if (line.key == "join") {
      auto entries = detail::parse_entries(line.value, line.number);
      join_entries.insert(join_entries.end(), entries.begin(), entries.end());
    } else if (line.key.rfind("component ", 0) == 0) {
      auto idx = detail::trim(std::string_view(line.key).substr(10));
      components.insert_or_assign(idx, load_matrix(base_dir / line.value));
    } else if (line.key.rfind("hom ", 0) == 0) {
      auto parts = detail::split_ws(std::string_view(line.key).substr(4));
      if (parts.size() != 2) throw LoadError(where + "expected 'hom i j: ...'");
      homs.emplace_back(parts[0], parts[1], detail::parse_entries(line.value, line.number), line.number);
    } else {
      throw LoadError(where + "unknown key '" + line.key + "'");
    }
  }
  if (!kind) throw LoadError("missing 'kind:'");
  if (names.empty()) throw LoadError("missing 'semilattice:'");
  sys.kind = *kind;

  auto index_of = [&](const std::string& n) {
    auto it = std::find(names.begin(), names.end(), n);
    if (it == names.end()) throw LoadError("unknown index '" + n + "'");
    return static_cast<std::size_t>(it - names.begin());
  };
  std::vector<std::vector<std::optional<std::size_t>>> join(names.size(), std::vector<std::optional<std::size_t>>(names.size()));
  for (const auto& [args, out] : join_entries) {
    if (args.size() != 2) throw LoadError("join entries take two indices");
    join[index_of(args[0])][index_of(args[1])] = index_of(out);
  }
  std::vector<std::vector<std::size_t>> table(names.size(), std::vector<std::size_t>(names.size()));
  for (std::size_t i = 0; i < names.size(); ++i) {
    for (std::size_t j = 0; j < names.size(); ++j) {
      if (!join[i][j]) throw LoadError("join table misses (" + names[i] + "," + names[j] + ")");
      table[i][j] = *join[i][j];
    }
  }
  sys.semilattice = Semilattice(names, std::move(table));
  for (const auto& n : names) {
    auto it = components.find(n);
    if (it == components.end()) throw LoadError("missing component for index '" + n + "'");
    sys.components.push_back(it->second);
  }
  for (const auto& [from, to, entries, number] : homs) {
    auto i = index_of(from);
    auto j = index_of(to);
    const auto& Ai = sys.components[i].algebra();
    const auto& Aj = sys.components[j].algebra();
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& [args, out] : entries) {
      if (args.size() != 1) throw LoadError("line " + std::to_string(number) + ": hom entries map one element");
      if (!Ai.find(args[0]) || !Aj.find(out)) throw LoadError("line " + std::to_string(number) + ": unknown element in hom");
      pairs.emplace_back(args[0], out);
    }
    try {
      sys.homs[{i, j}] = element_map(Ai, Aj, pairs);
    } catch (const Error& e) {
      throw LoadError("line " + std::to_string(number) + ": " + e.what());
    }
  }
  return sys;
}

inline DirectSystem load_system(const std::filesystem::path& path) {
  try {
    return parse_system(detail::read_file(path), path.parent_path());
  } catch (const LoadError& e) {
    throw LoadError(path.string() + ": " + e.what());
  }
}

/// Writes `path` and one matrix file per component next to it
/// (`<stem>.<index>.mat`).
inline void save_system(const DirectSystem& sys, const std::filesystem::path& path) {
  const auto& I = sys.semilattice;
  std::ostringstream os;
  os << "kind: " << to_string(sys.kind) << '\n';
  os << "semilattice: ";
  for (std::size_t i = 0; i < I.size(); ++i) os << (i ? ", " : "") << I.name(i);
  os << "\njoin:";
  for (std::size_t i = 0; i < I.size(); ++i) {
    for (std::size_t j = 0; j < I.size(); ++j) os << ' ' << I.name(i) << ',' << I.name(j) << "->" << I.name(I.join(i, j));
  }
  os << '\n';
  for (std::size_t i = 0; i < I.size(); ++i) {
    auto file = path.stem().string() + "." + I.name(i) + ".mat";
    save_matrix(sys.components[i], path.parent_path() / file);
    os << "component " << I.name(i) << ": " << file << '\n';
  }
  for (const auto& [ij, map] : sys.homs) {
    const auto& Ai = sys.components[ij.first].algebra();
    const auto& Aj = sys.components[ij.second].algebra();
    os << "hom " << I.name(ij.first) << ' ' << I.name(ij.second) << ':';
    for (Element a = 0; a < map.size(); ++a) os << ' ' << Ai.name(a) << "->" << Aj.name(map[a]);
    os << '\n';
  }
  detail::write_file(path, os.str());
}

}  // namespace vilogic
