// Command-line front end. Exit status: 0 success, 1 failed claim or check,
// 2 bad input.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "report.hpp"
#include "vilogic/bundled.hpp"
#include "vilogic/figures.hpp"
#include "vilogic/io.hpp"

namespace fs = std::filesystem;
using namespace vilogic;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_claim = 1;
constexpr int exit_input = 2;

MatrixClass load_class(const std::vector<std::string>& files) {
  if (files.empty()) throw PreconditionError("at least one matrix file is required");
  std::vector<FiniteMatrix> ms;
  for (const auto& f : files) ms.push_back(load_matrix(f));
  return MatrixClass(std::move(ms));
}

std::string valuation_text(const FiniteAlgebra& alg, const Valuation& v) {
  std::string out;
  for (const auto& [var, e] : v) out += (out.empty() ? "" : ", ") + var + "->" + alg.name(e);
  return out;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw Error("cannot write '" + out_path + "'");
  out << text;
}

struct Options {
  std::vector<std::string> matrices;
  std::vector<std::string> bases;
  std::string seq;
  std::string premises;
  std::string conclusion;
  std::string pi;
  std::string mode = "algebraic";
  std::string system;
  std::string out;
  std::string fragment;
  std::string a;
  std::string b;
  std::vector<std::string> witnesses;
  int figure = 0;
  bool json = false;
};

FragmentSpec fragment_of(const Options& o) { return parse_fragment_spec(o.fragment); }

int cmd_entails(const Options& o) {
  const bool derived = !o.bases.empty();
  if (derived == !o.matrices.empty()) throw PreconditionError("give either --matrix or --base");
  auto cls = load_class(derived ? o.bases : o.matrices);
  const auto& sig = cls.signature();
  FormulaSet premises(parse_formula_list(o.premises, sig));
  auto conclusion = parse_formula(o.conclusion, sig);
  auto matrix = make_matrix_oracle(cls);
  OraclePtr oracle = derived ? apply_sequence(matrix, VISequence(o.seq)) : OraclePtr(matrix);
  const bool yes = oracle->entails(premises, conclusion);
  std::optional<CounterModel> cm;
  if (!yes && (!derived || o.seq.empty())) cm = matrix->counter_model(premises, conclusion);
  if (o.json) {
    report::ordered_json j{{"verdict", yes ? "YES" : "NO"},
                           {"inference", report::to_json(Inference{premises, conclusion})}};
    if (cm) {
      report::ordered_json val = report::ordered_json::object();
      for (const auto& [var, e] : cm->valuation) val[var] = cls[cm->matrix].algebra().name(e);
      j["counter_model"] = {{"matrix", cm->matrix}, {"valuation", val}};
    }
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << (yes ? "YES" : "NO") << '\n';
    if (cm) {
      std::cout << "counter-model: matrix " << cm->matrix << ", "
                << valuation_text(cls[cm->matrix].algebra(), cm->valuation) << '\n';
    }
  }
  return exit_ok;
}

int cmd_derive_info(const Options& o) {
  auto cls = load_class(o.bases);
  auto base = make_matrix_oracle(cls);
  VISequence seq(o.seq);
  BaseTraits traits{base->antitheorem_status().has_witness(),
                    first_theorem_in_fragment(*base, FragmentSpec{{"x"}, 2, 0}).has_value()};
  auto derived = apply_sequence(base, seq);
  auto canonical = canonicalize_sequence(seq, traits);
  if (o.json) {
    report::ordered_json j{{"sequence", display(seq)},
                           {"canonical", display(canonical)},
                           {"base_antitheorems", to_string(base->antitheorem_status())},
                           {"derived_antitheorems", to_string(derived->antitheorem_status())}};
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "sequence: " << display(seq) << '\n'
              << "canonical: " << display(canonical) << '\n'
              << "base antitheorems: " << to_string(base->antitheorem_status()) << '\n'
              << "derived antitheorems: " << to_string(derived->antitheorem_status()) << '\n';
  }
  return exit_ok;
}

int cmd_sum(const Options& o) {
  auto sys = load_system(o.system);
  auto sum = plonka_sum(sys);
  emit(format_matrix(sum, sys.kind != SystemKind::algebraic), o.out);
  return exit_ok;
}

int cmd_decompose(const Options& o) {
  auto m = load_matrix(o.matrices.at(0));
  auto d = decompose(m.algebra(), parse_formula(o.pi, m.signature()));
  const auto& I = d.system.semilattice;
  std::cout << d.system.components.size() << " components\n";
  for (std::size_t i = 0; i < I.size(); ++i) {
    std::cout << "  " << I.name(i) << ":";
    for (auto e : d.members[i]) std::cout << ' ' << m.algebra().name(e);
    std::cout << '\n';
  }
  for (std::size_t i = 0; i < I.size(); ++i) {
    for (std::size_t j = 0; j < I.size(); ++j) {
      if (i != j && I.leq(i, j)) std::cout << "  " << I.name(i) << " < " << I.name(j) << '\n';
    }
  }
  auto sum = plonka_sum(d.system);
  std::cout << "sum isomorphic to input: " << (is_isomorphism(sum.algebra(), m.algebra(), d.sum_to_input) ? "yes" : "no")
            << '\n';
  if (!o.out.empty()) {
    save_system(d.system, o.out);
    std::cout << "wrote " << o.out << '\n';
  }
  return exit_ok;
}

int cmd_check_partition(const Options& o) {
  auto m = load_matrix(o.matrices.at(0));
  auto pi = parse_formula(o.pi, m.signature());
  PartitionMode mode = PartitionMode::algebraic;
  if (o.mode == "left") mode = PartitionMode::left;
  else if (o.mode == "right") mode = PartitionMode::right;
  else if (o.mode != "algebraic") throw PreconditionError("--mode must be algebraic, left or right");
  auto oracle = make_matrix_oracle(MatrixClass{m});
  auto r = check_partition_function(m.algebra(), pi, mode == PartitionMode::algebraic ? nullptr : oracle.get(), mode);
  std::cout << report::text(r) << (r.passed() ? "PASS\n" : "FAIL\n");
  return r.passed() ? exit_ok : exit_claim;
}

int cmd_validate_system(const Options& o) {
  auto sys = load_system(o.system);
  auto r = validate_system(sys);
  if (r.ok()) {
    std::cout << "OK (" << to_string(sys.kind) << " system, " << sys.components.size() << " components)\n";
    return exit_ok;
  }
  std::cout << describe(r) << "INVALID\n";
  return exit_claim;
}

OraclePtr side_oracle(const OraclePtr& base, const std::string& id) {
  if (id.rfind("matrix:", 0) == 0) return make_matrix_oracle(MatrixClass{load_matrix(id.substr(7))}, id.substr(7));
  return node_oracle(base, id);
}

/// File stems of the base matrices, joined with '+'.
std::string base_label(const std::vector<std::string>& files) {
  std::string out;
  for (const auto& f : files) out += (out.empty() ? "" : "+") + std::filesystem::path(f).stem().string();
  return out;
}

int cmd_compare(const Options& o) {
  auto cls = load_class(o.bases);
  OraclePtr base = make_matrix_oracle(cls, base_label(o.bases));
  auto a = side_oracle(base, o.a);
  auto b = side_oracle(base, o.b);
  std::vector<Inference> extras;
  for (const auto& w : o.witnesses) extras.push_back(parse_inference(w, cls.signature()));
  auto v = compare(a, b, fragment_of(o), extras);
  if (o.json) std::cout << report::to_json(v).dump(2) << '\n';
  else std::cout << report::text(v);
  return exit_ok;
}

int cmd_reproduce(const Options& o) {
  auto rep = reproduce_figure(o.figure, fragment_of(o));
  emit(o.json ? report::to_json(rep).dump(2) + "\n" : report::text(rep), o.out);
  if (!o.out.empty()) std::cout << (rep.passed() ? "all claims confirmed\n" : "some claims failed\n");
  if (!rep.passed()) {
    for (const auto& c : rep.claims) {
      if (!c.passed) std::cerr << "failed: " << c.name << '\n';
    }
    for (const auto& c : rep.witnesses.claims) {
      if (!c.passed) std::cerr << "failed: " << c.name << '\n';
    }
  }
  return rep.passed() ? exit_ok : exit_claim;
}

int cmd_bundle(const Options& o) {
  fs::path dir = o.out.empty() ? fs::path("data") : fs::path(o.out);
  fs::create_directories(dir);
  auto wk = bundled::weak_kleene();
  const std::vector<std::pair<std::string, FiniteMatrix>> files{
      {"b2.mat", bundled::b2()},
      {"b2_andor.mat", bundled::b2_lattice()},
      {"wk.mat", FiniteMatrix(wk, std::vector<bool>(wk.size(), false))},
      {"wk_pwk.mat", bundled::pwk()},
      {"wk_b3.mat", bundled::bochvar()},
  };
  for (const auto& [name, m] : files) {
    save_matrix(m, dir / name);
    std::cout << "wrote " << (dir / name).string() << '\n';
  }
  for (std::string s : {"l", "r", "lr", "rl", "rlr", "lrl"}) {
    auto name = "chain_" + s + ".mat";
    save_matrix(canonical_chain_matrix(bundled::b2(), VISequence(s)), dir / name);
    std::cout << "wrote " << (dir / name).string() << '\n';
  }
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variable inclusion companions of finite-matrix logics"};
  app.require_subcommand(1);
  Options o;
  auto fragment_flag = [&](CLI::App* c) {
    c->add_option("--fragment", o.fragment, "Fragment override, e.g. \"vars=x,y,z;depth=2;premises=3\"");
  };

  auto* entails = app.add_subcommand("entails", "Decide one inference");
  entails->add_option("--matrix", o.matrices, "Matrix file (repeatable; the class defines the logic)");
  entails->add_option("--base", o.bases, "Base matrix file for a derived logic (repeatable)");
  entails->add_option("--seq", o.seq, "Word over {l,r} applied to the base");
  entails->add_option("--premises", o.premises, "Comma-separated premises")->default_val("");
  entails->add_option("--conclusion", o.conclusion, "Conclusion")->required();
  entails->add_flag("--json", o.json);

  auto* info = app.add_subcommand("derive-info", "Canonical sequence and antitheorem status");
  info->add_option("--base", o.bases)->required();
  info->add_option("--seq", o.seq)->default_val("");
  info->add_flag("--json", o.json);

  auto* sum = app.add_subcommand("sum", "Płonka sum of a direct system");
  sum->add_option("--system", o.system)->required();
  sum->add_option("--out", o.out, "Write the matrix here instead of stdout");

  auto* dec = app.add_subcommand("decompose", "Split an algebra along a partition term");
  dec->add_option("--matrix", o.matrices)->required()->expected(1);
  dec->add_option("--pi", o.pi)->required();
  dec->add_option("--out", o.out, "Direct-system file to write (component files go alongside)");

  auto* part = app.add_subcommand("check-partition", "Check the partition-function axioms");
  part->add_option("--matrix", o.matrices)->required()->expected(1);
  part->add_option("--pi", o.pi)->required();
  part->add_option("--mode", o.mode, "algebraic, left or right")->default_val("algebraic");

  auto* val = app.add_subcommand("validate-system", "Check a direct-system file");
  val->add_option("--system", o.system)->required();

  auto* cmp = app.add_subcommand("compare", "Compare two logics on a fragment");
  cmp->add_option("--base", o.bases)->required();
  cmp->add_option("--a", o.a, "Sequence, meet(u,v), or matrix:<file>")->required();
  cmp->add_option("--b", o.b, "Sequence, meet(u,v), or matrix:<file>")->required();
  cmp->add_option("--witness", o.witnesses, "Extra inference \"Γ |- φ\" checked first (repeatable)");
  fragment_flag(cmp);
  cmp->add_flag("--json", o.json);

  auto* rep = app.add_subcommand("reproduce", "Check the claims behind a lattice figure");
  rep->add_option("--figure", o.figure)->required()->check(CLI::Range(1, 3));
  rep->add_option("--out", o.out, "Write the report here");
  fragment_flag(rep);
  rep->add_flag("--json", o.json);

  auto* bundle = app.add_subcommand("bundle", "Write the reference matrices as files");
  bundle->add_option("--out", o.out, "Directory (default: data)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? exit_ok : exit_input;
  }

  try {
    if (*entails) return cmd_entails(o);
    if (*info) return cmd_derive_info(o);
    if (*sum) return cmd_sum(o);
    if (*dec) return cmd_decompose(o);
    if (*part) return cmd_check_partition(o);
    if (*val) return cmd_validate_system(o);
    if (*cmp) return cmd_compare(o);
    if (*rep) return cmd_reproduce(o);
    if (*bundle) return cmd_bundle(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_input;
  }
  return exit_input;
}
