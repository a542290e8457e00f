#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "vssdd/error.hpp"
#include "vssdd/frontend.hpp"
#include "vssdd/io.hpp"
#include "vssdd/oracle.hpp"
#include "vssdd/queries.hpp"

using namespace vssdd;

namespace {

enum Exit { kOk = 0, kUsage = 1, kInput = 2, kResource = 3, kInternal = 4 };

struct InputFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct OutputFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputFailure("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw OutputFailure("cannot write " + path);
}

Vtree vtree_for(const std::string& choice, Var num_vars) {
  const Var n = std::max<Var>(num_vars, 1);
  if (choice == "balanced") return Vtree::balanced(n);
  if (choice == "rightlinear") return Vtree::right_linear(n);
  return parse_vtree(read_file(choice));
}

std::string ratio_text(std::size_t v, std::size_t s) {
  if (s == 0) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * static_cast<double>(v) / static_cast<double>(s));
  return buf;
}

struct Report {
  std::vector<std::pair<std::string, std::string>> fields;
  void add(const std::string& k, const std::string& v) { fields.emplace_back(k, v); }
  template <typename T>
  void add(const std::string& k, const T& v) {
    std::ostringstream ss;
    ss << v;
    fields.emplace_back(k, ss.str());
  }
  void print(bool porcelain) const {
    for (const auto& [k, v] : fields) {
      if (porcelain) std::cout << k << '=' << v << '\n';
      else std::cout << k << std::string(k.size() < 14 ? 14 - k.size() : 1, ' ') << v << '\n';
    }
  }
};

struct GenOptions {
  std::string kind;
  std::string param;
  std::string prefix;
};

int run_gen(const GenOptions& o) {
  GeneratedInstance inst = [&] {
    if (o.kind == "queens") return gen_nqueens(std::stoi(o.param));
    if (o.kind == "ftree") return gen_matching_tree(std::stoi(o.param));
    const auto x = o.param.find('x');
    if (x == std::string::npos) throw InvalidInput("grid size must look like PxQ");
    return gen_grid_matching(std::stoi(o.param.substr(0, x)), std::stoi(o.param.substr(x + 1)));
  }();
  const std::string prefix = o.prefix.empty() ? inst.name : o.prefix;
  write_file(prefix + ".cnf", write_dimacs(inst.cnf, {inst.name}));
  write_file(prefix + ".vtree", serialize_vtree(inst.vtree));
  std::cout << prefix << ".cnf\n" << prefix << ".vtree\n";
  return kOk;
}

struct CompileOptions {
  std::string cnf;
  std::string vtree = "balanced";
  std::string mode = "trimmed";
  std::string name;
  std::string out;
  bool no_compress = false;
  bool compare_sdd = false;
  bool verify = false;
  bool porcelain = false;
};

int run_compile(const CompileOptions& o) {
  std::vector<std::string> warnings;
  const Cnf cnf = parse_dimacs(read_file(o.cnf), &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
  const Mode mode = o.mode == "normalized" ? Mode::kNormalized : Mode::kTrimmed;
  VsManager m(vtree_for(o.vtree, cnf.num_vars), mode, !o.no_compress);
  CompileStats vs_stats;
  const VsSdd f = compile_cnf(m, cnf, &vs_stats);

  Report r;
  r.add("instance", o.name.empty() ? std::filesystem::path(o.cnf).stem().string() : o.name);
  r.add("vars", cnf.num_vars);
  r.add("clauses", cnf.clauses.size());
  r.add("mode", mode_name(mode));
  r.add("compress", o.no_compress ? 0 : 1);
  r.add("count", count(m, f));
  if (o.compare_sdd) {
    // The baseline is the SDD in the same normal form as the diagram: the
    // canonical trimmed SDD when compressed+trimmed, else the diagram with
    // every structure instantiated per offset.
    std::size_t s_size = m.unshared_size(f);
    std::size_t s_nodes = m.unshared_node_count(f);
    double s_time = 0;
    if (mode == Mode::kTrimmed && !o.no_compress) {
      SddManager sdd(m.vtree());
      CompileStats sdd_stats;
      const SddNode g = compile_cnf(sdd, cnf, &sdd_stats);
      if (sdd_stats.size != s_size || !(m.to_baseline_sdd(f, sdd) == g))
        throw InvariantViolation("baseline SDD disagrees with the expanded VS-SDD");
      s_size = sdd_stats.size;
      s_nodes = sdd.node_count(g);
      s_time = sdd_stats.seconds;
    }
    r.add("S", s_size);
    r.add("V", vs_stats.size);
    r.add("ratio", ratio_text(vs_stats.size, s_size));
    r.add("sdd_nodes", s_nodes);
    r.add("sdd_seconds", s_time);
    if (vs_stats.size > s_size) throw InvariantViolation("VS-SDD larger than its SDD");
  } else {
    r.add("V", vs_stats.size);
  }
  r.add("vs_nodes", vs_stats.node_count);
  r.add("apply_calls", vs_stats.apply_calls);
  r.add("cache_hits", vs_stats.cache_hits);
  r.add("vs_seconds", vs_stats.seconds);
  r.add("root", std::to_string(f.structure) + "@" + std::to_string(f.offset));
  if (o.verify) {
    const Var n = m.vtree().num_vars();
    const auto expected = oracle::table_of(cnf, n);
    if (!(oracle::table_of(m, f) == expected) || count(m, f) != expected.count())
      throw InvariantViolation("compiled diagram disagrees with the truth table");
    r.add("verify", "ok");
  }
  if (!o.out.empty()) write_file(o.out, save_diagram(m, f));
  r.print(o.porcelain);
  return kOk;
}

struct QueryOptions {
  std::string diagram;
  std::string other;
  std::uint64_t limit = 0;
};

int run_query(const std::string& which, const QueryOptions& o) {
  LoadedDiagram d = load_diagram(read_file(o.diagram));
  VsManager& m = d.manager;
  auto second = [&] { return load_diagram_into(m, read_file(o.other)); };
  if (which == "count") std::cout << count(m, d.root) << '\n';
  else if (which == "sat") std::cout << (satisfiable(m, d.root) ? "true" : "false") << '\n';
  else if (which == "valid") std::cout << (valid(m, d.root) ? "true" : "false") << '\n';
  else if (which == "equiv") std::cout << (equivalent(m, d.root, second()) ? "true" : "false") << '\n';
  else if (which == "entails") std::cout << (entails(m, d.root, second()) ? "true" : "false") << '\n';
  else if (which == "enumerate") {
    enumerate_models(
        m, d.root,
        [](const Model& x) {
          std::cout << format_model(x) << '\n';
          return true;
        },
        o.limit);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variable shift SDD compiler"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Write <prefix>.cnf and <prefix>.vtree for a benchmark");
  gen_cmd->add_option("kind", gen.kind, "queens | grid | ftree")
      ->required()
      ->check(CLI::IsMember({"queens", "grid", "ftree"}));
  gen_cmd->add_option("param", gen.param, "N, PxQ or J")->required();
  gen_cmd->add_option("-o,--out", gen.prefix, "Output prefix (default: instance name)");

  CompileOptions comp;
  auto* compile_cmd = app.add_subcommand("compile", "Compile a DIMACS CNF");
  compile_cmd->add_option("--cnf", comp.cnf, "DIMACS file")->required();
  compile_cmd->add_option("--vtree", comp.vtree, "balanced | rightlinear | <file>");
  compile_cmd->add_option("--mode", comp.mode)->check(CLI::IsMember({"trimmed", "normalized"}));
  compile_cmd->add_option("--name", comp.name, "Instance name in the report");
  compile_cmd->add_flag("--no-compress", comp.no_compress);
  compile_cmd->add_flag("--compare-sdd", comp.compare_sdd, "Also report the SDD size");
  compile_cmd->add_flag("--verify", comp.verify, "Check against the truth table (<= 24 vars)");
  compile_cmd->add_option("--out", comp.out, "Write the diagram here");
  compile_cmd->add_flag("--porcelain", comp.porcelain, "key=value output");

  QueryOptions query;
  auto* query_cmd = app.add_subcommand("query", "Query a saved diagram");
  query_cmd->require_subcommand(1);
  query_cmd->add_option("--diagram", query.diagram)->required();
  for (const char* q : {"count", "sat", "valid"}) query_cmd->add_subcommand(q);
  for (const char* q : {"equiv", "entails"})
    query_cmd->add_subcommand(q)->add_option("other", query.other, "Second diagram")->required();
  query_cmd->add_subcommand("enumerate")->add_option("--limit", query.limit, "0 = all");

  std::string dot_path;
  auto* dot_cmd = app.add_subcommand("export-dot", "Print a diagram as Graphviz DOT");
  dot_cmd->add_option("--diagram", dot_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*gen_cmd) return run_gen(gen);
    if (*compile_cmd) return run_compile(comp);
    if (*query_cmd) return run_query(query_cmd->get_subcommands().front()->get_name(), query);
    if (*dot_cmd) {
      const LoadedDiagram d = load_diagram(read_file(dot_path));
      std::cout << export_dot(d.manager, d.root);
      return kOk;
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  } catch (const InputFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: bad number: " << e.what() << '\n';
    return kInput;
  } catch (const ResourceLimit& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kResource;
  } catch (const OutputFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kResource;
  } catch (const std::bad_alloc&) {
    std::cerr << "error: out of memory\n";
    return kResource;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}
