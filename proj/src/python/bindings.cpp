#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "vssdd/error.hpp"
#include "vssdd/frontend.hpp"
#include "vssdd/io.hpp"
#include "vssdd/queries.hpp"

namespace py = pybind11;
using namespace vssdd;

namespace {

py::object to_python_int(const BigInt& v) {
  std::ostringstream s;
  s << v;
  return py::module_::import("builtins").attr("int")(s.str());
}

Term to_term(const std::vector<int>& lits) {
  std::vector<Literal> out;
  for (int l : lits) {
    if (l == 0) throw InvalidInput("literal 0 is not a literal");
    out.push_back({static_cast<Var>(l > 0 ? l : -l), l > 0});
  }
  return Term(out);
}

std::vector<Var> to_vars(const std::vector<int>& vars) {
  std::vector<Var> out;
  for (int v : vars) {
    if (v <= 0) throw InvalidInput("variables are positive integers");
    out.push_back(static_cast<Var>(v));
  }
  return out;
}

Cnf to_cnf(int num_vars, const std::vector<std::vector<int>>& clauses) {
  Cnf cnf;
  cnf.num_vars = static_cast<Var>(num_vars);
  cnf.clauses = clauses;
  return cnf;
}

Mode parse_mode(const std::string& mode) {
  if (mode == "trimmed") return Mode::kTrimmed;
  if (mode == "normalized") return Mode::kNormalized;
  throw InvalidInput("mode must be 'trimmed' or 'normalized'");
}

}  // namespace

PYBIND11_MODULE(_vssdd, mod) {
  mod.doc() = "Variable Shift SDD compiler";

  auto base = py::register_exception<Error>(mod, "VssddError");
  py::register_exception<ParseError>(mod, "ParseError", base);
  py::register_exception<InvalidInput>(mod, "InvalidInput", base);
  py::register_exception<InvalidId>(mod, "InvalidId", base);
  py::register_exception<InvalidTerm>(mod, "InvalidTerm", base);
  py::register_exception<InvalidUniverse>(mod, "InvalidUniverse", base);
  py::register_exception<ResourceLimit>(mod, "ResourceLimit", base);
  py::register_exception<ContractViolation>(mod, "ContractViolation", base);
  py::register_exception<InvariantViolation>(mod, "InvariantViolation", base);

  py::class_<Vtree>(mod, "Vtree")
      .def_static("balanced", py::overload_cast<Var>(&Vtree::balanced), py::arg("num_vars"))
      .def_static("right_linear", py::overload_cast<Var>(&Vtree::right_linear), py::arg("num_vars"))
      .def_static("parse", [](const std::string& text) { return parse_vtree(text); })
      .def("serialize", [](const Vtree& v) { return serialize_vtree(v); })
      .def_property_readonly("num_vars", &Vtree::num_vars)
      .def_property_readonly("num_nodes", &Vtree::num_nodes)
      .def_property_readonly("root", &Vtree::root)
      .def("is_leaf", &Vtree::is_leaf)
      .def("left", &Vtree::left)
      .def("right", &Vtree::right)
      .def("var_of", &Vtree::var_of)
      .def("leaf_of", &Vtree::leaf_of)
      .def("lca", &Vtree::lca)
      .def("iso_class", &Vtree::iso_class)
      .def("shift_delta", &Vtree::shift_delta)
      .def("variables_under", &Vtree::variables_under)
      .def("__eq__", [](const Vtree& a, const Vtree& b) { return a == b; });

  py::class_<VsSdd>(mod, "Function")
      .def_readonly("structure", &VsSdd::structure)
      .def_readonly("offset", &VsSdd::offset)
      .def("__eq__", [](const VsSdd& a, const VsSdd& b) { return a == b; })
      .def("__hash__", [](const VsSdd& a) {
        std::size_t h = a.manager;
        detail::hash_combine(h, a.structure);
        detail::hash_combine(h, a.offset);
        return h;
      })
      .def("__repr__", [](const VsSdd& a) {
        return "<Function structure=" + std::to_string(a.structure) + " offset=" + std::to_string(a.offset) + ">";
      });

  py::class_<VsManager>(mod, "Manager")
      .def(py::init([](Vtree v, const std::string& mode, bool compress) {
             return std::make_unique<VsManager>(std::move(v), parse_mode(mode), compress);
           }),
           py::arg("vtree"), py::arg("mode") = "trimmed", py::arg("compress") = true)
      .def_property_readonly("vtree", &VsManager::vtree, py::return_value_policy::reference_internal)
      .def_property_readonly("mode", [](const VsManager& m) { return std::string(mode_name(m.mode())); })
      .def_property_readonly("compress", &VsManager::compressing)
      .def("true", [](const VsManager& m) { return m.constant(true); })
      .def("false", [](const VsManager& m) { return m.constant(false); })
      .def("literal", [](VsManager& m, int lit) {
        if (lit == 0) throw InvalidInput("literal 0 is not a literal");
        return m.literal(static_cast<Var>(lit > 0 ? lit : -lit), lit > 0);
      })
      .def("conjoin", &VsManager::conjoin)
      .def("disjoin", &VsManager::disjoin)
      .def("xor", [](VsManager& m, VsSdd a, VsSdd b) { return m.apply(a, b, Op::kXor); })
      .def("negate", &VsManager::negate)
      .def("condition", [](VsManager& m, VsSdd a, const std::vector<int>& term) {
        return m.condition(a, to_term(term));
      })
      .def("forget", [](VsManager& m, VsSdd a, int x) { return forget_singleton(m, a, to_vars({x})[0]); })
      .def("compile_cnf", [](VsManager& m, int num_vars, const std::vector<std::vector<int>>& clauses) {
        return compile_cnf(m, to_cnf(num_vars, clauses));
      }, py::arg("num_vars"), py::arg("clauses"))
      .def("compile_dimacs", [](VsManager& m, const std::string& text) {
        return compile_cnf(m, parse_dimacs(text));
      })
      .def("count", [](VsManager& m, VsSdd a, std::optional<std::vector<int>> universe) {
        if (!universe) return to_python_int(count(m, a));
        const auto vars = to_vars(*universe);
        return to_python_int(count(m, a, vars));
      }, py::arg("f"), py::arg("universe") = py::none())
      .def("models", [](const VsManager& m, VsSdd a, std::uint64_t limit) {
        std::vector<std::vector<int>> out;
        for (const Model& model : models(m, a, limit)) {
          std::vector<int> lits;
          for (std::size_t v = 1; v < model.size(); ++v) lits.push_back(model[v] ? int(v) : -int(v));
          out.push_back(std::move(lits));
        }
        return out;
      }, py::arg("f"), py::arg("limit") = 0)
      .def("entails", [](VsManager& m, VsSdd a, VsSdd b) { return entails(m, a, b); })
      .def("equivalent", [](VsManager& m, VsSdd a, VsSdd b) { return equivalent(m, a, b); })
      .def("satisfiable", [](VsManager& m, VsSdd a) { return satisfiable(m, a); })
      .def("valid", [](VsManager& m, VsSdd a) { return valid(m, a); })
      .def("shift", &VsManager::shift)
      .def("size", py::overload_cast<VsSdd>(&VsManager::size, py::const_))
      .def("node_count", py::overload_cast<VsSdd>(&VsManager::node_count, py::const_))
      .def("unshared_size", &VsManager::unshared_size)
      .def("sdd_size", [](const VsManager& m, VsSdd a) {
        SddManager s(m.vtree());
        return s.size(m.to_baseline_sdd(a, s));
      })
      .def("save", [](const VsManager& m, VsSdd a) { return save_diagram(m, a); })
      .def("load", [](VsManager& m, const std::string& text) { return load_diagram_into(m, text); })
      .def("export_dot", [](const VsManager& m, VsSdd a) { return export_dot(m, a); })
      .def("stats", [](const VsManager& m) {
        const auto& s = m.stats();
        py::dict d;
        d["apply_calls"] = s.apply_calls;
        d["cache_hits"] = s.cache_hits;
        d["cache_misses"] = s.cache_misses;
        return d;
      });

  mod.def("load_diagram", [](const std::string& text) {
    LoadedDiagram d = load_diagram(text);
    auto m = std::make_unique<VsManager>(std::move(d.manager));
    return py::make_tuple(py::cast(std::move(m)), d.root);
  });

  mod.def("generate", [](const std::string& kind, int a, int b) {
    GeneratedInstance g = kind == "queens" ? gen_nqueens(a)
                          : kind == "grid" ? gen_grid_matching(a, b)
                          : kind == "ftree" ? gen_matching_tree(a)
                                            : throw InvalidInput("kind must be queens, grid or ftree");
    py::dict d;
    d["name"] = g.name;
    d["num_vars"] = g.cnf.num_vars;
    d["clauses"] = g.cnf.clauses;
    d["vtree"] = g.vtree;
    return d;
  }, py::arg("kind"), py::arg("a"), py::arg("b") = 0);

  mod.def("parse_dimacs", [](const std::string& text) {
    std::vector<std::string> warnings;
    Cnf cnf = parse_dimacs(text, &warnings);
    return py::make_tuple(cnf.num_vars, cnf.clauses, warnings);
  });
}
