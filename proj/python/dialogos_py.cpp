// Python bindings. Structured results (derivations, strategies, verdicts)
// cross the boundary as plain dicts in the same shape as the JSON formats.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dialogos/entail.hpp"
#include "dialogos/json_io.hpp"
#include "dialogos/translate.hpp"

namespace py = pybind11;
using namespace dialogos;

namespace {

py::object to_py(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

Json from_py(const py::object& o) {
  return Json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

Sequent sequent_from_text(const std::string& text) {
  if (text.find("|-") == std::string::npos) return {{}, {parse_formula(text)}};
  auto [left, right] = parse_sequent_text(text);
  return {left, right};
}

}  // namespace

PYBIND11_MODULE(dialogos, m) {
  m.doc() = "Dialogical games, strategic sequent proofs and textual entailment";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<TranslationError>(m, "TranslationError", PyExc_ValueError);

  py::class_<SearchLimits>(m, "SearchLimits")
      .def(py::init([](std::size_t depth, std::size_t fresh, std::size_t inst, std::size_t timeout_ms) {
             return SearchLimits{depth, fresh, inst, timeout_ms};
           }),
           py::arg("max_depth") = SearchLimits{}.max_depth, py::arg("max_fresh_vars") = SearchLimits{}.max_fresh_vars,
           py::arg("max_instantiations_per_formula") = SearchLimits{}.max_instantiations_per_formula,
           py::arg("time_budget_ms") = SearchLimits{}.time_budget_ms)
      .def_readwrite("max_depth", &SearchLimits::max_depth)
      .def_readwrite("max_fresh_vars", &SearchLimits::max_fresh_vars)
      .def_readwrite("max_instantiations_per_formula", &SearchLimits::max_instantiations_per_formula)
      .def_readwrite("time_budget_ms", &SearchLimits::time_budget_ms);

  py::class_<Formula>(m, "Formula")
      .def(py::init([](const std::string& text) { return parse_formula(text); }))
      .def("__str__", [](const Formula& f) { return render(f); })
      .def("__repr__", [](const Formula& f) { return "Formula('" + render(f) + "')"; })
      .def("__eq__", [](const Formula& a, const Formula& b) { return a == b; })
      .def("__hash__", &Formula::hash)
      .def_property_readonly("free_vars", &Formula::free_vars)
      .def("polarity", [](const Formula& f) {
        std::map<std::string, std::string> out;
        for (const auto& [name, p] : polarity_table(f))
          if (p.positive || p.negative) out[name] = p.both() ? "both" : p.positive ? "positive" : "negative";
        return out;
      });

  m.def("parse", [](const std::string& text) { return parse_formula(text); }, py::arg("text"));

  m.def(
      "prove",
      [](const std::string& sequent, const SearchLimits& limits) -> py::object {
        auto d = prove(sequent_from_text(sequent), limits);
        return d ? to_py(to_json(*d)) : py::none();
      },
      py::arg("sequent"), py::arg("limits") = SearchLimits{},
      "Strategic derivation of \"F1, F2 |- G\" (or a formula) as a dict, or None.");

  m.def(
      "is_strategic",
      [](const py::object& d) { return is_strategic(derivation_from_json(from_py(d))).strategic; }, py::arg("derivation"));

  m.def(
      "validate_derivation",
      [](const py::object& d) {
        auto r = validate_derivation(derivation_from_json(from_py(d)));
        return py::make_tuple(r.ok, r.path, r.message);
      },
      py::arg("derivation"));

  m.def(
      "find_winning_strategy",
      [](const std::string& formula, const SearchLimits& limits) -> py::object {
        auto s = find_winning_strategy(parse_formula(formula), limits);
        return s ? to_py(to_json(*s)) : py::none();
      },
      py::arg("formula"), py::arg("limits") = SearchLimits{});

  m.def(
      "validate_strategy",
      [](const py::object& s) {
        auto r = validate_strategy(strategy_from_json(from_py(s)));
        return py::make_tuple(r.ok, r.condition, r.path, r.message);
      },
      py::arg("strategy"));

  m.def("is_winning", [](const py::object& s) { return is_winning(strategy_from_json(from_py(s))); },
        py::arg("strategy"));

  m.def(
      "strategy_to_derivation",
      [](const py::object& s) { return to_py(to_json(strategy_to_derivation(strategy_from_json(from_py(s))))); },
      py::arg("strategy"));
  m.def(
      "derivation_to_strategy",
      [](const py::object& d) { return to_py(to_json(derivation_to_strategy(derivation_from_json(from_py(d))))); },
      py::arg("derivation"));
  m.def(
      "strategize",
      [](const py::object& d, const SearchLimits& limits) {
        return to_py(to_json(strategize(derivation_from_json(from_py(d)), limits)));
      },
      py::arg("derivation"), py::arg("limits") = SearchLimits{});

  m.def(
      "entail",
      [](const std::vector<std::string>& hypotheses, const std::string& conclusion, const SearchLimits& limits) {
        return to_py(to_json(decide(make_problem("python", hypotheses, conclusion), limits)));
      },
      py::arg("hypotheses"), py::arg("conclusion"), py::arg("limits") = SearchLimits{});

  m.def(
      "run_suite",
      [](const std::string& text, const SearchLimits& limits) {
        auto summary = run_suite(problems_from_json(parse_json(text)), limits);
        py::list out;
        for (const auto& e : summary.entries) {
          py::dict entry;
          entry["id"] = e.problem.id;
          entry["answer"] = to_string(e.verdict.answer);
          entry["expected"] = e.problem.expected ? py::object(py::str(to_string(*e.problem.expected))) : py::none();
          entry["matches"] = e.matches();
          out.append(entry);
        }
        return out;
      },
      py::arg("suite_json"), py::arg("limits") = SearchLimits{}, "Runs a suite given as JSON text.");
}
