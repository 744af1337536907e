// Python bindings: a thin, text-oriented layer over the C++ core. Programs,
// graphs and predicates travel as the same text formats the CLI reads.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "urmflow/collecting.hpp"
#include "urmflow/error.hpp"
#include "urmflow/goedel.hpp"
#include "urmflow/karr.hpp"
#include "urmflow/statesem.hpp"
#include "urmflow/tau.hpp"

namespace py = pybind11;
using namespace urmflow;
using Values = std::vector<cfg::Value>;

namespace {

Natural to_natural(const py::int_& v) {
  if (v < py::int_(0)) throw ContractError("expected a natural number");
  return Natural(py::str(py::handle(v)).cast<std::string>());
}

py::int_ to_int(const Natural& n) {
  return py::reinterpret_steal<py::int_>(PyLong_FromString(n.get_str().c_str(), nullptr, 10));
}

cfg::CollectOptions options(std::uint64_t fuel, bool zero_pad, bool accelerate) {
  return {.fuel = fuel,
          .padding = zero_pad ? cfg::Padding::Zero : cfg::Padding::Free,
          .iteration = accelerate ? cfg::Iteration::Accelerated : cfg::Iteration::Kleene};
}

/// `fin` predicates need an arity; without one they take the input length.
statesem::Predicate predicate(const std::string& text, std::optional<std::size_t> arity,
                              std::size_t fallback) {
  auto start = text.find_first_not_of(" \t");
  bool fin = start != std::string::npos && text.compare(start, 3, "fin") == 0;
  if (!arity && fin) arity = fallback;
  return statesem::parse_predicate(text, arity);
}

const char* kind_name(statesem::Verdict::Kind k) {
  switch (k) {
    case statesem::Verdict::Kind::True: return "true";
    case statesem::Verdict::Kind::False: return "false";
    case statesem::Verdict::Kind::Diverges: return "diverges";
    case statesem::Verdict::Kind::Unknown: break;
  }
  return "unknown";
}

py::dict run(const std::string& program, const Values& args, std::uint64_t fuel) {
  auto p = urm::parse_program(program);
  auto out = urm::run(p, args, fuel);
  py::dict d;
  if (auto* h = std::get_if<urm::Halted>(&out)) {
    d["halted"] = true;
    d["registers"] = h->regs;
    d["steps"] = h->steps;
  } else {
    const auto& o = std::get<urm::OutOfFuel>(out);
    d["halted"] = false;
    d["registers"] = o.last.regs;
    d["steps"] = o.steps;
    d["pc"] = o.last.pc;
  }
  return d;
}

py::dict collect(const std::string& graph, const Values& input, std::uint64_t fuel,
                 bool zero_pad, bool accelerate) {
  auto g = cfg::parse_bacfg(graph);
  auto r = cfg::collect(g, input, options(fuel, zero_pad, accelerate));
  py::dict states;
  for (cfg::NodeId v = 0; v < g.node_count(); ++v) {
    states[py::str(g.name(v))] = cfg::to_string(r.states[v]);
  }
  py::dict d;
  d["exact"] = r.exact;
  d["iterations"] = r.iterations;
  d["states"] = states;
  return d;
}

py::dict check(const std::string& graph, const std::string& pred, const Values& input,
               std::optional<std::size_t> arity, std::uint64_t fuel, bool zero_pad,
               bool accelerate) {
  auto g = cfg::parse_bacfg(graph);
  auto q = predicate(pred, arity, input.size());
  auto v = statesem::eval_q(g, q, input, options(fuel, zero_pad, accelerate));
  py::dict d;
  d["predicate"] = statesem::to_string(q);
  d["verdict"] = kind_name(v.kind);
  d["exact"] = v.exact;
  return d;
}

py::dict karr_analyze(const std::string& graph, const Values& input, bool free_pad) {
  auto g = cfg::parse_bacfg(graph);
  auto pad = free_pad ? cfg::Padding::Free : cfg::Padding::Zero;
  auto map = karr::analyze(g, karr::initial_space(g, input, pad));
  py::dict spaces;
  for (cfg::NodeId v = 0; v < g.node_count(); ++v) {
    spaces[py::str(g.name(v))] = karr::to_string(map.spaces[v]);
  }
  py::dict d;
  d["spaces"] = spaces;
  d["updates"] = map.updates;
  return d;
}

py::dict karr_verify(const std::string& graph, const std::string& pred, const Values& input,
                     bool free_pad) {
  auto g = cfg::parse_bacfg(graph);
  auto q = statesem::parse_predicate(pred);
  const auto* aff = std::get_if<statesem::Aff>(&q);
  if (!aff) throw ContractError("verify takes an affine predicate");
  auto pad = free_pad ? cfg::Padding::Free : cfg::Padding::Zero;
  auto r = karr::verify(g, karr::initial_space(g, input, pad), *aff);
  py::dict d;
  d["proved"] = r.proved;
  d["vacuous"] = r.vacuous;
  d["end"] = karr::to_string(r.end);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "URM and BACFG workbench core";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ContractError>(m, "ContractError", PyExc_ValueError);
  py::register_exception<urmflow::OverflowError>(m, "OverflowError", PyExc_OverflowError);
  (void)error;

  m.def("run", &run, py::arg("program"), py::arg("args"), py::arg("fuel") = 10'000,
        "Run a URM program; returns halted, registers, steps (and pc when out of fuel).");
  m.def(
      "eval_phi",
      [](const std::string& program, std::size_t arity, const Values& args, std::uint64_t fuel) {
        return urm::eval_phi(urm::parse_program(program), arity, args, fuel);
      },
      py::arg("program"), py::arg("arity"), py::arg("args"), py::arg("fuel") = 10'000,
      "phi_P^(n)(args) within fuel, or None.");
  m.def(
      "step_count",
      [](const std::string& program, const Values& args, std::uint64_t fuel) {
        return urm::step_count(urm::parse_program(program), args, fuel);
      },
      py::arg("program"), py::arg("args"), py::arg("fuel") = 10'000);
  m.def(
      "pair", [](const py::int_& x, const py::int_& y) {
        return to_int(goedel::pair(to_natural(x), to_natural(y)));
      },
      py::arg("x"), py::arg("y"));
  m.def(
      "unpair", [](const py::int_& z) {
        auto [x, y] = goedel::unpair(to_natural(z));
        return py::make_tuple(to_int(x), to_int(y));
      },
      py::arg("z"));
  m.def(
      "encode", [](const std::string& program) {
        return to_int(goedel::encode_program(urm::parse_program(program)));
      },
      py::arg("program"), "Goedel number of a program.");
  m.def(
      "decode", [](const py::int_& code) {
        return urm::to_text(goedel::decode_program(to_natural(code)));
      },
      py::arg("code"), "Program text for a Goedel number.");
  m.def(
      "smn", [](const std::string& program, std::size_t count, const Values& fixed) {
        return urm::to_text(goedel::smn_specialize(urm::parse_program(program), count, fixed));
      },
      py::arg("program"), py::arg("m"), py::arg("fixed"),
      "Specialize the first m arguments to `fixed`.");
  m.def(
      "compile", [](const std::string& program) {
        auto t = tau::compile(urm::parse_program(program));
        return py::make_tuple(cfg::to_text(t.graph), tau::meta_to_text(t.meta));
      },
      py::arg("program"), "Compile to a BACFG; returns (graph text, meta text).");
  m.def(
      "to_dot", [](const std::string& graph) { return cfg::to_dot(cfg::parse_bacfg(graph)); },
      py::arg("graph"));
  m.def("collect", &collect, py::arg("graph"), py::arg("input"), py::arg("fuel") = 10'000,
        py::arg("zero_pad") = false, py::arg("accelerate") = false,
        "Collecting semantics per node, rendered as text.");
  m.def("check", &check, py::arg("graph"), py::arg("predicate"), py::arg("input"),
        py::arg("arity") = py::none(), py::arg("fuel") = 10'000, py::arg("zero_pad") = false,
        py::arg("accelerate") = false, "State-semantics verdict of a predicate at the end node.");
  m.def("karr", &karr_analyze, py::arg("graph"), py::arg("input"), py::arg("free_pad") = false,
        "Affine-equality invariants per node.");
  m.def("verify", &karr_verify, py::arg("graph"), py::arg("predicate"), py::arg("input"),
        py::arg("free_pad") = false, "Try to prove an affine predicate at the end node.");
}
