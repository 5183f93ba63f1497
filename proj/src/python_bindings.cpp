// metachain._core: graphs plus the JSON-report operations of the CLI.
// Reports cross the boundary as JSON text; the Python package decodes them.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "metachain/algorithm1.hpp"
#include "metachain/algorithm2.hpp"
#include "metachain/commands.hpp"
#include "metachain/contraction.hpp"
#include "metachain/dot.hpp"
#include "metachain/errors.hpp"
#include "metachain/io.hpp"
#include "metachain/kinesin.hpp"
#include "metachain/oracle.hpp"
#include "metachain/pool.hpp"
#include "metachain/report.hpp"

namespace py = pybind11;
using namespace metachain;

namespace {

using Release = py::call_guard<py::gil_scoped_release>;

ChainGraph make_graph(std::vector<std::string> states,
                      const std::vector<std::tuple<std::string, std::string, std::string, std::optional<double>>>& arcs) {
  std::vector<ArcSpec> specs;
  for (const auto& [from, to, u, kappa] : arcs) specs.push_back({from, to, Rational::parse(u), kappa});
  return ChainGraph::create(std::move(states), specs);
}

py::list arc_list(const ChainGraph& g) {
  py::list out;
  for (const auto& a : g.arcs()) {
    py::object kappa = a.kappa ? py::object(py::float_(*a.kappa)) : py::object(py::none());
    out.append(py::make_tuple(g.state_name(a.tail), g.state_name(a.head), a.U.str(), kappa));
  }
  return out;
}

std::optional<InputFormat> format_of(const std::optional<std::string>& name) {
  if (!name) return std::nullopt;
  auto f = parse_format_name(*name);
  if (!f) throw ParseError("unknown format '" + *name + "' (expected json or tsv)");
  return f;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native core of metachain";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", error.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", error.ptr());
  py::register_exception<InvariantViolation>(m, "InvariantViolation", error.ptr());
  py::register_exception<CapExceeded>(m, "CapExceeded", error.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", error.ptr());

  py::class_<ChainGraph>(m, "Graph")
      .def(py::init(&make_graph), py::arg("states"), py::arg("arcs"),
           "arcs: (from, to, U as text, kappa or None) tuples")
      .def_static("from_json", [](const std::string& text) { return parse_json(text); })
      .def_static("from_tsv", [](const std::string& text) { return parse_tsv(text); })
      .def_static("load", [](const std::filesystem::path& p, std::optional<std::string> fmt) { return load_graph(p, format_of(fmt)); },
                  py::arg("path"), py::arg("format") = py::none())
      .def_property_readonly("n", &ChainGraph::n)
      .def_property_readonly("states", &ChainGraph::states)
      .def_property_readonly("arcs", &arc_list)
      .def_property_readonly("has_prefactors", &ChainGraph::has_prefactors)
      .def("to_json", &to_json_text)
      .def("to_tsv", &to_tsv_text)
      .def("__repr__", [](const ChainGraph& g) {
        return "<metachain.Graph n=" + std::to_string(g.n()) + " arcs=" + std::to_string(g.arc_count()) + ">";
      });

  m.def("set_threads", &set_worker_threads, py::arg("count"), "0 means one per hardware thread");

  m.def("updated_exit_weight",
        [](const std::string& u, const std::string& mu, const std::string& last) {
          return updated_exit_weight(Rational::parse(u), Rational::parse(mu), Rational::parse(last)).str();
        },
        py::arg("u"), py::arg("u_min_tail"), py::arg("gamma_last"));

  m.def("validate", [](const ChainGraph& g) { return dump_report(validation_json(g, validate(g))); }, py::arg("graph"), Release());

  m.def("alg1",
        [](const ChainGraph& g, const std::string& stop, const std::string& tie) {
          Alg1Report r = run_algorithm1(g, Alg1Options{parse_alg1_stop(stop), parse_tie_break(tie)});
          check_alg1_invariants(g, r);
          return dump_report(alg1_json(g, r));
        },
        py::arg("graph"), py::arg("stop") = "bucket-empty", py::arg("tie_break") = "lex", Release());

  m.def("alg2",
        [](const ChainGraph& g, const std::string& stop) {
          Alg2Report r = run_algorithm2(g, parse_alg2_stop(g, stop));
          check_alg2_invariants(g, r);
          return dump_report(alg2_json(g, r));
        },
        py::arg("graph"), py::arg("stop") = "bucket-empty", Release());

  m.def("wgraphs",
        [](const ChainGraph& g, const std::string& tie) {
          return dump_report(wgraphs_json(g, run_algorithm1(g, Alg1Options{{}, parse_tie_break(tie)})));
        },
        py::arg("graph"), py::arg("tie_break") = "lex", Release());

  m.def("eigs",
        [](const ChainGraph& g, const std::vector<double>& eps, const std::string& tie) {
          return dump_report(eigs_json(g, run_algorithm1(g, Alg1Options{{}, parse_tie_break(tie)}), eps));
        },
        py::arg("graph"), py::arg("epsilons"), py::arg("tie_break") = "lex", Release());

  m.def("oracle",
        [](const ChainGraph& g, const std::vector<double>& eps, std::size_t cap) {
          OracleOptions opts;
          opts.epsilons = eps;
          opts.cap = cap;
          return dump_report(oracle_json(g, run_oracle(g, opts)));
        },
        py::arg("graph"), py::arg("epsilons") = std::vector<double>{0.1, 0.05, 0.025},
        py::arg("cap") = kDefaultEnumerationCap, Release());

  m.def("compare",
        [](const ChainGraph& g, const std::string& tie) { return dump_report(comparison_json(g, compare_alg1_alg2(g, parse_tie_break(tie)))); },
        py::arg("graph"), py::arg("tie_break") = "lex", Release());

  m.def("kmc",
        [](const ChainGraph& g, double eps, std::uint64_t seed, std::size_t count, std::optional<std::string> h,
           std::optional<std::string> start) {
          KmcRequest req;
          req.epsilon = eps;
          req.seed = seed;
          req.trajectories = count;
          if (h) req.horizon_exponent = Rational::parse(*h);
          req.start = start;
          return dump_report(run_kmc(g, req).report);
        },
        py::arg("graph"), py::arg("epsilon") = 0.2, py::arg("seed") = 1, py::arg("trajectories") = 1000,
        py::arg("horizon_exponent") = py::none(), py::arg("start") = py::none(), Release());

  m.def("kinesin_sweep",
        [](const std::string& grid, bool bisect) { return dump_report(sweep_json(kinesin_sweep(parse_grid(grid), bisect))); },
        py::arg("grid") = "0.25:10.25:0.5", py::arg("bisect") = false, Release());

  m.def("kinesin_graph", [](const std::string& zeta) {
    KinesinParams p;
    p.zeta = Rational::parse(zeta);
    return build_kinesin(p);
  }, py::arg("zeta") = "7");

  m.def("export_dot",
        [](const ChainGraph& g, const std::string& tgraph, std::size_t step, const std::string& stop, const std::string& tie) {
          DotStyle style;
          if (tgraph == "alg1") {
            style = alg1_dot_style(run_algorithm1(g, Alg1Options{parse_alg1_stop(stop), parse_tie_break(tie)}), step);
          } else if (tgraph == "alg2") {
            style = alg2_dot_style(run_algorithm2(g, parse_alg2_stop(g, stop)), step);
          } else if (tgraph != "none") {
            throw ParseError("unknown tgraph '" + tgraph + "' (expected none, alg1 or alg2)");
          }
          return export_dot(g, style);
        },
        py::arg("graph"), py::arg("tgraph") = "none", py::arg("step") = 0, py::arg("stop") = "bucket-empty",
        py::arg("tie_break") = "lex", Release());
}
