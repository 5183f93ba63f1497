// metachain command-line front end. Every subcommand writes one JSON
// document (or DOT text) to --out, or to stdout.
//
// Exit codes: 0 success, 1 bad input (parse, validation, caps, numerics),
// 2 an internal invariant failed.
#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "metachain/algorithm1.hpp"
#include "metachain/algorithm2.hpp"
#include "metachain/commands.hpp"
#include "metachain/dot.hpp"
#include "metachain/errors.hpp"
#include "metachain/io.hpp"
#include "metachain/kinesin.hpp"
#include "metachain/kmc.hpp"
#include "metachain/oracle.hpp"
#include "metachain/pool.hpp"
#include "metachain/report.hpp"
#include "metachain/spectral.hpp"

using namespace metachain;

namespace {

struct Options {
  std::string input;
  std::string format;
  std::string out;
  std::vector<double> epsilons;
  std::string stop = "bucket-empty";
  std::string tie_break = "lex";
  std::uint64_t seed = 1;
  std::size_t oracle_cap = kDefaultEnumerationCap;
  std::string grid = "0.25:10.25:0.5";
  bool bisect = false;
  std::size_t trajectories = 1000;
  std::string horizon_exponent;
  std::string start;
  std::string csv;
  std::string dot_tgraph = "none";
  std::size_t dot_step = 0;
};

ChainGraph load(const Options& o) {
  if (o.input.empty()) throw ValidationError("--input is required for this subcommand");
  std::optional<InputFormat> fmt;
  if (!o.format.empty()) {
    fmt = parse_format_name(o.format);
    if (!fmt) throw ParseError("unknown format '" + o.format + "' (expected json or tsv)");
  }
  return load_graph(o.input, fmt);
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
  } else {
    write_text_file(o.out, text);
  }
}

std::vector<double> epsilons_or(const Options& o, std::vector<double> fallback) {
  const auto& eps = o.epsilons.empty() ? fallback : o.epsilons;
  for (double e : eps) {
    if (!(e > 0.0) || !std::isfinite(e)) throw ValidationError("epsilon must be positive, got " + std::to_string(e));
  }
  return eps;
}

int cmd_validate(const Options& o) {
  ChainGraph g = load(o);
  emit(o, dump_report(validation_json(g, validate(g))));
  return 0;
}

int cmd_alg1(const Options& o) {
  ChainGraph g = load(o);
  Alg1Report r = run_algorithm1(g, Alg1Options{parse_alg1_stop(o.stop), parse_tie_break(o.tie_break)});
  check_alg1_invariants(g, r);
  emit(o, dump_report(alg1_json(g, r)));
  return 0;
}

int cmd_alg2(const Options& o) {
  ChainGraph g = load(o);
  Alg2Report r = run_algorithm2(g, parse_alg2_stop(g, o.stop));
  check_alg2_invariants(g, r);
  emit(o, dump_report(alg2_json(g, r)));
  return 0;
}

int cmd_wgraphs(const Options& o) {
  ChainGraph g = load(o);
  Alg1Report r = run_algorithm1(g, Alg1Options{{}, parse_tie_break(o.tie_break)});
  emit(o, dump_report(wgraphs_json(g, r)));
  return 0;
}

int cmd_eigs(const Options& o) {
  ChainGraph g = load(o);
  Alg1Report r = run_algorithm1(g, Alg1Options{{}, parse_tie_break(o.tie_break)});
  emit(o, dump_report(eigs_json(g, r, epsilons_or(o, {0.1}))));
  return 0;
}

int cmd_oracle(const Options& o) {
  ChainGraph g = load(o);
  OracleOptions opts;
  opts.epsilons = epsilons_or(o, {0.1, 0.05, 0.025});
  opts.cap = o.oracle_cap;
  OracleReport rep = run_oracle(g, opts);
  emit(o, dump_report(oracle_json(g, rep)));
  return rep.ok() ? 0 : 2;
}

int cmd_compare(const Options& o) {
  ChainGraph g = load(o);
  ComparisonReport c = compare_alg1_alg2(g, parse_tie_break(o.tie_break));
  emit(o, dump_report(comparison_json(g, c)));
  return c.ok() ? 0 : 2;
}

int cmd_kmc(const Options& o) {
  ChainGraph g = load(o);
  KmcRequest req;
  req.epsilon = epsilons_or(o, {0.2}).front();
  req.seed = o.seed;
  req.trajectories = o.trajectories;
  if (!o.horizon_exponent.empty()) req.horizon_exponent = Rational::parse(o.horizon_exponent);
  if (!o.start.empty()) req.start = o.start;
  KmcOutcome k = run_kmc(g, req);
  if (!o.csv.empty()) write_text_file(o.csv, census_csv(g, k.census));
  emit(o, dump_report(k.report));
  return 0;
}

int cmd_kinesin_sweep(const Options& o) {
  SweepResult s = kinesin_sweep(parse_grid(o.grid), o.bisect);
  emit(o, dump_report(sweep_json(s)));
  return 0;
}

int cmd_export_dot(const Options& o) {
  ChainGraph g = load(o);
  DotStyle style;
  if (o.dot_tgraph == "alg1") {
    style = alg1_dot_style(run_algorithm1(g, Alg1Options{parse_alg1_stop(o.stop), parse_tie_break(o.tie_break)}), o.dot_step);
  } else if (o.dot_tgraph == "alg2") {
    style = alg2_dot_style(run_algorithm2(g, parse_alg2_stop(g, o.stop)), o.dot_step);
  } else if (o.dot_tgraph != "none") {
    throw ParseError("unknown --tgraph '" + o.dot_tgraph + "' (expected none, alg1 or alg2)");
  }
  emit(o, export_dot(g, style));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Metastable Markov chain analysis: T-graphs, W-graphs, spectra and simulation"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  std::size_t threads = 0;
  app.add_option("--threads", threads, "worker threads for sweeps and repeated eigensolves (default: all cores)");

  auto add_io = [&](CLI::App* sub, bool input) {
    if (input) {
      sub->add_option("--input,-i", o.input, "graph file (.json or .tsv)")->required();
      sub->add_option("--format", o.format, "json or tsv (default: by extension)");
    }
    sub->add_option("--out,-o", o.out, "output file (default: stdout)");
  };
  auto add_tie = [&](CLI::App* sub) { sub->add_option("--tie-break", o.tie_break, "lex or reverse"); };
  auto add_eps = [&](CLI::App* sub) { sub->add_option("--epsilon,-e", o.epsilons, "epsilon; repeatable")->take_all(); };

  std::vector<std::pair<CLI::App*, int (*)(const Options&)>> subs;
  auto sub = [&](const char* name, const char* help, int (*fn)(const Options&)) {
    CLI::App* s = app.add_subcommand(name, help);
    subs.emplace_back(s, fn);
    return s;
  };

  auto* validate_cmd = sub("validate", "check a graph and report its communicating classes", cmd_validate);
  add_io(validate_cmd, true);

  auto* alg1 = sub("alg1", "hierarchy of cycles (one arc per step)", cmd_alg1);
  add_io(alg1, true);
  add_tie(alg1);
  alg1->add_option("--stop", o.stop, "bucket-empty, bucket-size-one or threshold:<U>");

  auto* alg2 = sub("alg2", "closed classes (all minimal arcs per step)", cmd_alg2);
  add_io(alg2, true);
  alg2->add_option("--stop", o.stop, "bucket-empty or covering:a,b/c,d");

  auto* wg = sub("wgraphs", "optimal W-graphs extracted from the run", cmd_wgraphs);
  add_io(wg, true);
  add_tie(wg);

  auto* eigs = sub("eigs", "eigenvalue estimates against extended-precision spectra", cmd_eigs);
  add_io(eigs, true);
  add_tie(eigs);
  add_eps(eigs);

  auto* oracle = sub("oracle", "enumeration, characteristic polynomial and spectral checks", cmd_oracle);
  add_io(oracle, true);
  add_eps(oracle);
  oracle->add_option("--oracle-cap", o.oracle_cap, "largest n enumerated");

  auto* compare = sub("compare", "check that the two algorithms agree", cmd_compare);
  add_io(compare, true);
  add_tie(compare);

  auto* kmc = sub("kmc", "Gillespie census of transitions against the T-graph", cmd_kmc);
  add_io(kmc, true);
  add_eps(kmc);
  kmc->add_option("--seed", o.seed, "master seed");
  kmc->add_option("--trajectories,-n", o.trajectories, "number of trajectories");
  kmc->add_option("--horizon-exponent", o.horizon_exponent, "window is [0, e^{h/eps}); default: last exponent");
  kmc->add_option("--start", o.start, "initial state (default: drawn per trajectory)");
  kmc->add_option("--csv", o.csv, "also write the census as CSV");

  auto* sweep = sub("kinesin-sweep", "zeta sweep of the built-in kinesin model", cmd_kinesin_sweep);
  add_io(sweep, false);
  sweep->add_option("--grid", o.grid, "a:b:step with exact rationals");
  sweep->add_flag("--bisect", o.bisect, "pin boundaries by exact bisection");

  auto* dot = sub("export-dot", "Graphviz rendering", cmd_export_dot);
  add_io(dot, true);
  add_tie(dot);
  dot->add_option("--tgraph", o.dot_tgraph, "none, alg1 or alg2");
  dot->add_option("--step", o.dot_step, "step of the T-graph (default: last)");
  dot->add_option("--stop", o.stop, "stop rule of the run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  set_worker_threads(threads);

  try {
    for (auto& [cmd, fn] : subs) {
      if (cmd->parsed()) return fn(o);
    }
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violated: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
