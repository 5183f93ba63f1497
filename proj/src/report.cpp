#include "metachain/report.hpp"

#include <cmath>

#include "metachain/contraction.hpp"
#include "metachain/pool.hpp"

namespace metachain {
namespace {

Json exact(const Rational& r) { return r.decimal_str(); }

Json names(const ChainGraph& g, const std::vector<StateIndex>& states) {
  Json out = Json::array();
  for (StateIndex s : states) out.push_back(g.state_name(s));
  return out;
}

Json name_sets(const ChainGraph& g, const std::vector<std::vector<StateIndex>>& sets) {
  Json out = Json::array();
  for (const auto& s : sets) out.push_back(names(g, s));
  return out;
}

Json header(const char* kind) {
  Json doc;
  doc["schema"] = kReportSchema;
  doc["kind"] = kind;
  return doc;
}

Json arc_ref(const ChainGraph& g, ArcIndex a) {
  const Arc& arc = g.arc(a);
  Json j;
  j["from"] = g.state_name(arc.tail);
  j["to"] = g.state_name(arc.head);
  j["U"] = exact(arc.U);
  return j;
}

Json exits_json(const ChainGraph& g, const std::vector<ExitArc>& exits) {
  Json out = Json::array();
  for (const ExitArc& e : exits) {
    Json j = arc_ref(g, e.arc);
    j["weight"] = exact(e.weight);
    j["weight_float"] = e.weight.to_double();
    j["kappa"] = e.kappa;
    out.push_back(std::move(j));
  }
  return out;
}

Json optional_exact(const std::optional<Rational>& r) { return r ? exact(*r) : Json(nullptr); }

Json rationals(const std::vector<Rational>& v) {
  Json out = Json::array();
  for (const auto& r : v) out.push_back(exact(r));
  return out;
}

Json floats(const std::vector<Rational>& v) {
  Json out = Json::array();
  for (const auto& r : v) out.push_back(r.to_double());
  return out;
}

}  // namespace

Json validation_json(const ChainGraph& g, const ValidationReport& v) {
  Json doc = header("validate");
  doc["n"] = v.n;
  doc["arcs"] = g.arc_count();
  doc["states"] = g.states();
  doc["scc_partition"] = name_sets(g, v.scc_partition);
  doc["closed_classes"] = name_sets(g, v.closed_classes);
  doc["irreducible"] = v.is_irreducible;
  doc["unique_closed_class"] = v.satisfies_a2;
  doc["prefactors"] = g.has_prefactors();
  return doc;
}

Json tgraph_json(const ChainGraph& g, const TGraph& t) {
  Json doc;
  Json arcs = Json::array();
  for (const TArc& a : t.arcs) {
    Json j = arc_ref(g, a.arc);
    j["step"] = a.step;
    j["weight"] = exact(a.weight);
    arcs.push_back(std::move(j));
  }
  doc["arcs"] = std::move(arcs);
  doc["threshold"] = optional_exact(t.threshold);
  doc["closed_classes"] = name_sets(g, t.closed_classes());
  doc["absorbing"] = names(g, t.absorbing_states());
  doc["transient"] = names(g, t.transient_states());
  return doc;
}

Json alg1_json(const ChainGraph& g, const Alg1Report& r) {
  Json doc = header("alg1");
  doc["n"] = r.n;
  doc["states"] = g.states();
  doc["K"] = r.K();
  doc["cycle_count"] = r.cycle_count();
  doc["gamma"] = rationals(r.gamma);
  doc["gamma_float"] = floats(r.gamma);
  doc["stop_reason"] = r.stop_reason;
  doc["prefactors_defaulted"] = r.prefactors_defaulted;
  doc["symmetry"] = r.symmetry;
  if (r.first_symmetry) {
    doc["first_symmetry"] = {{"step", r.first_symmetry->step}, {"detail", r.first_symmetry->detail}};
  } else {
    doc["first_symmetry"] = nullptr;
  }

  Json transfers = Json::array();
  for (std::size_t i = 0; i < r.transfers.size(); ++i) {
    const TArc& a = r.transfers[i];
    Json j = arc_ref(g, a.arc);
    j["step"] = a.step;
    j["weight"] = exact(a.weight);
    j["kappa"] = a.kappa;
    const TransferOwner& o = r.owners[i];
    j["owner"] = o.cycle ? Json{{"cycle", *o.cycle + 1}} : Json{{"state", g.state_name(o.state)}};
    transfers.push_back(std::move(j));
  }
  doc["transfers"] = std::move(transfers);

  Json eig = Json::array();
  for (const EigenStep& e : r.eigen_steps) {
    eig.push_back({{"m", e.m},
                   {"step", e.k},
                   {"delta", exact(e.delta)},
                   {"delta_float", e.delta.to_double()},
                   {"alpha", e.alpha},
                   {"s_star", g.state_name(e.s_star)},
                   {"z_star", g.state_name(e.z_star)}});
  }
  doc["eigen_steps"] = std::move(eig);
  auto s0 = r.s0();
  doc["s0"] = s0 ? Json(g.state_name(*s0)) : Json(nullptr);

  Json cycles = Json::array();
  for (std::size_t c = 0; c < r.cycles.size(); ++c) {
    const CycleRecord& rec = r.cycles[c];
    Json j;
    j["id"] = c + 1;
    j["step"] = rec.step;
    j["states"] = names(g, rec.states);
    j["name"] = super_vertex_name(g, rec.states);
    Json children = Json::array();
    for (std::size_t ch : rec.children) children.push_back(ch + 1);
    j["child_cycles"] = std::move(children);
    j["child_states"] = names(g, rec.child_states);
    j["birth"] = exact(rec.birth);
    j["exit"] = optional_exact(rec.exit);
    j["exit_arc"] = rec.exit_arc ? arc_ref(g, *rec.exit_arc) : Json(nullptr);
    j["exits"] = exits_json(g, rec.exits);
    j["main_state"] = g.state_name(rec.main_state);
    j["parent"] = rec.parent ? Json(*rec.parent + 1) : Json(nullptr);
    cycles.push_back(std::move(j));
  }
  doc["cycles"] = std::move(cycles);
  doc["final_tgraph"] = tgraph_json(g, r.tgraph(r.K()));
  return doc;
}

Json alg2_json(const ChainGraph& g, const Alg2Report& r) {
  Json doc = header("alg2");
  doc["n"] = r.n;
  doc["states"] = g.states();
  doc["P"] = r.P();
  doc["theta"] = rationals(r.theta);
  doc["theta_float"] = floats(r.theta);
  doc["multiplicity"] = r.multiplicity;
  doc["stop_reason"] = r.stop_reason;
  doc["prefactors_ignored"] = r.prefactors_ignored;
  doc["transient"] = names(g, r.transient_states);

  Json steps = Json::array();
  for (std::size_t p = 1; p <= r.P(); ++p) {
    Json j = tgraph_json(g, r.tgraph(p));
    j["step"] = p;
    j["theta"] = exact(r.theta[p - 1]);
    steps.push_back(std::move(j));
  }
  doc["tgraphs"] = std::move(steps);

  Json classes = Json::array();
  for (std::size_t c = 0; c < r.classes.size(); ++c) {
    const ClassRecord& rec = r.classes[c];
    Json j;
    j["id"] = c + 1;
    j["step"] = rec.step;
    j["theta"] = exact(rec.theta);
    j["states"] = names(g, rec.states);
    j["name"] = super_vertex_name(g, rec.states);
    Json children = Json::array();
    for (std::size_t ch : rec.children) children.push_back(ch + 1);
    j["child_classes"] = std::move(children);
    j["child_states"] = names(g, rec.child_states);
    j["exit"] = optional_exact(rec.exit);
    Json min_exits = Json::array();
    for (ArcIndex a : rec.exit_arcs) min_exits.push_back(arc_ref(g, a));
    j["exit_arcs"] = std::move(min_exits);
    j["exits"] = exits_json(g, rec.exits);
    j["parent"] = rec.parent ? Json(*rec.parent + 1) : Json(nullptr);
    classes.push_back(std::move(j));
  }
  doc["classes"] = std::move(classes);
  return doc;
}

Json wgraph_json(const ChainGraph& g, const WGraph& w) {
  Json j;
  j["m"] = w.m();
  j["sinks"] = names(g, w.sinks);
  Json arcs = Json::array();
  for (ArcIndex a : w.arcs) arcs.push_back(arc_ref(g, a));
  j["arcs"] = std::move(arcs);
  j["V"] = exact(w.V);
  j["V_float"] = w.V.to_double();
  return j;
}

Json wgraphs_json(const ChainGraph& g, const Alg1Report& r) {
  Json doc = header("wgraphs");
  doc["states"] = g.states();
  const std::size_t n = g.n();
  std::vector<WGraph> w(n + 1);
  for (std::size_t m = 1; m < n; ++m) w[m] = extract_wgraph(g, r, m);
  w[n] = make_wgraph(g, {});
  Json list = Json::array();
  for (std::size_t m = 1; m <= n; ++m) {
    Json j = wgraph_json(g, w[m]);
    if (m < n) {
      WeakNestedCheck c = check_weak_nested(g, w[m + 1], w[m]);
      j["nested"] = {{"one_sink_lost", c.one_sink_lost},
                     {"outside_unchanged", c.outside_unchanged},
                     {"single_exit", c.single_exit},
                     {"holds", c.holds()},
                     {"lost_sink", c.lost_sink ? Json(g.state_name(*c.lost_sink)) : Json(nullptr)},
                     {"exit_arc", c.exit_arc ? arc_ref(g, *c.exit_arc) : Json(nullptr)}};
      j["delta"] = exact(w[m].V - w[m + 1].V);
    }
    list.push_back(std::move(j));
  }
  doc["wgraphs"] = std::move(list);
  return doc;
}

Json eigs_json(const ChainGraph& g, const Alg1Report& r, const std::vector<double>& epsilons) {
  Json doc = header("eigs");
  doc["states"] = g.states();
  doc["prefactors_defaulted"] = r.prefactors_defaulted;
  Json runs = Json::array();
  // Estimates first: they reject symmetric or stopped runs before any
  // extended-precision work starts.
  std::vector<SpectralEstimate> estimates;
  for (double eps : epsilons) estimates.push_back(eigenvalue_estimates(r, eps));
  auto rates = parallel_map<DecayRates>(epsilons.size(), [&](std::size_t i) { return decay_rates(g, epsilons[i]); });
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    const double eps = epsilons[i];
    const SpectralEstimate& est = estimates[i];
    const DecayRates& num = rates[i];
    Json rows = Json::array();
    for (const EigenEstimate& e : est.entries) {
      double log_num = num.log_lambda.at(e.m - 1);
      rows.push_back({{"m", e.m},
                      {"delta", exact(e.delta)},
                      {"alpha", e.alpha},
                      {"log_lambda_estimate", e.log_lambda},
                      {"log_lambda_numerical", log_num},
                      {"mu_numerical", num.mu.at(e.m - 1)},
                      {"scaled_error", std::abs(eps * log_num + e.delta.to_double())},
                      {"log_ratio", log_num - e.log_lambda}});
    }
    runs.push_back({{"epsilon", eps}, {"alpha_order_one", est.alpha_order_one}, {"eigenvalues", std::move(rows)}});
  }
  doc["runs"] = std::move(runs);
  return doc;
}

Json oracle_json(const ChainGraph& g, const OracleReport& o) {
  Json doc = header("oracle");
  doc["states"] = g.states();
  doc["symmetry"] = o.symmetry;
  doc["ok"] = o.ok();
  doc["notes"] = o.notes;
  Json levels = Json::array();
  for (const OracleLevel& l : o.levels) {
    Json j;
    j["m"] = l.m;
    j["V"] = exact(l.V);
    j["delta_enumerated"] = exact(l.delta_enumerated);
    j["delta_alg1"] = optional_exact(l.delta_alg1);
    j["minimizers"] = l.minimizers;
    j["visited"] = l.visited;
    j["extracted_matches"] = l.extracted_matches ? Json(*l.extracted_matches) : Json(nullptr);
    j["weak_nested"] = l.nested ? Json(l.nested->holds()) : Json(nullptr);
    j["ok"] = l.ok();
    levels.push_back(std::move(j));
  }
  doc["levels"] = std::move(levels);
  Json cp = Json::array();
  for (const auto& [eps, c] : o.charpoly) {
    cp.push_back({{"epsilon", eps},
                  {"from_matrix", c.from_matrix},
                  {"from_wgraphs", c.from_wgraphs},
                  {"max_relative_residual", c.max_relative_residual},
                  {"constant_term", c.constant_term}});
  }
  doc["charpoly"] = std::move(cp);
  Json sp = Json::array();
  for (const SpectralRow& s : o.spectral) {
    sp.push_back({{"epsilon", s.epsilon},
                  {"m", s.m},
                  {"delta", exact(s.delta)},
                  {"alpha", s.alpha},
                  {"log_lambda_numerical", s.log_lambda},
                  {"log_lambda_estimate", s.estimate},
                  {"scaled_error", s.scaled_error},
                  {"log_ratio", s.log_ratio}});
  }
  doc["spectral"] = std::move(sp);
  return doc;
}

Json comparison_json(const ChainGraph& g, const ComparisonReport& c) {
  Json doc = header("compare");
  doc["states"] = g.states();
  doc["exponents_match"] = c.exponents_match;
  doc["arcs_nested"] = c.arcs_nested;
  doc["closed_classes_match"] = c.closed_classes_match;
  doc["absorbing_match"] = c.absorbing_match;
  doc["ok"] = c.ok();
  doc["failures"] = c.failures;
  doc["gamma"] = rationals(c.alg1.gamma);
  doc["theta"] = rationals(c.alg2.theta);
  doc["symmetry"] = c.alg1.symmetry;
  return doc;
}

Json sweep_json(const SweepResult& s) {
  Json doc = header("kinesin-sweep");
  doc["states"] = s.states;
  doc["bisected"] = s.bisected;
  auto label = [&](const std::pair<StateIndex, StateIndex>& a) { return s.states[a.first] + "->" + s.states[a.second]; };
  Json bounds = Json::array();
  for (const SweepBoundary& b : s.boundaries) {
    bounds.push_back({{"lo", exact(b.lo)}, {"hi", exact(b.hi)}, {"value", optional_exact(b.value)}});
  }
  doc["boundaries"] = std::move(bounds);
  Json intervals = Json::array();
  for (const SweepInterval& iv : s.intervals) {
    Json j;
    j["lower"] = optional_exact(iv.lower);
    j["upper"] = optional_exact(iv.upper);
    Json arcs = Json::array();
    for (const auto& a : iv.final_arcs) arcs.push_back(label(a));
    j["final_arcs"] = std::move(arcs);
    Json steps = Json::array();
    for (const auto& t : iv.hierarchy) {
      Json step = Json::array();
      for (const auto& a : t) step.push_back(label(a));
      steps.push_back(std::move(step));
    }
    j["tgraphs"] = std::move(steps);
    Json classes = Json::array();
    for (const auto& c : iv.closed_classes) {
      Json cls = Json::array();
      for (StateIndex st : c) cls.push_back(s.states[st]);
      classes.push_back(std::move(cls));
    }
    j["closed_classes"] = std::move(classes);
    Json transient = Json::array();
    for (StateIndex st : iv.transient) transient.push_back(s.states[st]);
    j["transient"] = std::move(transient);
    Json samples = Json::array();
    for (const SweepSample& x : iv.samples) samples.push_back({{"zeta", exact(x.zeta)}, {"theta", exact(x.theta)}});
    j["samples"] = std::move(samples);
    j["slowest_exponent"] = {{"law", iv.slowest.str()},
                             {"constant", exact(iv.slowest.constant)},
                             {"slope", iv.slowest.slope ? exact(*iv.slowest.slope) : Json(nullptr)},
                             {"consistent", iv.slowest.consistent}};
    j["forward_ring"] = iv.forward_ring;
    intervals.push_back(std::move(j));
  }
  doc["intervals"] = std::move(intervals);
  return doc;
}

Json census_json(const ChainGraph& g, const TransitionCensus& c, const CoverageReport* coverage) {
  Json doc = header("kmc");
  doc["states"] = g.states();
  doc["epsilon"] = c.epsilon;
  doc["window"] = {{"lo", c.window.lo}, {"hi", c.window.hi}};
  doc["seed"] = c.seed;
  doc["generator"] = c.generator;
  doc["trajectories"] = c.trajectories;
  doc["truncated"] = c.truncated;
  doc["total_jumps"] = c.total();
  Json arcs = Json::array();
  const double total = static_cast<double>(c.total());
  for (ArcIndex a = 0; a < g.arc_count(); ++a) {
    Json j = arc_ref(g, a);
    j["count"] = c.counts[a];
    j["frequency"] = total > 0 ? static_cast<double>(c.counts[a]) / total : 0.0;
    arcs.push_back(std::move(j));
  }
  doc["arcs"] = std::move(arcs);
  if (coverage) {
    doc["coverage"] = {{"on_tgraph", coverage->on_tgraph}, {"total", coverage->total}, {"fraction", coverage->coverage}};
  }
  return doc;
}

std::string dump_report(const Json& doc) { return doc.dump(2) + "\n"; }

}  // namespace metachain
