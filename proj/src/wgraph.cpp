#include "metachain/wgraph.hpp"

#include <algorithm>
#include <limits>

#include "metachain/errors.hpp"

namespace metachain {
namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

std::vector<std::size_t> successor_arcs(const ChainGraph& g, const WGraph& w) {
  std::vector<std::size_t> out(g.n(), kNone);
  for (ArcIndex a : w.arcs) out[g.arc(a).tail] = a;
  return out;
}

}  // namespace

std::vector<StateIndex> WGraph::basin_of(const ChainGraph& g) const {
  std::vector<std::size_t> succ = successor_arcs(g, *this);
  std::vector<StateIndex> basin(n);
  for (StateIndex s = 0; s < n; ++s) {
    StateIndex v = s;
    for (std::size_t guard = 0; succ[v] != kNone; ++guard) {
      if (guard > n) throw InvariantViolation("W-graph contains a cycle");
      v = g.arc(succ[v]).head;
    }
    basin[s] = v;
  }
  return basin;
}

std::string wgraph_defect(const ChainGraph& g, const WGraph& w) {
  if (w.n != g.n()) return "vertex count differs from the graph";
  std::vector<int> outdeg(g.n(), 0);
  Rational total;
  for (ArcIndex a : w.arcs) {
    if (a >= g.arc_count()) return "arc index out of range";
    ++outdeg[g.arc(a).tail];
    total += g.arc(a).U;
  }
  std::vector<bool> sink(g.n(), false);
  for (StateIndex s : w.sinks) sink[s] = true;
  for (StateIndex s = 0; s < g.n(); ++s) {
    if (sink[s] && outdeg[s] != 0) return "sink " + g.state_name(s) + " has an outgoing arc";
    if (!sink[s] && outdeg[s] != 1) return "state " + g.state_name(s) + " has out-degree " + std::to_string(outdeg[s]);
  }
  if (w.arcs.size() + w.sinks.size() != g.n()) return "arc count is not n - m";
  if (total != w.V) return "stored V differs from the arc sum";
  try {
    (void)w.basin_of(g);
  } catch (const InvariantViolation&) {
    return "contains a cycle";
  }
  return {};
}

WGraph make_wgraph(const ChainGraph& g, std::vector<ArcIndex> arcs) {
  WGraph w;
  w.n = g.n();
  std::sort(arcs.begin(), arcs.end());
  std::vector<bool> has_out(g.n(), false);
  for (ArcIndex a : arcs) {
    has_out[g.arc(a).tail] = true;
    w.V += g.arc(a).U;
  }
  for (StateIndex s = 0; s < g.n(); ++s) {
    if (!has_out[s]) w.sinks.push_back(s);
  }
  w.arcs = std::move(arcs);
  if (auto d = wgraph_defect(g, w); !d.empty()) throw ValidationError("not a W-graph: " + d);
  return w;
}

WGraph extract_wgraph(const ChainGraph& g, const Alg1Report& report, std::size_t m) {
  if (report.symmetry) throw ValidationError("W-graph extraction needs a run without symmetry");
  if (m < 1 || m >= g.n()) throw ValidationError("m must lie in 1..n-1");
  const EigenStep* step = report.eigen_step(m);
  auto s0 = report.s0();
  if (step == nullptr || !s0) throw ValidationError("run stopped before m = 1 was reached");

  std::vector<StateIndex> sinks{*s0};
  for (std::size_t j = 1; j < m; ++j) sinks.push_back(report.eigen_step(j)->s_star);

  // Within each cycle every member keeps its min-arc except the member
  // holding the point the cycle is left from (or drained to, for a sink);
  // the same rule applies recursively inside members. A plain backward
  // trace over T is ambiguous once a vertex carries both its own min-arc
  // and a later exit arc of an enclosing cycle.
  const std::size_t k = step->k;
  std::vector<std::optional<std::size_t>> leaf_mu(g.n());
  std::vector<std::optional<std::size_t>> cycle_mu(report.cycles.size());
  for (std::size_t i = 0; i < k; ++i) {
    const TransferOwner& o = report.owners[i];
    (o.cycle ? cycle_mu[*o.cycle] : leaf_mu[o.state]) = i;
  }

  struct Task {
    std::optional<std::size_t> cycle;
    StateIndex state;  // leaf state, or the exit point inside the cycle
  };
  std::vector<Task> stack;
  std::vector<bool> visited(g.n(), false);
  std::vector<ArcIndex> arcs;

  auto take_node = [&](std::optional<std::size_t> cycle, StateIndex leaf) {
    const auto& mu = cycle ? cycle_mu[*cycle] : leaf_mu[leaf];
    if (mu) {
      arcs.push_back(report.transfers[*mu].arc);
      stack.push_back(Task{cycle, report.transfers[*mu].tail});
    } else {
      stack.push_back(Task{cycle, cycle ? report.cycles[*cycle].main_state : leaf});
    }
  };

  std::vector<bool> in_cycle(g.n(), false);
  for (std::size_t c = 0; c < report.cycles.size(); ++c) {
    const CycleRecord& rec = report.cycles[c];
    if (rec.step > k) continue;
    for (StateIndex s : rec.states) in_cycle[s] = true;
    if (!rec.parent || report.cycles[*rec.parent].step > k) take_node(c, 0);
  }
  for (StateIndex s = 0; s < g.n(); ++s) {
    if (!in_cycle[s]) take_node(std::nullopt, s);
  }

  while (!stack.empty()) {
    Task task = stack.back();
    stack.pop_back();
    if (!task.cycle) {
      if (visited[task.state]) throw InvariantViolation("state reached twice during extraction");
      visited[task.state] = true;
      continue;
    }
    const CycleRecord& rec = report.cycles[*task.cycle];
    for (StateIndex s : rec.child_states) {
      if (s == task.state) {
        stack.push_back(Task{std::nullopt, s});
      } else {
        take_node(std::nullopt, s);
      }
    }
    for (std::size_t child : rec.children) {
      const auto& states = report.cycles[child].states;
      if (std::binary_search(states.begin(), states.end(), task.state)) {
        stack.push_back(Task{child, task.state});
      } else {
        take_node(child, 0);
      }
    }
  }
  if (std::find(visited.begin(), visited.end(), false) != visited.end()) {
    throw InvariantViolation("backward trace from the sinks did not reach every state");
  }
  WGraph w;
  try {
    w = make_wgraph(g, std::move(arcs));
  } catch (const ValidationError& e) {
    throw InvariantViolation(std::string("extracted arcs: ") + e.what());
  }
  std::sort(sinks.begin(), sinks.end());
  if (w.sinks != sinks) throw InvariantViolation("extracted W-graph sinks differ from the recorded sink states");
  return w;
}

void for_each_wgraph(const ChainGraph& g, std::size_t m, const std::function<void(const WGraph&)>& visit,
                     std::size_t cap) {
  const std::size_t n = g.n();
  if (n > cap) throw CapExceeded("enumeration cap is " + std::to_string(cap) + " states, graph has " + std::to_string(n));
  if (m < 1 || m > n) throw ValidationError("m must lie in 1..n");

  std::vector<std::size_t> succ(n, kNone);  // head of the chosen arc
  std::vector<ArcIndex> chosen;
  std::size_t sinks = 0;
  Rational weight;

  auto closes_cycle = [&](StateIndex i, StateIndex head) {
    StateIndex v = head;
    while (true) {
      if (v == i) return true;
      if (v > i || succ[v] == kNone) return false;
      v = succ[v];
    }
  };

  auto rec = [&](auto&& self, StateIndex i) -> void {
    if (i == n) {
      WGraph w;
      w.n = n;
      w.arcs = chosen;
      std::sort(w.arcs.begin(), w.arcs.end());
      for (StateIndex s = 0; s < n; ++s) {
        if (succ[s] == kNone) w.sinks.push_back(s);
      }
      w.V = weight;
      visit(w);
      return;
    }
    if (sinks < m) {
      ++sinks;
      self(self, i + 1);
      --sinks;
    }
    if (chosen.size() < n - m) {
      for (ArcIndex a : g.out_arcs(i)) {
        const Arc& arc = g.arc(a);
        if (closes_cycle(i, arc.head)) continue;
        succ[i] = arc.head;
        chosen.push_back(a);
        Rational saved = weight;
        weight += arc.U;
        self(self, i + 1);
        weight = saved;
        chosen.pop_back();
        succ[i] = kNone;
      }
    }
  };
  rec(rec, 0);
}

std::vector<WGraph> enumerate_wgraphs(const ChainGraph& g, std::size_t m, std::size_t cap) {
  std::vector<WGraph> all;
  for_each_wgraph(g, m, [&all](const WGraph& w) { all.push_back(w); }, cap);
  return all;
}

OptimalWGraphs enumerate_optimal(const ChainGraph& g, std::size_t m, std::size_t cap) {
  OptimalWGraphs best;
  for_each_wgraph(
      g, m,
      [&best](const WGraph& w) {
        ++best.total;
        if (best.minimizers.empty() || w.V < best.V) {
          best.V = w.V;
          best.minimizers.assign(1, w);
        } else if (w.V == best.V) {
          best.minimizers.push_back(w);
        }
      },
      cap);
  if (best.minimizers.empty()) throw ValidationError("no W-graph with " + std::to_string(m) + " sinks exists");
  return best;
}

WeakNestedCheck check_weak_nested(const ChainGraph& g, const WGraph& more, const WGraph& fewer) {
  WeakNestedCheck out;
  std::vector<StateIndex> lost;
  std::set_difference(more.sinks.begin(), more.sinks.end(), fewer.sinks.begin(), fewer.sinks.end(),
                      std::back_inserter(lost));
  out.one_sink_lost = fewer.sinks.size() + 1 == more.sinks.size() && lost.size() == 1 &&
                      std::includes(more.sinks.begin(), more.sinks.end(), fewer.sinks.begin(), fewer.sinks.end());
  if (lost.size() != 1) return out;
  out.lost_sink = lost.front();

  auto basin = more.basin_of(g);
  auto in_s = [&](StateIndex v) { return basin[v] == lost.front(); };
  auto coarse_succ = successor_arcs(g, more);
  auto fine_succ = successor_arcs(g, fewer);
  out.outside_unchanged = true;
  for (StateIndex v = 0; v < g.n(); ++v) {
    if (!in_s(v) && coarse_succ[v] != fine_succ[v]) out.outside_unchanged = false;
  }
  std::size_t exits = 0;
  for (ArcIndex a : fewer.arcs) {
    if (in_s(g.arc(a).tail) && !in_s(g.arc(a).head)) {
      ++exits;
      out.exit_arc = a;
    }
  }
  out.single_exit = exits == 1;
  if (exits != 1) out.exit_arc.reset();
  return out;
}

}  // namespace metachain
