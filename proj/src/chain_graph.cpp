#include "metachain/chain_graph.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "metachain/errors.hpp"

namespace metachain {

ChainGraph ChainGraph::create(std::vector<std::string> states, const std::vector<ArcSpec>& arcs) {
  std::unordered_map<std::string, StateIndex> index;
  for (StateIndex i = 0; i < states.size(); ++i) {
    if (!index.emplace(states[i], i).second) throw ValidationError("duplicate state '" + states[i] + "'");
  }
  std::vector<Arc> resolved;
  resolved.reserve(arcs.size());
  for (const auto& spec : arcs) {
    auto t = index.find(spec.tail);
    auto h = index.find(spec.head);
    if (t == index.end()) throw ValidationError("arc " + spec.tail + "->" + spec.head + ": unknown state '" + spec.tail + "'");
    if (h == index.end()) throw ValidationError("arc " + spec.tail + "->" + spec.head + ": unknown state '" + spec.head + "'");
    resolved.push_back(Arc{t->second, h->second, spec.U, spec.kappa});
  }
  return from_arcs(std::move(states), std::move(resolved));
}

ChainGraph ChainGraph::from_arcs(std::vector<std::string> states, std::vector<Arc> arcs) {
  ChainGraph g;
  g.states_ = std::move(states);
  for (StateIndex i = 0; i < g.states_.size(); ++i) {
    if (!g.index_.emplace(g.states_[i], i).second) throw ValidationError("duplicate state '" + g.states_[i] + "'");
  }
  g.arcs_ = std::move(arcs);
  g.out_.assign(g.states_.size(), {});

  std::set<std::pair<StateIndex, StateIndex>> seen;
  std::size_t with_kappa = 0;
  for (ArcIndex a = 0; a < g.arcs_.size(); ++a) {
    const Arc& arc = g.arcs_[a];
    if (arc.tail >= g.n() || arc.head >= g.n()) throw ValidationError("arc #" + std::to_string(a) + ": state index out of range");
    const std::string label = g.states_[arc.tail] + "->" + g.states_[arc.head];
    if (arc.tail == arc.head) throw ValidationError("arc " + label + ": self-loop");
    if (!seen.emplace(arc.tail, arc.head).second) throw ValidationError("arc " + label + ": duplicate arc");
    if (arc.U <= Rational(0)) throw ValidationError("arc " + label + ": U must be positive, got " + arc.U.str());
    if (arc.kappa) {
      if (!(*arc.kappa > 0.0) || !std::isfinite(*arc.kappa)) {
        throw ValidationError("arc " + label + ": kappa must be positive and finite");
      }
      ++with_kappa;
    }
    g.out_[arc.tail].push_back(a);
  }
  if (with_kappa != 0 && with_kappa != g.arcs_.size()) {
    for (ArcIndex a = 0; a < g.arcs_.size(); ++a) {
      if (!g.arcs_[a].kappa) throw ValidationError("arc " + g.arc_label(a) + ": missing kappa (mixed prefactor mode)");
    }
  }
  g.has_prefactors_ = with_kappa != 0;
  return g;
}

std::optional<StateIndex> ChainGraph::index_of(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

StateIndex ChainGraph::require_state(std::string_view name) const {
  auto i = index_of(name);
  if (!i) throw ValidationError("unknown state '" + std::string(name) + "'");
  return *i;
}

std::optional<ArcIndex> ChainGraph::find_arc(StateIndex tail, StateIndex head) const {
  for (ArcIndex a : out_.at(tail)) {
    if (arcs_[a].head == head) return a;
  }
  return std::nullopt;
}

std::string ChainGraph::arc_label(ArcIndex a) const {
  return states_[arcs_.at(a).tail] + "->" + states_[arcs_.at(a).head];
}

Digraph to_digraph(const ChainGraph& g) {
  Digraph d(g.n());
  for (const Arc& a : g.arcs()) d[a.tail].push_back(a.head);
  return d;
}

std::vector<std::vector<std::size_t>> strongly_connected_components(const Digraph& g) {
  const std::size_t n = g.size();
  constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> order(n, kUnvisited);
  std::vector<std::size_t> low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> components;
  std::size_t counter = 0;

  // Explicit DFS frames: (vertex, next successor position).
  std::vector<std::pair<std::size_t, std::size_t>> frames;
  for (std::size_t root = 0; root < n; ++root) {
    if (order[root] != kUnvisited) continue;
    frames.emplace_back(root, 0);
    order[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      auto& [v, pos] = frames.back();
      if (pos < g[v].size()) {
        std::size_t w = g[v][pos++];
        if (order[w] == kUnvisited) {
          order[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], order[w]);
        }
        continue;
      }
      if (low[v] == order[v]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        components.push_back(std::move(comp));
      }
      std::size_t finished = v;
      frames.pop_back();
      if (!frames.empty()) {
        std::size_t parent = frames.back().first;
        low[parent] = std::min(low[parent], low[finished]);
      }
    }
  }
  std::sort(components.begin(), components.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return components;
}

ClosedClasses closed_communicating_classes(const Digraph& g) {
  auto sccs = strongly_connected_components(g);
  std::vector<std::size_t> comp_of(g.size());
  for (std::size_t c = 0; c < sccs.size(); ++c) {
    for (std::size_t v : sccs[c]) comp_of[v] = c;
  }
  std::vector<bool> has_exit(sccs.size(), false);
  for (std::size_t v = 0; v < g.size(); ++v) {
    for (std::size_t w : g[v]) {
      if (comp_of[w] != comp_of[v]) has_exit[comp_of[v]] = true;
    }
  }
  ClosedClasses result;
  for (std::size_t c = 0; c < sccs.size(); ++c) {
    if (has_exit[c]) continue;
    if (sccs[c].size() >= 2) {
      result.nontrivial.push_back(sccs[c]);
    } else {
      // A singleton SCC without exits has no outgoing arcs at all
      // (self-loops are not representable in a chain graph).
      result.absorbing.push_back(sccs[c].front());
    }
  }
  return result;
}

ValidationReport validate(const ChainGraph& g) {
  ValidationReport report;
  report.n = g.n();
  Digraph d = to_digraph(g);
  report.scc_partition = strongly_connected_components(d);
  ClosedClasses closed = closed_communicating_classes(d);
  report.closed_classes = closed.nontrivial;
  for (std::size_t v : closed.absorbing) report.closed_classes.push_back({v});
  std::sort(report.closed_classes.begin(), report.closed_classes.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  report.is_irreducible = report.scc_partition.size() == 1;
  report.satisfies_a2 = report.closed_classes.size() == 1;
  return report;
}

void require_unique_closed_class(const ChainGraph& g) {
  if (g.n() == 0) throw ValidationError("graph has no states");
  auto report = validate(g);
  if (!report.satisfies_a2) {
    throw ValidationError("graph has " + std::to_string(report.closed_classes.size()) +
                          " closed communicating classes; exactly one is required");
  }
}

MinArcs min_arcs(const ChainGraph& g, StateIndex i) {
  auto out = g.out_arcs(i);
  if (out.empty()) throw ValidationError("state '" + g.state_name(i) + "' has no outgoing arcs");
  MinArcs result{g.arc(out.front()).U, {}};
  for (ArcIndex a : out) {
    const Rational& u = g.arc(a).U;
    if (u < result.u_min) {
      result.u_min = u;
      result.arcs.clear();
    }
    if (u == result.u_min) result.arcs.push_back(a);
  }
  return result;
}

GeneratorMatrix generator_matrix(const ChainGraph& g, double epsilon) {
  if (!(epsilon > 0.0)) throw ValidationError("epsilon must be positive");
  GeneratorMatrix gm;
  gm.epsilon = epsilon;
  gm.prefactors_defaulted = !g.has_prefactors();
  const auto n = static_cast<Eigen::Index>(g.n());
  gm.L = Eigen::MatrixXd::Zero(n, n);
  for (ArcIndex a = 0; a < g.arc_count(); ++a) {
    const Arc& arc = g.arc(a);
    gm.L(static_cast<Eigen::Index>(arc.tail), static_cast<Eigen::Index>(arc.head)) =
        g.kappa(a) * std::exp(-arc.U.to_double() / epsilon);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) sum += gm.L(i, j);
    }
    gm.L(i, i) = -sum;
  }
  return gm;
}

}  // namespace metachain
