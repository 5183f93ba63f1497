#include "metachain/contraction.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "metachain/errors.hpp"

namespace metachain {
namespace {

auto arc_key(const WorkArc& a) {
  return std::tie(a.tail, a.head, a.origin, a.origin_tail, a.origin_head, a.weight, a.kappa);
}

const std::string& owner_name(const std::vector<WorkVertex>& members, StateIndex s) {
  for (const auto& m : members) {
    if (std::binary_search(m.states.begin(), m.states.end(), s)) return m.name;
  }
  throw InvariantViolation("state not covered by contraction members");
}

}  // namespace

const WorkVertex* WorkGraph::find(const std::string& name) const {
  for (const auto& v : vertices) {
    if (v.name == name) return &v;
  }
  return nullptr;
}

bool WorkGraph::same_as(const WorkGraph& other) const {
  auto by_name = [](const WorkVertex& a, const WorkVertex& b) { return a.name < b.name; };
  auto by_key = [](const WorkArc& a, const WorkArc& b) { return arc_key(a) < arc_key(b); };
  auto va = vertices;
  auto vb = other.vertices;
  auto aa = arcs;
  auto ab = other.arcs;
  std::sort(va.begin(), va.end(), by_name);
  std::sort(vb.begin(), vb.end(), by_name);
  std::sort(aa.begin(), aa.end(), by_key);
  std::sort(ab.begin(), ab.end(), by_key);
  return va == vb && aa == ab;
}

std::string super_vertex_name(const ChainGraph& g, const std::vector<StateIndex>& states) {
  auto sorted = states;
  std::sort(sorted.begin(), sorted.end());
  std::string name = "{";
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i) name += ',';
    name += g.state_name(sorted[i]);
  }
  return name + "}";
}

WorkGraph work_graph(const ChainGraph& g) {
  std::vector<WorkArc> arcs;
  for (ArcIndex a = 0; a < g.arc_count(); ++a) {
    const Arc& arc = g.arc(a);
    arcs.push_back(WorkArc{g.state_name(arc.tail), g.state_name(arc.head), a, arc.tail, arc.head, arc.U, g.kappa(a)});
  }
  return work_graph(g, arcs);
}

WorkGraph work_graph(const ChainGraph& g, const std::vector<WorkArc>& arcs) {
  WorkGraph w;
  for (StateIndex i = 0; i < g.n(); ++i) w.vertices.push_back(WorkVertex{g.state_name(i), {i}});
  w.arcs = arcs;
  return w;
}

Contraction contract(const ChainGraph& g, WorkGraph& graph, const std::vector<std::string>& members) {
  Contraction record;
  std::set<std::string> member_set(members.begin(), members.end());
  std::vector<StateIndex> states;
  std::vector<WorkVertex> kept;
  for (auto& v : graph.vertices) {
    if (member_set.count(v.name)) {
      record.members.push_back(v);
      states.insert(states.end(), v.states.begin(), v.states.end());
    } else {
      kept.push_back(v);
    }
  }
  if (record.members.size() != member_set.size()) throw ValidationError("contract: member not present in graph");
  std::sort(states.begin(), states.end());
  record.super_vertex = super_vertex_name(g, states);
  kept.push_back(WorkVertex{record.super_vertex, states});
  graph.vertices = std::move(kept);

  std::vector<WorkArc> arcs;
  for (auto& a : graph.arcs) {
    bool tail_in = member_set.count(a.tail) != 0;
    bool head_in = member_set.count(a.head) != 0;
    if (tail_in && head_in) {
      record.internal_arcs.push_back(a);
      continue;
    }
    if (tail_in) a.tail = record.super_vertex;
    if (head_in) a.head = record.super_vertex;
    arcs.push_back(a);
  }
  graph.arcs = std::move(arcs);
  return record;
}

WorkGraph expand(const WorkGraph& graph, const Contraction& contraction) {
  if (contraction.members.empty()) throw ValidationError("expand: contraction record has no member data");
  if (graph.find(contraction.super_vertex) == nullptr) {
    throw ValidationError("expand: super-vertex " + contraction.super_vertex + " not present");
  }
  WorkGraph out;
  for (const auto& v : graph.vertices) {
    if (v.name != contraction.super_vertex) out.vertices.push_back(v);
  }
  out.vertices.insert(out.vertices.end(), contraction.members.begin(), contraction.members.end());
  for (WorkArc a : graph.arcs) {
    if (a.tail == contraction.super_vertex) a.tail = owner_name(contraction.members, a.origin_tail);
    if (a.head == contraction.super_vertex) a.head = owner_name(contraction.members, a.origin_head);
    out.arcs.push_back(std::move(a));
  }
  out.arcs.insert(out.arcs.end(), contraction.internal_arcs.begin(), contraction.internal_arcs.end());
  return out;
}

Rational updated_exit_weight(const Rational& u_ij, const Rational& u_mu_i, const Rational& gamma_last) {
  return u_ij + gamma_last - u_mu_i;
}

double updated_exit_kappa(double kappa_ij, double kappa_mu_last, double kappa_mu_i) {
  return kappa_ij * kappa_mu_last / kappa_mu_i;
}

namespace {

struct MinOut {
  Rational weight;
  double kappa = 1.0;
};

std::map<std::string, MinOut> minimal_out_arcs(const WorkGraph& graph, const std::set<std::string>& members) {
  std::map<std::string, const WorkArc*> best;
  for (const auto& a : graph.arcs) {
    if (!members.count(a.tail)) continue;
    auto& slot = best[a.tail];
    if (slot == nullptr || a.weight < slot->weight ||
        (a.weight == slot->weight && std::tie(a.origin_tail, a.origin_head) < std::tie(slot->origin_tail, slot->origin_head))) {
      slot = &a;
    }
  }
  std::map<std::string, MinOut> result;
  for (const auto& [name, arc] : best) result[name] = MinOut{arc->weight, arc->kappa};
  for (const auto& m : members) {
    if (!result.count(m)) throw ValidationError("vertex " + m + " has no outgoing arc");
  }
  return result;
}

}  // namespace

WorkGraph update_outgoing_cycle(const WorkGraph& graph, const std::vector<std::string>& cycle,
                                const Rational& gamma_last, double kappa_last) {
  std::set<std::string> members(cycle.begin(), cycle.end());
  auto mu = minimal_out_arcs(graph, members);
  WorkGraph out{graph.vertices, {}};
  for (const auto& a : graph.arcs) {
    bool tail_in = members.count(a.tail) != 0;
    bool head_in = members.count(a.head) != 0;
    if (tail_in && head_in) continue;
    WorkArc b = a;
    if (tail_in) {
      const MinOut& m = mu.at(a.tail);
      b.weight = updated_exit_weight(a.weight, m.weight, gamma_last);
      b.kappa = updated_exit_kappa(a.kappa, kappa_last, m.kappa);
    }
    out.arcs.push_back(std::move(b));
  }
  return out;
}

WorkGraph update_outgoing_class(const WorkGraph& graph, const std::vector<std::string>& cls, const Rational& theta) {
  std::set<std::string> members(cls.begin(), cls.end());
  auto mins = minimal_out_arcs(graph, members);
  WorkGraph out{graph.vertices, {}};
  for (const auto& a : graph.arcs) {
    bool tail_in = members.count(a.tail) != 0;
    bool head_in = members.count(a.head) != 0;
    if (tail_in && head_in) continue;
    WorkArc b = a;
    if (tail_in) b.weight = a.weight - mins.at(a.tail).weight + theta;
    out.arcs.push_back(std::move(b));
  }
  return out;
}

}  // namespace metachain
