#pragma once

#include <string>
#include <vector>

#include "metachain/chain_graph.hpp"
#include "metachain/rational.hpp"

namespace metachain {

/// Vertex of a working graph: an original state or a super-vertex.
struct WorkVertex {
  std::string name;
  std::vector<StateIndex> states;  // original states it contains, ascending

  friend bool operator==(const WorkVertex&, const WorkVertex&) = default;
};

/// Arc of a working graph. `tail`/`head` name current vertices; `origin`
/// identifies the original arc so that Expand can re-root it exactly.
struct WorkArc {
  std::string tail;
  std::string head;
  ArcIndex origin = 0;
  StateIndex origin_tail = 0;
  StateIndex origin_head = 0;
  Rational weight;
  double kappa = 1.0;

  friend bool operator==(const WorkArc&, const WorkArc&) = default;
};

/// Logical view of G^{(r)} (or T^{(r)}) at some recursion level.
struct WorkGraph {
  std::vector<WorkVertex> vertices;
  std::vector<WorkArc> arcs;

  const WorkVertex* find(const std::string& name) const;
  /// Same vertex and arc sets irrespective of storage order.
  bool same_as(const WorkGraph& other) const;
};

/// Everything Expand needs to undo one Contract.
struct Contraction {
  std::string super_vertex;
  std::vector<WorkVertex> members;
  /// Arcs with both endpoints in the contracted set, as they were dropped.
  std::vector<WorkArc> internal_arcs;
};

/// "{a,b,c}" with member state names in state-index order.
std::string super_vertex_name(const ChainGraph& g, const std::vector<StateIndex>& states);

/// Level-0 working graph: one vertex per state, original weights.
WorkGraph work_graph(const ChainGraph& g);

/// Working graph built from the arcs of a T-graph over all states.
WorkGraph work_graph(const ChainGraph& g, const std::vector<WorkArc>& arcs);

/// Maps the listed vertices onto one super-vertex. Arcs inside the set are
/// dropped (and remembered); arcs entering or leaving are re-rooted with
/// unchanged weight; parallel arcs out of the super-vertex are all kept.
Contraction contract(const ChainGraph& g, WorkGraph& graph, const std::vector<std::string>& members);

/// Inverse of contract(). Throws ValidationError if the super-vertex is not
/// present or the contraction record carries no member data.
WorkGraph expand(const WorkGraph& graph, const Contraction& contraction);

/// New weight of an exit arc i->j after a cycle closes with weight
/// gamma_last: U_ij + gamma_last - U_mu(i).
Rational updated_exit_weight(const Rational& u_ij, const Rational& u_mu_i, const Rational& gamma_last);

/// New prefactor of an exit arc: kappa_ij * kappa_mu_last / kappa_mu(i).
double updated_exit_kappa(double kappa_ij, double kappa_mu_last, double kappa_mu_i);

/// Applies the cycle exit rule to every arc leaving `cycle`, and drops the
/// arcs inside it. U_mu(i) and kappa_mu(i) are read from each member's
/// minimal outgoing arc in `graph` (lexicographic tie-break on original
/// endpoints).
WorkGraph update_outgoing_cycle(const WorkGraph& graph, const std::vector<std::string>& cycle,
                                const Rational& gamma_last, double kappa_last);

/// Applies U_ij - U_min(i) + theta to every arc leaving `cls` and drops the
/// arcs inside it. Prefactors are left untouched.
WorkGraph update_outgoing_class(const WorkGraph& graph, const std::vector<std::string>& cls, const Rational& theta);

}  // namespace metachain
