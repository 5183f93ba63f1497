#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "metachain/rational.hpp"

namespace metachain {

using StateIndex = std::size_t;
using ArcIndex = std::size_t;

/// Directed arc i -> j with exponential order U (exact) and optional prefactor.
struct Arc {
  StateIndex tail = 0;
  StateIndex head = 0;
  Rational U;
  std::optional<double> kappa;
};

/// Arc as read from an input file, endpoints given by state name.
struct ArcSpec {
  std::string tail;
  std::string head;
  Rational U;
  std::optional<double> kappa;
};

/// Weighted digraph of a continuous-time Markov chain with rates
/// L_ij = kappa_ij * exp(-U_ij / eps). A missing arc means U = +inf.
///
/// Immutable after construction. Construction enforces the structural
/// invariants (no self-loops, no duplicate arcs, 0 < U < inf, kappa > 0,
/// prefactors on every arc or on none) and throws ValidationError naming
/// the offending arc otherwise.
class ChainGraph {
 public:
  ChainGraph() = default;

  static ChainGraph create(std::vector<std::string> states, const std::vector<ArcSpec>& arcs);
  static ChainGraph from_arcs(std::vector<std::string> states, std::vector<Arc> arcs);

  std::size_t n() const { return states_.size(); }
  std::size_t arc_count() const { return arcs_.size(); }
  const std::vector<std::string>& states() const { return states_; }
  const std::string& state_name(StateIndex i) const { return states_.at(i); }
  std::optional<StateIndex> index_of(std::string_view name) const;
  StateIndex require_state(std::string_view name) const;

  const std::vector<Arc>& arcs() const { return arcs_; }
  const Arc& arc(ArcIndex a) const { return arcs_.at(a); }
  std::span<const ArcIndex> out_arcs(StateIndex i) const { return out_.at(i); }
  std::optional<ArcIndex> find_arc(StateIndex tail, StateIndex head) const;

  bool has_prefactors() const { return has_prefactors_; }
  /// kappa of arc a, or 1 when the graph carries exponential orders only.
  double kappa(ArcIndex a) const { return arcs_.at(a).kappa.value_or(1.0); }

  /// "tail->head" using state names, for diagnostics.
  std::string arc_label(ArcIndex a) const;

 private:
  std::vector<std::string> states_;
  std::unordered_map<std::string, StateIndex> index_;
  std::vector<Arc> arcs_;
  std::vector<std::vector<ArcIndex>> out_;
  bool has_prefactors_ = false;
};

/// Plain adjacency-list digraph on vertices 0..size()-1.
using Digraph = std::vector<std::vector<std::size_t>>;

Digraph to_digraph(const ChainGraph& g);

/// Strongly connected components (iterative Tarjan). Each component is
/// sorted ascending; components are ordered by their smallest vertex.
std::vector<std::vector<std::size_t>> strongly_connected_components(const Digraph& g);

struct ClosedClasses {
  /// Closed classes with at least two vertices.
  std::vector<std::vector<std::size_t>> nontrivial;
  /// Vertices without outgoing arcs (trivial closed classes).
  std::vector<std::size_t> absorbing;
};

/// SCCs with no arc leaving them, split into nontrivial classes and
/// absorbing vertices.
ClosedClasses closed_communicating_classes(const Digraph& g);

struct ValidationReport {
  std::size_t n = 0;
  std::vector<std::vector<StateIndex>> scc_partition;
  /// All closed classes, absorbing singletons included.
  std::vector<std::vector<StateIndex>> closed_classes;
  bool is_irreducible = false;
  bool satisfies_a2 = false;  // exactly one closed communicating class
};

ValidationReport validate(const ChainGraph& g);

/// Throws ValidationError unless the graph has a unique closed class.
void require_unique_closed_class(const ChainGraph& g);

struct MinArcs {
  Rational u_min;
  std::vector<ArcIndex> arcs;
};

/// Minimal outgoing weight of state i and every arc attaining it.
MinArcs min_arcs(const ChainGraph& g, StateIndex i);

struct GeneratorMatrix {
  Eigen::MatrixXd L;
  double epsilon = 0.0;
  /// True when the graph had no prefactors and kappa := 1 was used.
  bool prefactors_defaulted = false;
};

/// L_ij = kappa_ij exp(-U_ij / eps) off the diagonal, zero row sums.
GeneratorMatrix generator_matrix(const ChainGraph& g, double epsilon);

}  // namespace metachain
