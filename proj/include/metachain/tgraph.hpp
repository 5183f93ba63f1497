#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "metachain/chain_graph.hpp"
#include "metachain/rational.hpp"

namespace metachain {

/// An arc of a fully expanded T-graph: original endpoints, the (possibly
/// modified) weight it carried when it was released, and the step at which
/// it entered T.
struct TArc {
  ArcIndex arc = 0;
  StateIndex tail = 0;
  StateIndex head = 0;
  Rational weight;
  double kappa = 1.0;
  std::size_t step = 0;
};

/// Typical transition graph on the original state set.
struct TGraph {
  std::size_t n = 0;
  std::vector<TArc> arcs;
  /// Exponent at which this graph comes into force; empty for T_0.
  std::optional<Rational> threshold;

  Digraph digraph() const;
  bool contains(ArcIndex a) const;
  /// Original (tail, head) pairs, sorted.
  std::vector<std::pair<StateIndex, StateIndex>> arc_pairs() const;
  /// States without outgoing arcs.
  std::vector<StateIndex> absorbing_states() const;
  /// Nontrivial closed communicating classes.
  std::vector<std::vector<StateIndex>> closed_classes() const;
  /// States outside every closed class (absorbing states count as closed).
  std::vector<StateIndex> transient_states() const;
};

}  // namespace metachain
