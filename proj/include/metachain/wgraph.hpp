#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "metachain/algorithm1.hpp"
#include "metachain/chain_graph.hpp"
#include "metachain/rational.hpp"

namespace metachain {

/// Spanning forest of in-trees: every non-sink has exactly one outgoing
/// arc, sinks have none, no cycles.
struct WGraph {
  std::size_t n = 0;
  std::vector<StateIndex> sinks;  // ascending
  std::vector<ArcIndex> arcs;     // ascending
  Rational V;                     // sum of original arc weights

  std::size_t m() const { return sinks.size(); }
  /// Sink reached from each state.
  std::vector<StateIndex> basin_of(const ChainGraph& g) const;

  friend bool operator==(const WGraph&, const WGraph&) = default;
};

/// Empty string if `w` is a valid W-graph of `g`, else the reason.
std::string wgraph_defect(const ChainGraph& g, const WGraph& w);

/// Sinks and V from the arc list. Throws ValidationError if the arcs do not
/// form a W-graph.
WGraph make_wgraph(const ChainGraph& g, std::vector<ArcIndex> arcs);

/// Optimal W-graph with m sinks s*_0 .. s*_{m-1}, read off T_{k(m)} through
/// the cycle tree. Rejects runs where symmetry was seen.
WGraph extract_wgraph(const ChainGraph& g, const Alg1Report& report, std::size_t m);

inline constexpr std::size_t kDefaultEnumerationCap = 9;

/// Calls `visit` once for every W-graph with m sinks (backtracking over
/// out-arc choices, pruning cycles as they form). Throws CapExceeded if
/// n > cap.
void for_each_wgraph(const ChainGraph& g, std::size_t m, const std::function<void(const WGraph&)>& visit,
                     std::size_t cap = kDefaultEnumerationCap);

std::vector<WGraph> enumerate_wgraphs(const ChainGraph& g, std::size_t m, std::size_t cap = kDefaultEnumerationCap);

struct OptimalWGraphs {
  Rational V;
  std::vector<WGraph> minimizers;
  std::size_t total = 0;  // W-graphs visited

  bool unique() const { return minimizers.size() == 1; }
};

OptimalWGraphs enumerate_optimal(const ChainGraph& g, std::size_t m, std::size_t cap = kDefaultEnumerationCap);

/// The three clauses relating g*_{m+1} to g*_m.
struct WeakNestedCheck {
  bool one_sink_lost = false;     // sinks(g*_m) = sinks(g*_{m+1}) minus one sink s
  bool outside_unchanged = false; // arcs agree outside the basin S of s in g*_{m+1}
  bool single_exit = false;       // exactly one arc of g*_m leaves S
  std::optional<StateIndex> lost_sink;
  std::optional<ArcIndex> exit_arc;

  bool holds() const { return one_sink_lost && outside_unchanged && single_exit; }
};

/// `more` is g*_{m+1}, `fewer` is g*_m.
WeakNestedCheck check_weak_nested(const ChainGraph& g, const WGraph& more, const WGraph& fewer);

}  // namespace metachain
