#pragma once

#include <optional>
#include <string>
#include <vector>

#include "metachain/algorithm1.hpp"
#include "metachain/algorithm2.hpp"
#include "metachain/chain_graph.hpp"
#include "metachain/tgraph.hpp"

namespace metachain {

/// Rendering options. Every arc is labeled with its exact exponent U.
struct DotStyle {
  std::string name = "chain";
  /// Arcs drawn bold (a T-graph). With `only_tgraph` the others are omitted.
  std::optional<TGraph> tgraph;
  bool only_tgraph = false;
  std::optional<ArcIndex> latest;  // drawn red
  std::vector<ArcIndex> bucket;    // drawn dashed
  /// Disjoint vertex sets drawn as clusters (contracted cycles or classes).
  std::vector<std::vector<StateIndex>> clusters;
  std::vector<std::vector<StateIndex>> closed_classes;  // filled light blue
  std::vector<StateIndex> absorbing;                    // filled gold, double circle
};

std::string export_dot(const ChainGraph& g, const DotStyle& style = {});

/// T_k of an Algorithm 1 run: latest transfer highlighted, cycles that are
/// top-level at step k clustered. k = 0 means the last step.
DotStyle alg1_dot_style(const Alg1Report& r, std::size_t k = 0);

/// T_p of an Algorithm 2 run: classes contracted by step p clustered,
/// closed classes and absorbing states of T_p marked. p = 0 means the last step.
DotStyle alg2_dot_style(const Alg2Report& r, std::size_t p = 0);

}  // namespace metachain
