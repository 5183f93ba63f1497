#include "metachain/tgraph.hpp"

#include <algorithm>

namespace metachain {

Digraph TGraph::digraph() const {
  Digraph d(n);
  for (const TArc& a : arcs) d[a.tail].push_back(a.head);
  return d;
}

bool TGraph::contains(ArcIndex a) const {
  return std::any_of(arcs.begin(), arcs.end(), [a](const TArc& t) { return t.arc == a; });
}

std::vector<std::pair<StateIndex, StateIndex>> TGraph::arc_pairs() const {
  std::vector<std::pair<StateIndex, StateIndex>> pairs;
  pairs.reserve(arcs.size());
  for (const TArc& a : arcs) pairs.emplace_back(a.tail, a.head);
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

std::vector<StateIndex> TGraph::absorbing_states() const {
  std::vector<bool> has_out(n, false);
  for (const TArc& a : arcs) has_out[a.tail] = true;
  std::vector<StateIndex> result;
  for (StateIndex i = 0; i < n; ++i) {
    if (!has_out[i]) result.push_back(i);
  }
  return result;
}

std::vector<std::vector<StateIndex>> TGraph::closed_classes() const {
  return closed_communicating_classes(digraph()).nontrivial;
}

std::vector<StateIndex> TGraph::transient_states() const {
  auto closed = closed_communicating_classes(digraph());
  std::vector<bool> recurrent(n, false);
  for (const auto& c : closed.nontrivial) {
    for (StateIndex s : c) recurrent[s] = true;
  }
  for (StateIndex s : closed.absorbing) recurrent[s] = true;
  std::vector<StateIndex> result;
  for (StateIndex i = 0; i < n; ++i) {
    if (!recurrent[i]) result.push_back(i);
  }
  return result;
}

}  // namespace metachain
