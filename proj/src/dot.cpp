#include "metachain/dot.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "metachain/contraction.hpp"
#include "metachain/errors.hpp"

namespace metachain {
namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

bool contains(const std::vector<StateIndex>& v, StateIndex s) { return std::find(v.begin(), v.end(), s) != v.end(); }

}  // namespace

std::string export_dot(const ChainGraph& g, const DotStyle& style) {
  std::set<ArcIndex> t_arcs;
  if (style.tgraph) {
    for (const TArc& a : style.tgraph->arcs) t_arcs.insert(a.arc);
  }
  std::set<ArcIndex> bucket(style.bucket.begin(), style.bucket.end());

  std::vector<int> cluster_of(g.n(), -1);
  for (std::size_t c = 0; c < style.clusters.size(); ++c) {
    for (StateIndex s : style.clusters[c]) {
      if (s >= g.n()) throw ValidationError("cluster names a state outside the graph");
      if (cluster_of[s] != -1) throw ValidationError("clusters overlap at state " + g.state_name(s));
      cluster_of[s] = static_cast<int>(c);
    }
  }

  auto node_line = [&](StateIndex s) {
    std::string attrs;
    if (contains(style.absorbing, s)) {
      attrs = " [shape=doublecircle, style=filled, fillcolor=gold]";
    } else if (std::any_of(style.closed_classes.begin(), style.closed_classes.end(),
                           [&](const auto& c) { return contains(c, s); })) {
      attrs = " [style=filled, fillcolor=lightblue]";
    }
    return quoted(g.state_name(s)) + attrs + ";\n";
  };

  std::ostringstream out;
  out << "digraph " << quoted(style.name) << " {\n";
  out << "  node [shape=circle];\n";
  for (StateIndex s = 0; s < g.n(); ++s) {
    if (cluster_of[s] == -1) out << "  " << node_line(s);
  }
  for (std::size_t c = 0; c < style.clusters.size(); ++c) {
    out << "  subgraph \"cluster_" << c << "\" {\n";
    out << "    label=" << quoted(super_vertex_name(g, style.clusters[c])) << ";\n";
    out << "    style=rounded;\n";
    for (StateIndex s : style.clusters[c]) out << "    " << node_line(s);
    out << "  }\n";
  }
  for (ArcIndex a = 0; a < g.arc_count(); ++a) {
    const bool in_t = t_arcs.count(a) > 0;
    if (style.only_tgraph && !in_t) continue;
    const Arc& arc = g.arc(a);
    std::vector<std::string> attrs{"label=" + quoted(arc.U.decimal_str())};
    if (in_t) attrs.push_back("penwidth=2.5");
    if (bucket.count(a)) attrs.push_back("style=dashed");
    if (style.latest && *style.latest == a) attrs.push_back("color=red");
    out << "  " << quoted(g.state_name(arc.tail)) << " -> " << quoted(g.state_name(arc.head)) << " [";
    for (std::size_t i = 0; i < attrs.size(); ++i) out << (i ? ", " : "") << attrs[i];
    out << "];\n";
  }
  out << "}\n";
  return out.str();
}

DotStyle alg1_dot_style(const Alg1Report& r, std::size_t k) {
  if (k == 0) k = r.K();
  if (k > r.K()) throw ValidationError("step " + std::to_string(k) + " is past the last step " + std::to_string(r.K()));
  DotStyle style;
  style.name = "T_" + std::to_string(k);
  style.tgraph = r.tgraph(k);
  if (k > 0) style.latest = r.transfers[k - 1].arc;
  for (const CycleRecord& c : r.cycles) {
    if (c.step > k) continue;
    if (c.parent && r.cycles[*c.parent].step <= k) continue;
    style.clusters.push_back(c.states);
  }
  return style;
}

DotStyle alg2_dot_style(const Alg2Report& r, std::size_t p) {
  if (p == 0) p = r.P();
  if (p > r.P()) throw ValidationError("step " + std::to_string(p) + " is past the last step " + std::to_string(r.P()));
  DotStyle style;
  style.name = "T_" + std::to_string(p);
  TGraph t = r.tgraph(p);
  style.closed_classes = t.closed_classes();
  style.absorbing = t.absorbing_states();
  style.tgraph = std::move(t);
  for (const ClassRecord& c : r.classes) {
    if (c.step > p) continue;
    if (c.parent && r.classes[*c.parent].step <= p) continue;
    style.clusters.push_back(c.states);
  }
  return style;
}

}  // namespace metachain
