#include "metachain/algorithm1.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "metachain/contraction.hpp"
#include "metachain/errors.hpp"

namespace metachain {
namespace {

struct Node {
  std::vector<StateIndex> states;
  std::vector<ExitArc> out;
  std::optional<std::size_t> parent;
  std::optional<ExitArc> mu;  // min-arc, once transferred
  StateIndex main_state = 0;
  std::optional<std::size_t> cycle;
};

struct Entry {
  Rational weight;
  StateIndex tail = 0;
  StateIndex head = 0;
  std::size_t node = 0;
  ExitArc arc;
};

struct EntryOrder {
  TieBreak tie = TieBreak::Lexicographic;
  bool operator()(const Entry& a, const Entry& b) const {
    if (a.weight != b.weight) return a.weight < b.weight;
    if (tie == TieBreak::Lexicographic) return std::tie(a.tail, a.head) < std::tie(b.tail, b.head);
    return std::tie(a.tail, a.head) > std::tie(b.tail, b.head);
  }
};

class Sweep {
 public:
  Sweep(const ChainGraph& g, const Alg1Options& opt) : g_(g), opt_(opt), bucket_(EntryOrder{opt.tie_break}) {}

  Alg1Report run() {
    report_.n = g_.n();
    report_.prefactors_defaulted = !g_.has_prefactors();
    for (StateIndex i = 0; i < g_.n(); ++i) {
      Node leaf;
      leaf.states = {i};
      leaf.main_state = i;
      for (ArcIndex a : g_.out_arcs(i)) leaf.out.push_back(ExitArc{a, g_.arc(a).U, g_.kappa(a)});
      nodes_.push_back(std::move(leaf));
    }
    for (std::size_t v = 0; v < nodes_.size(); ++v) offer(v, 0);

    std::size_t sinks = g_.n();
    report_.stop_reason = "bucket-empty";
    while (!bucket_.empty()) {
      auto first = bucket_.begin();
      const std::size_t k = report_.gamma.size() + 1;
      if (std::next(first) != bucket_.end() && std::next(first)->weight == first->weight) {
        note_symmetry(k, "tie at bucket minimum between " + g_.arc_label(first->arc.arc) + " and " +
                             g_.arc_label(std::next(first)->arc.arc));
      }
      Entry e = *first;
      bucket_.erase(first);

      const Arc& orig = g_.arc(e.arc.arc);
      report_.gamma.push_back(e.weight);
      report_.transfers.push_back(TArc{e.arc.arc, orig.tail, orig.head, e.weight, e.arc.kappa, k});
      nodes_[e.node].mu = e.arc;
      report_.owners.push_back(TransferOwner{nodes_[e.node].cycle, nodes_[e.node].states.front()});

      // Follow unique out-arcs from the head until a sink or back to the tail.
      std::vector<std::size_t> members{e.node};
      std::size_t v = top(orig.head);
      bool cycle = false;
      while (true) {
        if (v == e.node) {
          cycle = true;
          break;
        }
        if (!nodes_[v].mu) break;
        members.push_back(v);
        v = top(g_.arc(nodes_[v].mu->arc).head);
      }

      if (!cycle) {
        --sinks;
        report_.eigen_steps.push_back(
            EigenStep{sinks, k, e.weight, e.arc.kappa, nodes_[e.node].main_state, nodes_[v].main_state});
      } else {
        close_cycle(members, e, k);
      }

      if (should_stop(k, e.weight)) break;
    }
    return std::move(report_);
  }

 private:
  std::size_t top(StateIndex s) const {
    std::size_t v = s;
    while (nodes_[v].parent) v = *nodes_[v].parent;
    return v;
  }

  void note_symmetry(std::size_t step, std::string detail) {
    report_.symmetry = true;
    if (!report_.first_symmetry) report_.first_symmetry = SymmetryEvent{step, std::move(detail)};
  }

  /// Puts node v's minimal outgoing arc into the bucket, if it has any.
  std::optional<ExitArc> offer(std::size_t v, std::size_t step) {
    const auto& out = nodes_[v].out;
    if (out.empty()) return std::nullopt;
    EntryOrder order{opt_.tie_break};
    std::optional<Entry> best;
    std::size_t ties = 0;
    for (const ExitArc& a : out) {
      const Arc& orig = g_.arc(a.arc);
      Entry cand{a.weight, orig.tail, orig.head, v, a};
      if (!best || a.weight < best->weight) {
        ties = 1;
      } else if (a.weight == best->weight) {
        ++ties;
      }
      if (!best || order(cand, *best)) best = cand;
    }
    if (ties > 1) {
      std::string name = nodes_[v].states.size() == 1 ? g_.state_name(nodes_[v].states[0])
                                                       : std::string("super-vertex");
      note_symmetry(step, std::to_string(ties) + " minimal outgoing arcs at " + name);
    }
    bucket_.insert(*best);
    return best->arc;
  }

  void close_cycle(const std::vector<std::size_t>& members, const Entry& closing, std::size_t k) {
    std::set<std::size_t> member_set(members.begin(), members.end());
    Node merged;
    CycleRecord rec;
    rec.step = k;
    rec.birth = closing.weight;

    for (std::size_t i : members) {
      const Node& node = nodes_[i];
      merged.states.insert(merged.states.end(), node.states.begin(), node.states.end());
      if (node.cycle) {
        rec.children.push_back(*node.cycle);
      } else {
        rec.child_states.push_back(node.states.front());
      }
      const ExitArc& mu = *node.mu;
      for (const ExitArc& a : node.out) {
        if (member_set.count(top(g_.arc(a.arc).head))) continue;
        merged.out.push_back(ExitArc{a.arc, updated_exit_weight(a.weight, mu.weight, closing.weight),
                                     updated_exit_kappa(a.kappa, closing.arc.kappa, mu.kappa)});
      }
    }
    std::sort(merged.states.begin(), merged.states.end());
    std::sort(rec.children.begin(), rec.children.end());
    std::sort(rec.child_states.begin(), rec.child_states.end());
    merged.main_state = nodes_[closing.node].main_state;
    rec.states = merged.states;
    rec.exits = merged.out;
    rec.main_state = merged.main_state;

    const std::size_t id = nodes_.size();
    const std::size_t cycle_id = report_.cycles.size();
    merged.cycle = cycle_id;
    for (std::size_t i : members) nodes_[i].parent = id;
    for (std::size_t c : rec.children) report_.cycles[c].parent = cycle_id;
    nodes_.push_back(std::move(merged));
    report_.cycles.push_back(std::move(rec));

    if (auto exit = offer(id, k)) {
      report_.cycles[cycle_id].exit = exit->weight;
      report_.cycles[cycle_id].exit_arc = exit->arc;
    }
  }

  bool should_stop(std::size_t k, const Rational& gamma) {
    switch (opt_.stop.kind) {
      case Alg1StopCriterion::Kind::BucketEmpty:
        return false;
      case Alg1StopCriterion::Kind::BucketSizeOne:
        if (bucket_.size() == 1) {
          report_.stop_reason = "bucket-size-one";
          return true;
        }
        return false;
      case Alg1StopCriterion::Kind::ExponentThreshold:
        if (gamma >= opt_.stop.threshold) {
          report_.stop_reason = "threshold";
          return true;
        }
        return false;
      case Alg1StopCriterion::Kind::Custom:
        if (opt_.stop.predicate && opt_.stop.predicate(report_.tgraph(k), gamma)) {
          report_.stop_reason = "predicate";
          return true;
        }
        return false;
    }
    return false;
  }

  const ChainGraph& g_;
  Alg1Options opt_;
  std::vector<Node> nodes_;
  std::set<Entry, EntryOrder> bucket_;
  Alg1Report report_;
};

}  // namespace

std::vector<std::size_t> Alg1Report::cycle_steps() const {
  std::vector<std::size_t> steps;
  for (const auto& c : cycles) steps.push_back(c.step);
  return steps;
}

TGraph Alg1Report::tgraph(std::size_t k) const {
  if (k > transfers.size()) throw ValidationError("T-graph index beyond the last step");
  TGraph t;
  t.n = n;
  t.arcs.assign(transfers.begin(), transfers.begin() + static_cast<std::ptrdiff_t>(k));
  if (k > 0) t.threshold = gamma[k - 1];
  return t;
}

const EigenStep* Alg1Report::eigen_step(std::size_t m) const {
  for (const auto& e : eigen_steps) {
    if (e.m == m) return &e;
  }
  return nullptr;
}

std::optional<StateIndex> Alg1Report::s0() const {
  if (const EigenStep* e = eigen_step(1)) return e->z_star;
  return std::nullopt;
}

Alg1Report run_algorithm1(const ChainGraph& g, const Alg1Options& options) {
  if (g.n() == 0) throw ValidationError("graph has no states");
  require_unique_closed_class(g);
  return Sweep(g, options).run();
}

void check_alg1_invariants(const ChainGraph& g, const Alg1Report& r) {
  auto fail = [](const std::string& what) { throw InvariantViolation("algorithm 1: " + what); };
  if (r.transfers.size() != r.gamma.size()) fail("transfer list and exponent list differ in length");
  for (std::size_t k = 0; k < r.transfers.size(); ++k) {
    if (r.transfers[k].weight != r.gamma[k]) fail("transferred weight differs from gamma at step " + std::to_string(k + 1));
  }
  for (std::size_t k = 1; k < r.gamma.size(); ++k) {
    bool ok = r.symmetry ? r.gamma[k - 1] <= r.gamma[k] : r.gamma[k - 1] < r.gamma[k];
    if (!ok) fail("gamma not increasing at step " + std::to_string(k + 1));
  }
  if (r.eigen_steps.size() + r.cycles.size() != r.K()) fail("every step must be either a cycle or an eigenvalue step");
  for (std::size_t i = 1; i < r.eigen_steps.size(); ++i) {
    bool ok = r.symmetry ? r.eigen_steps[i - 1].delta <= r.eigen_steps[i].delta
                         : r.eigen_steps[i - 1].delta < r.eigen_steps[i].delta;
    if (!ok) {
      fail("Delta sequence decreases at m = " + std::to_string(r.eigen_steps[i].m));
    }
  }
  std::set<StateIndex> s_stars;
  for (const auto& e : r.eigen_steps) {
    if (!s_stars.insert(e.s_star).second) fail("sink " + g.state_name(e.s_star) + " removed twice");
  }
  if (r.stop_reason == "bucket-empty" && validate(g).satisfies_a2 && r.K() - r.cycle_count() != g.n() - 1) {
    fail("K - N_c = " + std::to_string(r.K() - r.cycle_count()) + ", expected n - 1 = " + std::to_string(g.n() - 1));
  }
  // Before the first cycle closes, T_k is a forest.
  std::size_t first_cycle = r.cycles.empty() ? r.K() + 1 : r.cycles.front().step;
  if (first_cycle > 0 && first_cycle - 1 <= r.K()) {
    auto t = r.tgraph(first_cycle - 1);
    for (const auto& scc : strongly_connected_components(t.digraph())) {
      if (scc.size() > 1) fail("T-graph has a cycle before the first cycle step");
    }
  }
}

std::vector<HierarchyNode> cycle_hierarchy(const Alg1Report& r) {
  auto build = [&r](auto&& self, std::size_t c) -> HierarchyNode {
    const CycleRecord& rec = r.cycles[c];
    HierarchyNode node;
    node.states = rec.states;
    node.cycle = c;
    node.birth = rec.birth;
    node.exit = rec.exit;
    for (StateIndex s : rec.child_states) node.children.push_back(HierarchyNode{{s}, std::nullopt, std::nullopt, std::nullopt, {}});
    for (std::size_t child : rec.children) node.children.push_back(self(self, child));
    std::sort(node.children.begin(), node.children.end(),
              [](const HierarchyNode& a, const HierarchyNode& b) { return a.states.front() < b.states.front(); });
    return node;
  };
  std::vector<HierarchyNode> roots;
  std::vector<bool> covered(r.n, false);
  for (std::size_t c = 0; c < r.cycles.size(); ++c) {
    if (r.cycles[c].parent) continue;
    for (StateIndex s : r.cycles[c].states) covered[s] = true;
    roots.push_back(build(build, c));
  }
  for (StateIndex s = 0; s < r.n; ++s) {
    if (!covered[s]) roots.push_back(HierarchyNode{{s}, std::nullopt, std::nullopt, std::nullopt, {}});
  }
  std::sort(roots.begin(), roots.end(),
            [](const HierarchyNode& a, const HierarchyNode& b) { return a.states.front() < b.states.front(); });
  return roots;
}

}  // namespace metachain
