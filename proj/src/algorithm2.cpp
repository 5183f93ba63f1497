#include "metachain/algorithm2.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "metachain/errors.hpp"

namespace metachain {
namespace {

struct Node {
  std::vector<StateIndex> states;
  std::vector<ExitArc> out;
  std::optional<std::size_t> parent;
  std::optional<std::size_t> cls;
  Rational u_min;
  std::vector<ExitArc> min_set;
  bool released = false;
};

class SetSweep {
 public:
  SetSweep(const ChainGraph& g, const Alg2StopCriterion& stop) : g_(g), stop_(stop) {}

  Alg2Report run() {
    report_.n = g_.n();
    report_.prefactors_ignored = g_.has_prefactors();
    for (StateIndex i = 0; i < g_.n(); ++i) {
      Node leaf;
      leaf.states = {i};
      for (ArcIndex a : g_.out_arcs(i)) leaf.out.push_back(ExitArc{a, g_.arc(a).U, g_.kappa(a)});
      nodes_.push_back(std::move(leaf));
    }
    for (std::size_t v = 0; v < nodes_.size(); ++v) offer(v);

    report_.stop_reason = "bucket-empty";
    while (!bucket_.empty()) {
      auto first = bucket_.begin();
      const Rational theta = first->first;
      std::vector<std::size_t> batch = std::move(first->second);
      bucket_.erase(first);
      const std::size_t p = report_.theta.size() + 1;
      report_.theta.push_back(theta);
      report_.multiplicity.push_back(batch.size());

      std::sort(batch.begin(), batch.end());
      for (std::size_t v : batch) {
        nodes_[v].released = true;
        for (const ExitArc& a : nodes_[v].min_set) {
          const Arc& orig = g_.arc(a.arc);
          report_.released.push_back(TArc{a.arc, orig.tail, orig.head, a.weight, a.kappa, p});
        }
      }

      contract_closed_classes(p, theta);

      if (stop_.predicate && stop_.predicate(report_.tgraph(p), theta)) {
        report_.stop_reason = stop_.name;
        break;
      }
    }
    report_.transient_states = report_.tgraph(report_.P()).transient_states();
    return std::move(report_);
  }

 private:
  std::size_t top(StateIndex s) const {
    std::size_t v = s;
    while (nodes_[v].parent) v = *nodes_[v].parent;
    return v;
  }

  void offer(std::size_t v) {
    Node& node = nodes_[v];
    if (node.out.empty()) return;
    node.u_min = node.out.front().weight;
    for (const ExitArc& a : node.out) node.u_min = std::min(node.u_min, a.weight);
    for (const ExitArc& a : node.out) {
      if (a.weight == node.u_min) node.min_set.push_back(a);
    }
    std::sort(node.min_set.begin(), node.min_set.end(), [this](const ExitArc& a, const ExitArc& b) {
      const Arc& x = g_.arc(a.arc);
      const Arc& y = g_.arc(b.arc);
      return std::tie(x.tail, x.head) < std::tie(y.tail, y.head);
    });
    bucket_[node.u_min].push_back(v);
  }

  /// Finds every nontrivial closed class of the current-level T-graph and
  /// contracts them all at once.
  void contract_closed_classes(std::size_t p, const Rational& theta) {
    std::vector<std::size_t> tops;
    std::map<std::size_t, std::size_t> local;
    for (std::size_t v = 0; v < nodes_.size(); ++v) {
      if (!nodes_[v].parent) {
        local[v] = tops.size();
        tops.push_back(v);
      }
    }
    Digraph t(tops.size());
    for (std::size_t v : tops) {
      if (!nodes_[v].released) continue;
      for (const ExitArc& a : nodes_[v].min_set) t[local[v]].push_back(local[top(g_.arc(a.arc).head)]);
    }
    auto closed = closed_communicating_classes(t).nontrivial;
    if (closed.empty()) return;

    // Exits are computed against the tops as they were before this step's
    // contractions, so the order of the classes cannot matter.
    std::vector<Node> merged(closed.size());
    std::vector<ClassRecord> records(closed.size());
    for (std::size_t c = 0; c < closed.size(); ++c) {
      std::set<std::size_t> members;
      for (std::size_t idx : closed[c]) members.insert(tops[idx]);
      ClassRecord& rec = records[c];
      rec.step = p;
      rec.theta = theta;
      for (std::size_t v : members) {
        const Node& node = nodes_[v];
        merged[c].states.insert(merged[c].states.end(), node.states.begin(), node.states.end());
        if (node.cls) {
          rec.children.push_back(*node.cls);
        } else {
          rec.child_states.push_back(node.states.front());
        }
        for (const ExitArc& a : node.out) {
          if (members.count(top(g_.arc(a.arc).head))) continue;
          merged[c].out.push_back(ExitArc{a.arc, a.weight - node.u_min + theta, a.kappa});
        }
      }
      std::sort(merged[c].states.begin(), merged[c].states.end());
      std::sort(rec.children.begin(), rec.children.end());
      std::sort(rec.child_states.begin(), rec.child_states.end());
      rec.states = merged[c].states;
      rec.exits = merged[c].out;
    }

    for (std::size_t c = 0; c < closed.size(); ++c) {
      const std::size_t id = nodes_.size();
      const std::size_t cls_id = report_.classes.size();
      for (std::size_t idx : closed[c]) nodes_[tops[idx]].parent = id;
      for (std::size_t child : records[c].children) report_.classes[child].parent = cls_id;
      merged[c].cls = cls_id;
      nodes_.push_back(std::move(merged[c]));
      report_.classes.push_back(std::move(records[c]));
      offer(id);
      if (!nodes_[id].min_set.empty()) {
        report_.classes[cls_id].exit = nodes_[id].u_min;
        for (const ExitArc& a : nodes_[id].min_set) report_.classes[cls_id].exit_arcs.push_back(a.arc);
      }
    }
  }

  const ChainGraph& g_;
  const Alg2StopCriterion& stop_;
  std::vector<Node> nodes_;
  std::map<Rational, std::vector<std::size_t>> bucket_;
  Alg2Report report_;
};

bool contains_all(const std::vector<ArcIndex>& big, const std::vector<ArcIndex>& small) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

std::vector<ArcIndex> arc_ids(const TGraph& t) {
  std::vector<ArcIndex> ids;
  for (const TArc& a : t.arcs) ids.push_back(a.arc);
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace

Alg2StopCriterion Alg2StopCriterion::closed_class_covering(std::vector<std::vector<StateIndex>> targets) {
  auto pred = [targets = std::move(targets)](const TGraph& t, const Rational&) {
    for (const auto& cls : t.closed_classes()) {
      bool covers = std::all_of(targets.begin(), targets.end(), [&cls](const std::vector<StateIndex>& target) {
        return std::any_of(target.begin(), target.end(),
                           [&cls](StateIndex s) { return std::binary_search(cls.begin(), cls.end(), s); });
      });
      if (covers) return true;
    }
    return false;
  };
  return {"closed-class-covering-targets", pred};
}

TGraph Alg2Report::tgraph(std::size_t p) const {
  if (p > theta.size()) throw ValidationError("T-graph index beyond the last step");
  TGraph t;
  t.n = n;
  for (const TArc& a : released) {
    if (a.step <= p) t.arcs.push_back(a);
  }
  if (p > 0) t.threshold = theta[p - 1];
  return t;
}

std::vector<std::size_t> Alg2Report::classes_at(std::size_t p) const {
  std::vector<std::size_t> ids;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (classes[c].step == p) ids.push_back(c);
  }
  return ids;
}

Alg2Report run_algorithm2(const ChainGraph& g, const Alg2StopCriterion& stop) {
  if (g.n() == 0) throw ValidationError("graph has no states");
  require_unique_closed_class(g);
  return SetSweep(g, stop).run();
}

void check_alg2_invariants(const ChainGraph& g, const Alg2Report& r) {
  auto fail = [](const std::string& what) { throw InvariantViolation("algorithm 2: " + what); };
  (void)g;
  for (std::size_t p = 1; p < r.theta.size(); ++p) {
    if (!(r.theta[p - 1] < r.theta[p])) fail("theta not strictly increasing at step " + std::to_string(p + 1));
  }
  if (r.multiplicity.size() != r.theta.size()) fail("multiplicity list length differs from theta");
  for (const ClassRecord& c : r.classes) {
    auto closed = r.tgraph(c.step).closed_classes();
    if (std::find(closed.begin(), closed.end(), c.states) == closed.end()) {
      fail("contracted set is not a closed class of T at step " + std::to_string(c.step));
    }
    for (const ExitArc& e : c.exits) {
      if (!(e.weight > c.theta)) fail("exit weight does not exceed theta at step " + std::to_string(c.step));
    }
  }
}

ComparisonReport compare_alg1_alg2(const ChainGraph& g, TieBreak tie_break) {
  ComparisonReport out;
  out.alg1 = run_algorithm1(g, Alg1Options{Alg1StopCriterion::bucket_empty(), tie_break});
  out.alg2 = run_algorithm2(g);
  const Alg1Report& a1 = out.alg1;
  const Alg2Report& a2 = out.alg2;

  std::set<Rational> distinct(a1.gamma.begin(), a1.gamma.end());
  std::set<Rational> thetas(a2.theta.begin(), a2.theta.end());
  out.exponents_match = distinct == thetas;
  if (!out.exponents_match) out.failures.push_back("distinct critical exponents differ");

  out.arcs_nested = true;
  out.closed_classes_match = true;
  out.absorbing_match = true;
  std::size_t k_prev = 0;
  for (std::size_t p = 1; p <= a2.P(); ++p) {
    const Rational& theta = a2.theta[p - 1];
    std::size_t k_p = k_prev;
    while (k_p < a1.K() && a1.gamma[k_p] <= theta) ++k_p;
    TGraph tp = a2.tgraph(p);
    auto tp_ids = arc_ids(tp);
    for (std::size_t k = k_prev + 1; k <= k_p; ++k) {
      if (!contains_all(tp_ids, arc_ids(a1.tgraph(k)))) {
        out.arcs_nested = false;
        out.failures.push_back("Gamma_" + std::to_string(k) + " not contained in T_" + std::to_string(p));
      }
    }
    TGraph gk = a1.tgraph(k_p);
    if (tp.closed_classes() != gk.closed_classes()) {
      out.closed_classes_match = false;
      out.failures.push_back("closed classes of T_" + std::to_string(p) + " and Gamma_" + std::to_string(k_p) + " differ");
    }
    if (tp.absorbing_states() != gk.absorbing_states()) {
      out.absorbing_match = false;
      out.failures.push_back("absorbing states of T_" + std::to_string(p) + " and Gamma_" + std::to_string(k_p) + " differ");
    }
    k_prev = k_p;
  }
  return out;
}

}  // namespace metachain
