#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "metachain/chain_graph.hpp"
#include "metachain/rational.hpp"
#include "metachain/tgraph.hpp"

namespace metachain {

/// Order used to pick among arcs of equal weight. Keys are the original
/// (tail, head) state indices.
enum class TieBreak { Lexicographic, ReverseLexicographic };

/// When to stop the single-sweep algorithm. The check runs after each step.
struct Alg1StopCriterion {
  enum class Kind { BucketEmpty, BucketSizeOne, ExponentThreshold, Custom };

  Kind kind = Kind::BucketEmpty;
  Rational threshold;
  /// Custom: called with the current T-graph and the step's exponent.
  std::function<bool(const TGraph&, const Rational&)> predicate;

  static Alg1StopCriterion bucket_empty() { return {}; }
  static Alg1StopCriterion bucket_size_one() { return {Kind::BucketSizeOne, {}, {}}; }
  /// Stop after the first step whose exponent reaches `delta`.
  static Alg1StopCriterion exponent_threshold(Rational delta) { return {Kind::ExponentThreshold, delta, {}}; }
  static Alg1StopCriterion custom(std::function<bool(const TGraph&, const Rational&)> p) {
    return {Kind::Custom, {}, std::move(p)};
  }
};

struct Alg1Options {
  Alg1StopCriterion stop;
  TieBreak tie_break = TieBreak::Lexicographic;
};

/// A step that did not close a cycle: the number of sinks drops from m to
/// m-1 and one eigenvalue is pinned down.
struct EigenStep {
  std::size_t m = 0;  // eigenvalue index, n-1 down to 1
  std::size_t k = 0;  // step k(m)
  Rational delta;     // Delta_m = gamma_{k(m)}
  double alpha = 1.0; // prefactor of the transferred arc
  StateIndex s_star = 0;  // main state of the tail: sink that stops being one
  StateIndex z_star = 0;  // main state of the sink the arc now drains into
};

/// Arc leaving a super-vertex right after its contraction, with updated
/// weight and prefactor.
struct ExitArc {
  ArcIndex arc = 0;
  Rational weight;
  double kappa = 1.0;
};

/// One contracted cycle c_r. `children` refers to previously contracted
/// cycles by index; `child_states` lists original states that entered the
/// cycle directly.
struct CycleRecord {
  std::size_t step = 0;
  std::vector<StateIndex> states;
  std::vector<std::size_t> children;
  std::vector<StateIndex> child_states;
  /// Exponent of the arc that closed the cycle.
  Rational birth;
  /// Minimal updated exit weight; empty for a cycle with no way out.
  std::optional<Rational> exit;
  std::optional<ArcIndex> exit_arc;
  std::vector<ExitArc> exits;
  StateIndex main_state = 0;
  std::optional<std::size_t> parent;
};

/// The (super-)vertex whose min-arc was transferred at some step: a cycle
/// index, or a plain state when `cycle` is empty.
struct TransferOwner {
  std::optional<std::size_t> cycle;
  StateIndex state = 0;
};

struct SymmetryEvent {
  std::size_t step = 0;
  std::string detail;
};

struct Alg1Report {
  std::size_t n = 0;
  /// gamma[k-1] is the exponent of step k.
  std::vector<Rational> gamma;
  /// Arcs in transfer order; T_k is the first k of them.
  std::vector<TArc> transfers;
  std::vector<TransferOwner> owners;   // parallel to transfers
  std::vector<EigenStep> eigen_steps;  // in order of discovery, m descending
  std::vector<CycleRecord> cycles;     // c_1, c_2, ...
  bool prefactors_defaulted = false;
  bool symmetry = false;
  std::optional<SymmetryEvent> first_symmetry;
  std::string stop_reason;

  std::size_t K() const { return gamma.size(); }
  std::size_t cycle_count() const { return cycles.size(); }
  std::vector<std::size_t> cycle_steps() const;

  /// T_k for 0 <= k <= K.
  TGraph tgraph(std::size_t k) const;
  const EigenStep* eigen_step(std::size_t m) const;
  /// s*_0 = z*_1, available once m = 1 has been reached.
  std::optional<StateIndex> s0() const;
};

Alg1Report run_algorithm1(const ChainGraph& g, const Alg1Options& options = {});

/// Checks the post-conditions of a completed run: K - N_c = n - 1 when the
/// bucket ran dry, Delta non-decreasing, T_k cycle-free until the first
/// cycle step, and so on. Throws InvariantViolation on failure.
void check_alg1_invariants(const ChainGraph& g, const Alg1Report& report);

/// Contraction tree of the cycle hierarchy.
struct HierarchyNode {
  std::vector<StateIndex> states;
  std::optional<std::size_t> cycle;  // index into Alg1Report::cycles; empty for a leaf
  std::optional<Rational> birth;
  std::optional<Rational> exit;
  std::vector<HierarchyNode> children;
};

/// Roots of the hierarchy: the single all-state cycle for an irreducible
/// chain run to completion, otherwise the maximal cycles and the states
/// outside every cycle.
std::vector<HierarchyNode> cycle_hierarchy(const Alg1Report& report);

}  // namespace metachain
