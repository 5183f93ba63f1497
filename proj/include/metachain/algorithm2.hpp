#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "metachain/algorithm1.hpp"
#include "metachain/chain_graph.hpp"
#include "metachain/rational.hpp"
#include "metachain/tgraph.hpp"

namespace metachain {

/// Stop rule for the min-arc-set sweep, evaluated after every step on the
/// fully expanded T-graph and the step's exponent. An empty predicate means
/// "run until the bucket is empty".
struct Alg2StopCriterion {
  std::string name = "bucket-empty";
  std::function<bool(const TGraph&, const Rational&)> predicate;

  static Alg2StopCriterion bucket_empty() { return {}; }
  /// Fires once some nontrivial closed class of T meets every target set.
  static Alg2StopCriterion closed_class_covering(std::vector<std::vector<StateIndex>> targets);
  static Alg2StopCriterion custom(std::string name, std::function<bool(const TGraph&, const Rational&)> p) {
    return {std::move(name), std::move(p)};
  }
};

/// A closed communicating class contracted at step p.
struct ClassRecord {
  std::size_t step = 0;
  Rational theta;
  std::vector<StateIndex> states;
  /// Direct members: previously contracted classes and plain states.
  std::vector<std::size_t> children;
  std::vector<StateIndex> child_states;
  /// Arcs leaving the class with their updated weights.
  std::vector<ExitArc> exits;
  /// Minimal updated exit weight and the arcs attaining it.
  std::optional<Rational> exit;
  std::vector<ArcIndex> exit_arcs;
  std::optional<std::size_t> parent;
};

struct Alg2Report {
  std::size_t n = 0;
  std::vector<Rational> theta;           // theta[p-1]
  std::vector<std::size_t> multiplicity; // m(p): vertices released at step p
  /// Released arcs in order; T_p holds those with step <= p.
  std::vector<TArc> released;
  std::vector<ClassRecord> classes;
  std::string stop_reason;
  /// Prefactors are carried but not updated or reported under symmetry.
  bool prefactors_ignored = false;
  /// States outside every closed class of the final T-graph.
  std::vector<StateIndex> transient_states;

  std::size_t P() const { return theta.size(); }
  TGraph tgraph(std::size_t p) const;
  /// Classes contracted at step p.
  std::vector<std::size_t> classes_at(std::size_t p) const;
};

Alg2Report run_algorithm2(const ChainGraph& g, const Alg2StopCriterion& stop = {});

/// Throws InvariantViolation if theta is not strictly increasing, if a
/// contracted class was not closed in T at its step, or if an exit weight
/// does not exceed the step's exponent.
void check_alg2_invariants(const ChainGraph& g, const Alg2Report& report);

/// Outcome of checking the four correspondence statements between the two
/// algorithms on one graph.
struct ComparisonReport {
  bool exponents_match = false;       // distinct gamma values == theta set
  bool arcs_nested = false;           // Gamma_k subset of T_p for K_{p-1} < k <= K_p
  bool closed_classes_match = false;  // closed classes of T_p and Gamma_{K_p}
  bool absorbing_match = false;       // absorbing states of T_p and Gamma_{K_p}
  std::vector<std::string> failures;
  Alg1Report alg1;
  Alg2Report alg2;

  bool ok() const { return exponents_match && arcs_nested && closed_classes_match && absorbing_match; }
};

ComparisonReport compare_alg1_alg2(const ChainGraph& g, TieBreak tie_break = TieBreak::Lexicographic);

}  // namespace metachain
