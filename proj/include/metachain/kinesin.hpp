#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "metachain/algorithm2.hpp"
#include "metachain/chain_graph.hpp"
#include "metachain/rational.hpp"

namespace metachain {

/// Four-state motor with a chemical switch. Barriers are symmetric
/// (F14 = F41, F32 = F23, F43 = F34); only F12 and F21 are listed apart.
struct KinesinParams {
  Rational zeta = 7;
  Rational Psi = 2;
  Rational F1 = 5, F2 = 0, F3 = 5, F4 = 0;
  Rational F12 = 10, F21 = 10, F34 = 10, F41 = Rational(15, 2), F23 = Rational(15, 2);
};

/// States 1+,2+,3+,4+,1-,2-,3-,4-. Ring arcs use psi = +Psi on the plus
/// copy and -Psi on the minus copy; every i+ <-> i- switch has weight zeta.
/// No prefactors. Throws ValidationError if some exponent is not positive.
ChainGraph build_kinesin(const KinesinParams& p);

/// Stop rule: some closed class holds one of {1+,1-} and one of {3+,3-}.
Alg2StopCriterion kinesin_stop(const ChainGraph& kinesin);

/// theta = constant + slope * zeta, fitted exactly through the samples.
struct ExponentLaw {
  Rational constant;
  std::optional<Rational> slope;  // empty if only one zeta was sampled
  bool consistent = true;         // every sample lies on the line
  std::string str() const;
  Rational at(const Rational& zeta) const;
};

struct SweepSample {
  Rational zeta;
  Rational theta;  // exponent at which the run stopped
};

using LabeledArcs = std::vector<std::pair<StateIndex, StateIndex>>;

struct SweepInterval {
  /// Critical values bounding the interval in bisection mode, otherwise the
  /// outermost samples of the class. Empty at the ends of the range.
  std::optional<Rational> lower;
  std::optional<Rational> upper;
  LabeledArcs final_arcs;
  std::vector<LabeledArcs> hierarchy;
  std::vector<std::vector<StateIndex>> closed_classes;
  std::vector<StateIndex> transient;
  std::vector<SweepSample> samples;
  ExponentLaw slowest;
  /// For each forward step i -> i+1 (4 -> 1 included) some copy carries it.
  bool forward_ring = false;
};

struct SweepBoundary {
  Rational lo;  // last point on the left class
  Rational hi;  // first point on the right class
  /// Simplest rational inside [lo, hi]; set in bisection mode.
  std::optional<Rational> value;
};

struct SweepResult {
  std::vector<std::string> states;
  std::vector<SweepInterval> intervals;
  std::vector<SweepBoundary> boundaries;
  bool bisected = false;
};

struct FinalTGraph {
  LabeledArcs arcs;
  /// T-graph after each step, first to last. Two zetas belong to the same
  /// class when these sequences agree.
  std::vector<LabeledArcs> hierarchy;
  Rational theta;
  std::vector<std::vector<StateIndex>> closed_classes;
  std::vector<StateIndex> transient;
  Alg2Report report;
};

/// Runs the stopped sweep once at the given zeta.
FinalTGraph kinesin_final_tgraph(KinesinParams p);

/// Sweeps a sorted grid of positive zetas and groups them by the sequence of
/// T-graphs on labeled states. With `bisect`, each bracket is narrowed by up
/// to `steps` exact midpoint evaluations and the boundary is reported as the
/// simplest rational in the final bracket. A midpoint landing exactly on a
/// critical value (a tie between exponents) yields a zero-width class; in
/// bisection mode such points are dropped and their two boundaries merge.
SweepResult kinesin_sweep(const std::vector<Rational>& grid, bool bisect = false, KinesinParams base = {},
                          int steps = 20);

/// "a:b:step" -> {a, a+step, ...} up to and including b.
std::vector<Rational> parse_grid(const std::string& spec);

/// Simplest (smallest denominator, then numerator) rational in [lo, hi].
Rational simplest_rational_between(const Rational& lo, const Rational& hi);

bool forward_ring_present(const ChainGraph& kinesin, const LabeledArcs& arcs);

}  // namespace metachain
