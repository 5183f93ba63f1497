#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "metachain/algorithm1.hpp"
#include "metachain/chain_graph.hpp"
#include "metachain/rational.hpp"
#include "metachain/wgraph.hpp"

namespace metachain {

/// lambda_m ~ alpha_m exp(-Delta_m / eps) for one m.
struct EigenEstimate {
  std::size_t m = 0;
  Rational delta;
  double alpha = 1.0;
  double log_lambda = 0.0;  // log(alpha) - Delta / eps
  double lambda = 0.0;      // may underflow to 0; log_lambda is authoritative
};

struct SpectralEstimate {
  double epsilon = 0.0;
  /// No prefactors in the input: every alpha is 1 and only the exponent is sharp.
  bool alpha_order_one = false;
  std::vector<EigenEstimate> entries;  // m = 1 .. n-1

  const EigenEstimate& at(std::size_t m) const { return entries.at(m - 1); }
};

/// Requires a run without symmetry that reached m = 1.
SpectralEstimate eigenvalue_estimates(const Alg1Report& report, double epsilon);

/// All eigenvalues of L in double precision (balanced Hessenberg QR),
/// sorted by decreasing real part, so the zero eigenvalue comes first.
/// Throws NumericalError if the iteration does not converge.
std::vector<std::complex<double>> numerical_eigenvalues(const GeneratorMatrix& L);

/// Number of decimal digits used by the extended-precision routines.
inline constexpr int kExtendedDigits = 300;
/// Fallback precision when an eigenvalue underflows the first pass.
inline constexpr int kWideDigits = 1000;

/// Nonzero eigenvalues of L(eps) = -lambda_m + i mu_m, computed in
/// extended precision so that rates far below double resolution come out
/// with full relative accuracy. Ordered by m (lambda ascending).
struct DecayRates {
  std::vector<double> log_lambda;  // log(lambda_m)
  std::vector<double> mu;          // imaginary parts, as doubles
};

DecayRates decay_rates(const ChainGraph& g, double epsilon);

/// Coefficients C_1..C_n of det(tI - L) = t^n + sum_l C_l t^(n-l).
/// `via_minors` sums principal minors; otherwise eigenvalue products.
std::vector<double> charpoly_coefficients(const ChainGraph& g, double epsilon, bool via_minors = true);

struct CharpolyCheck {
  std::vector<double> from_matrix;   // C_1..C_{n-1} from principal minors
  std::vector<double> from_wgraphs;  // sum over W-graphs with n-l sinks of prod L_ij
  double max_relative_residual = 0.0;
  double constant_term = 0.0;        // C_n, zero for a generator
};

CharpolyCheck charpoly_identity_check(const ChainGraph& g, double epsilon, std::size_t cap = kDefaultEnumerationCap);

/// Cycle i_1 -> i_2 -> ... -> i_q -> i_1 given by the min-arc of each
/// vertex, plus arcs leaving the cycle.
struct CycleArcData {
  Rational U;
  double kappa = 1.0;
};
struct CycleExit {
  std::size_t from = 0;  // position in the cycle
  Rational U;
  double kappa = 1.0;
};

struct QuasiInvariantCycle {
  std::size_t top = 0;                 // vertex whose min-arc is heaviest
  std::vector<Rational> log_exponent;  // pi(l) ~ prefactor(l) exp(log_exponent(l) / eps)
  std::vector<double> prefactor;
  /// Exponent of pi(l) L_lj for each exit: U_lj + U_mu(top) - U_mu(l).
  std::vector<Rational> exit_exponents;

  /// Normalized so that the entries sum to one.
  std::vector<double> distribution(double epsilon) const;
};

QuasiInvariantCycle quasi_invariant_cycle(const std::vector<CycleArcData>& cycle, const std::vector<CycleExit>& exits);

/// A closed communicating class with its internal arcs and the arcs that
/// leave it. Vertex ids are 0..size-1; exit heads are opaque labels.
struct ClassArc {
  std::size_t from = 0;
  std::size_t to = 0;
  Rational U;
  double kappa = 1.0;
};
struct ClassSubgraph {
  std::size_t size = 0;
  std::vector<ClassArc> internal;
  std::vector<ClassArc> exits;
};

/// Class subgraph induced by `states` in g at the original weights.
ClassSubgraph class_subgraph(const ChainGraph& g, const std::vector<StateIndex>& states);

struct QuasiInvariantClass {
  std::vector<Rational> u_min;
  Rational theta;                      // max of u_min
  std::vector<double> distribution;    // normalized
  std::vector<Rational> exit_exponents;  // U_ix + theta - U_min(i), per exit
  /// eps * log(pi(i) L_ix), per exit; tends to -exit_exponents as eps -> 0.
  std::vector<double> scaled_log_exit_rates;
};

/// Solves xi M = 0 with M = D^{-1} L^C, D = diag(exp(-U_min(i)/eps)).
/// Throws ValidationError if the null space of M is not one-dimensional.
QuasiInvariantClass quasi_invariant_class(const ClassSubgraph& c, double epsilon);

}  // namespace metachain
