#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "metachain/algorithm1.hpp"
#include "metachain/chain_graph.hpp"
#include "metachain/spectral.hpp"
#include "metachain/wgraph.hpp"

namespace metachain {

/// Brute-force view of one sink count m.
struct OracleLevel {
  std::size_t m = 0;
  Rational V;                           // min over W-graphs with m sinks
  Rational delta_enumerated;            // V(g*_m) - V(g*_{m+1})
  std::optional<Rational> delta_alg1;   // absent under symmetry
  std::size_t minimizers = 0;
  std::size_t visited = 0;
  /// Extracted g*_m is the unique minimizer. Absent under symmetry.
  std::optional<bool> extracted_matches;
  std::optional<WeakNestedCheck> nested;  // pair (g*_{m+1}, g*_m)

  bool ok() const;
};

struct SpectralRow {
  double epsilon = 0.0;
  std::size_t m = 0;
  Rational delta;
  double alpha = 1.0;
  double log_lambda = 0.0;  // numerical
  double mu = 0.0;
  double estimate = 0.0;    // log(alpha) - Delta / eps
  double scaled_error = 0.0;  // |eps log lambda + Delta|
  double log_ratio = 0.0;     // log(lambda / (alpha e^{-Delta/eps}))
};

struct OracleReport {
  std::size_t n = 0;
  bool symmetry = false;
  std::vector<OracleLevel> levels;  // m = 1 .. n-1
  std::vector<std::pair<double, CharpolyCheck>> charpoly;
  std::vector<SpectralRow> spectral;  // empty under symmetry
  std::vector<std::string> notes;

  bool ok() const;
};

struct OracleOptions {
  std::vector<double> epsilons{0.1, 0.05, 0.025};
  std::size_t cap = kDefaultEnumerationCap;
  bool charpoly = true;
  bool spectral = true;
  double charpoly_tolerance = 1e-9;
};

/// Runs Algorithm 1 and checks it against exhaustive W-graph enumeration,
/// the characteristic-polynomial identity and extended-precision spectra.
OracleReport run_oracle(const ChainGraph& g, const OracleOptions& opts = {});

}  // namespace metachain
