#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "metachain/algorithm1.hpp"
#include "metachain/algorithm2.hpp"
#include "metachain/chain_graph.hpp"
#include "metachain/kmc.hpp"
#include "metachain/report.hpp"

// Text forms of the run options shared by the CLI and the Python module.

namespace metachain {

/// "lex" or "reverse".
TieBreak parse_tie_break(const std::string& s);

/// "bucket-empty", "bucket-size-one" or "threshold:<U>".
Alg1StopCriterion parse_alg1_stop(const std::string& s);

/// "bucket-empty" or "covering:a,b/c,d" (stop once some closed class holds
/// one state of every group).
Alg2StopCriterion parse_alg2_stop(const ChainGraph& g, const std::string& s);

struct KmcRequest {
  double epsilon = 0.2;
  std::uint64_t seed = 1;
  std::size_t trajectories = 1000;
  /// Window [0, e^{h/eps}); the last exponent of a full Algorithm 2 run when empty.
  std::optional<Rational> horizon_exponent;
  std::optional<std::string> start;
};

struct KmcOutcome {
  TransitionCensus census;
  CoverageReport coverage;
  std::size_t tgraph_step = 0;
  Rational horizon_exponent;
  Json report;
};

/// Simulates, takes the census over the window and compares it with the
/// last T-graph whose exponent does not exceed the horizon exponent.
KmcOutcome run_kmc(const ChainGraph& g, const KmcRequest& req);

}  // namespace metachain
