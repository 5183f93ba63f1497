#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "metachain/algorithm1.hpp"
#include "metachain/algorithm2.hpp"
#include "metachain/chain_graph.hpp"
#include "metachain/kinesin.hpp"
#include "metachain/kmc.hpp"
#include "metachain/oracle.hpp"
#include "metachain/spectral.hpp"
#include "metachain/wgraph.hpp"

namespace metachain {

/// JSON documents written by the CLI. Keys are sorted, exponents are exact
/// strings ("31/10", "1.1") with a `_float` twin where a number is handy.
/// Every document carries "schema": 1 and a "kind".
using Json = nlohmann::json;

inline constexpr int kReportSchema = 1;

Json validation_json(const ChainGraph& g, const ValidationReport& v);
Json tgraph_json(const ChainGraph& g, const TGraph& t);
Json alg1_json(const ChainGraph& g, const Alg1Report& r);
Json alg2_json(const ChainGraph& g, const Alg2Report& r);
Json wgraph_json(const ChainGraph& g, const WGraph& w);
/// Extracted g*_m for m = 1..n-1 with the weak nested check between neighbours.
Json wgraphs_json(const ChainGraph& g, const Alg1Report& r);
/// Estimates from the run next to extended-precision rates, per epsilon.
Json eigs_json(const ChainGraph& g, const Alg1Report& r, const std::vector<double>& epsilons);
Json oracle_json(const ChainGraph& g, const OracleReport& o);
Json comparison_json(const ChainGraph& g, const ComparisonReport& c);
Json sweep_json(const SweepResult& s);
Json census_json(const ChainGraph& g, const TransitionCensus& c, const CoverageReport* coverage = nullptr);

/// Pretty-printed with a trailing newline; byte-identical for equal input.
std::string dump_report(const Json& doc);

}  // namespace metachain
