#include "metachain/commands.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "metachain/errors.hpp"

namespace metachain {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

}  // namespace

TieBreak parse_tie_break(const std::string& s) {
  if (s == "lex") return TieBreak::Lexicographic;
  if (s == "reverse") return TieBreak::ReverseLexicographic;
  throw ParseError("unknown tie-break '" + s + "' (expected lex or reverse)");
}

Alg1StopCriterion parse_alg1_stop(const std::string& s) {
  if (s == "bucket-empty") return Alg1StopCriterion::bucket_empty();
  if (s == "bucket-size-one") return Alg1StopCriterion::bucket_size_one();
  if (s.rfind("threshold:", 0) == 0) return Alg1StopCriterion::exponent_threshold(Rational::parse(s.substr(10)));
  throw ParseError("unknown stop rule '" + s + "' (expected bucket-empty, bucket-size-one or threshold:<U>)");
}

Alg2StopCriterion parse_alg2_stop(const ChainGraph& g, const std::string& s) {
  if (s == "bucket-empty") return Alg2StopCriterion::bucket_empty();
  if (s.rfind("covering:", 0) == 0) {
    std::vector<std::vector<StateIndex>> targets;
    for (const auto& group : split(s.substr(9), '/')) {
      std::vector<StateIndex> t;
      for (const auto& name : split(group, ',')) t.push_back(g.require_state(name));
      if (t.empty()) throw ParseError("empty target group in stop rule '" + s + "'");
      targets.push_back(std::move(t));
    }
    if (targets.empty()) throw ParseError("no target groups in stop rule '" + s + "'");
    return Alg2StopCriterion::closed_class_covering(std::move(targets));
  }
  throw ParseError("unknown stop rule '" + s + "' (expected bucket-empty or covering:a,b/c,d)");
}

KmcOutcome run_kmc(const ChainGraph& g, const KmcRequest& req) {
  if (!(req.epsilon > 0.0) || !std::isfinite(req.epsilon)) {
    throw ValidationError("epsilon must be positive, got " + std::to_string(req.epsilon));
  }
  Alg2Report full = run_algorithm2(g, Alg2StopCriterion::bucket_empty());
  KmcOutcome out;
  out.horizon_exponent = req.horizon_exponent ? *req.horizon_exponent : full.theta.back();
  std::size_t p = 0;
  while (p < full.P() && full.theta[p] <= out.horizon_exponent) ++p;
  if (p == 0) {
    throw ValidationError("horizon exponent " + out.horizon_exponent.decimal_str() + " lies below the first exponent " +
                          full.theta.front().decimal_str());
  }
  out.tgraph_step = p;
  const double horizon = std::exp(out.horizon_exponent.to_double() / req.epsilon);
  std::optional<StateIndex> x0;
  if (req.start) x0 = g.require_state(*req.start);
  auto trajs = simulate_many(g, req.epsilon, x0, horizon, req.seed, req.trajectories);
  out.census = census(g, trajs, req.epsilon, TimeWindow{0.0, horizon}, req.seed);
  out.coverage = census_vs_tgraph(out.census, full.tgraph(p));
  out.report = census_json(g, out.census, &out.coverage);
  out.report["horizon_exponent"] = out.horizon_exponent.decimal_str();
  out.report["tgraph_step"] = p;
  return out;
}

}  // namespace metachain
