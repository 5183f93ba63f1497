#include "metachain/oracle.hpp"

#include <cmath>

#include "metachain/errors.hpp"
#include "metachain/pool.hpp"

namespace metachain {

bool OracleLevel::ok() const {
  if (minimizers == 0) return false;
  if (delta_alg1 && *delta_alg1 != delta_enumerated) return false;
  if (extracted_matches && !*extracted_matches) return false;
  if (nested && !nested->holds()) return false;
  return true;
}

bool OracleReport::ok() const {
  for (const auto& l : levels) {
    if (!l.ok()) return false;
  }
  return notes.empty();
}

OracleReport run_oracle(const ChainGraph& g, const OracleOptions& opts) {
  const std::size_t n = g.n();
  if (n > opts.cap) throw CapExceeded("enumeration cap is " + std::to_string(opts.cap) + " states, graph has " + std::to_string(n));
  require_unique_closed_class(g);
  Alg1Report run = run_algorithm1(g);
  OracleReport out;
  out.n = n;
  out.symmetry = run.symmetry;

  std::vector<OptimalWGraphs> best(n + 1);
  for (std::size_t m = 1; m < n; ++m) best[m] = enumerate_optimal(g, m, opts.cap);
  best[n].V = Rational(0);
  best[n].minimizers.push_back(make_wgraph(g, {}));
  best[n].total = 1;

  std::vector<std::optional<WGraph>> extracted(n + 1);
  if (!run.symmetry) {
    for (std::size_t m = 1; m < n; ++m) extracted[m] = extract_wgraph(g, run, m);
    extracted[n] = make_wgraph(g, {});
  }

  for (std::size_t m = 1; m < n; ++m) {
    OracleLevel level;
    level.m = m;
    level.V = best[m].V;
    level.delta_enumerated = best[m].V - best[m + 1].V;
    level.minimizers = best[m].minimizers.size();
    level.visited = best[m].total;
    if (!run.symmetry) {
      const EigenStep* step = run.eigen_step(m);
      if (step != nullptr) level.delta_alg1 = step->delta;
      level.extracted_matches = best[m].unique() && best[m].minimizers.front() == *extracted[m];
      level.nested = check_weak_nested(g, *extracted[m + 1], *extracted[m]);
    }
    out.levels.push_back(std::move(level));
  }

  if (opts.charpoly) {
    for (double eps : opts.epsilons) {
      CharpolyCheck c = charpoly_identity_check(g, eps, opts.cap);
      if (!(c.max_relative_residual < opts.charpoly_tolerance)) {
        out.notes.push_back("charpoly residual " + std::to_string(c.max_relative_residual) + " at eps " + std::to_string(eps));
      }
      out.charpoly.emplace_back(eps, std::move(c));
    }
  }

  if (opts.spectral && !run.symmetry && run.eigen_step(1) != nullptr) {
    auto rates = parallel_map<DecayRates>(opts.epsilons.size(),
                                          [&](std::size_t i) { return decay_rates(g, opts.epsilons[i]); });
    for (std::size_t i = 0; i < opts.epsilons.size(); ++i) {
      const double eps = opts.epsilons[i];
      SpectralEstimate est = eigenvalue_estimates(run, eps);
      const DecayRates& num = rates[i];
      for (std::size_t m = 1; m < n; ++m) {
        const EigenEstimate& e = est.at(m);
        SpectralRow row;
        row.epsilon = eps;
        row.m = m;
        row.delta = e.delta;
        row.alpha = e.alpha;
        row.log_lambda = num.log_lambda[m - 1];
        row.mu = num.mu[m - 1];
        row.estimate = e.log_lambda;
        row.scaled_error = std::abs(eps * row.log_lambda + e.delta.to_double());
        row.log_ratio = row.log_lambda - e.log_lambda;
        out.spectral.push_back(row);
      }
    }
  }
  return out;
}

}  // namespace metachain
