#include "metachain/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "balance.hpp"
#include "metachain/errors.hpp"

namespace metachain {
namespace {

double log_sum_exp(const std::vector<double>& v) {
  double hi = *std::max_element(v.begin(), v.end());
  double s = 0.0;
  for (double x : v) s += std::exp(x - hi);
  return hi + std::log(s);
}

}  // namespace

SpectralEstimate eigenvalue_estimates(const Alg1Report& report, double epsilon) {
  if (!(epsilon > 0.0)) throw ValidationError("epsilon must be positive");
  if (report.symmetry) throw ValidationError("eigenvalue estimates need a run without symmetry");
  SpectralEstimate est;
  est.epsilon = epsilon;
  est.alpha_order_one = report.prefactors_defaulted;
  for (std::size_t m = 1; m < report.n; ++m) {
    const EigenStep* step = report.eigen_step(m);
    if (step == nullptr) throw ValidationError("run stopped before m = " + std::to_string(m) + " was reached");
    EigenEstimate e;
    e.m = m;
    e.delta = step->delta;
    e.alpha = step->alpha;
    e.log_lambda = std::log(e.alpha) - step->delta.to_double() / epsilon;
    e.lambda = std::exp(e.log_lambda);
    est.entries.push_back(e);
  }
  return est;
}

std::vector<std::complex<double>> numerical_eigenvalues(const GeneratorMatrix& L) {
  Eigen::MatrixXd a = L.L;
  detail::balance(a);
  Eigen::EigenSolver<Eigen::MatrixXd> solver;
  solver.compute(a, false);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigenvalue iteration did not converge within " +
                         std::to_string(solver.getMaxIterations()) + " iterations per eigenvalue (n = " +
                         std::to_string(a.rows()) + ")");
  }
  std::vector<std::complex<double>> z(solver.eigenvalues().data(),
                                      solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(z.begin(), z.end(), [](const auto& x, const auto& y) {
    if (x.real() != y.real()) return x.real() > y.real();
    return x.imag() > y.imag();
  });
  return z;
}

QuasiInvariantCycle quasi_invariant_cycle(const std::vector<CycleArcData>& cycle, const std::vector<CycleExit>& exits) {
  if (cycle.size() < 2) throw ValidationError("a cycle needs at least two vertices");
  QuasiInvariantCycle q;
  for (std::size_t l = 1; l < cycle.size(); ++l) {
    if (cycle[q.top].U < cycle[l].U) q.top = l;
  }
  const CycleArcData& last = cycle[q.top];
  for (const CycleArcData& a : cycle) {
    q.log_exponent.push_back(a.U - last.U);
    q.prefactor.push_back(last.kappa / a.kappa);
  }
  for (const CycleExit& e : exits) {
    if (e.from >= cycle.size()) throw ValidationError("exit arc leaves from outside the cycle");
    q.exit_exponents.push_back(e.U + last.U - cycle[e.from].U);
  }
  return q;
}

std::vector<double> QuasiInvariantCycle::distribution(double epsilon) const {
  std::vector<double> logs;
  for (std::size_t l = 0; l < log_exponent.size(); ++l) {
    logs.push_back(std::log(prefactor[l]) + log_exponent[l].to_double() / epsilon);
  }
  double z = log_sum_exp(logs);
  std::vector<double> pi;
  for (double x : logs) pi.push_back(std::exp(x - z));
  return pi;
}

ClassSubgraph class_subgraph(const ChainGraph& g, const std::vector<StateIndex>& states) {
  ClassSubgraph c;
  c.size = states.size();
  std::vector<std::size_t> local(g.n(), c.size);
  for (std::size_t i = 0; i < states.size(); ++i) local[states[i]] = i;
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (ArcIndex a : g.out_arcs(states[i])) {
      const Arc& arc = g.arc(a);
      if (local[arc.head] < c.size) {
        c.internal.push_back(ClassArc{i, local[arc.head], arc.U, g.kappa(a)});
      } else {
        c.exits.push_back(ClassArc{i, arc.head, arc.U, g.kappa(a)});
      }
    }
  }
  return c;
}

QuasiInvariantClass quasi_invariant_class(const ClassSubgraph& c, double epsilon) {
  if (!(epsilon > 0.0)) throw ValidationError("epsilon must be positive");
  const std::size_t q = c.size;
  QuasiInvariantClass out;
  std::vector<std::optional<Rational>> u_min(q);
  std::vector<std::optional<Rational>> internal_min(q);
  for (const ClassArc& a : c.internal) {
    if (!u_min[a.from] || a.U < *u_min[a.from]) u_min[a.from] = a.U;
    if (!internal_min[a.from] || a.U < *internal_min[a.from]) internal_min[a.from] = a.U;
  }
  for (const ClassArc& a : c.exits) {
    if (!u_min[a.from] || a.U < *u_min[a.from]) u_min[a.from] = a.U;
  }
  for (std::size_t i = 0; i < q; ++i) {
    if (!internal_min[i] || *internal_min[i] != *u_min[i]) {
      throw ValidationError("vertex " + std::to_string(i) + " has no min-arc inside the class");
    }
    out.u_min.push_back(*u_min[i]);
  }
  out.theta = *std::max_element(out.u_min.begin(), out.u_min.end());

  // Only min-arcs enter L^C, so every nonzero entry of M is a prefactor.
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(q));
  for (const ClassArc& a : c.internal) {
    if (a.U != out.u_min[a.from]) continue;
    auto i = static_cast<Eigen::Index>(a.from);
    auto j = static_cast<Eigen::Index>(a.to);
    M(i, j) += a.kappa;
    M(i, i) -= a.kappa;
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(M.transpose());
  Eigen::MatrixXd kernel = lu.kernel();
  if (lu.dimensionOfKernel() != 1) {
    throw ValidationError("zero eigenvalue of M has multiplicity " + std::to_string(lu.dimensionOfKernel()) +
                          "; the vertex set is not a single closed class");
  }
  Eigen::VectorXd xi = kernel.col(0);
  if (xi.sum() < 0) xi = -xi;

  std::vector<double> logs;
  for (std::size_t i = 0; i < q; ++i) {
    double x = xi(static_cast<Eigen::Index>(i));
    if (!(x > 0.0)) throw NumericalError("null vector of M is not positive");
    logs.push_back(std::log(x) + out.u_min[i].to_double() / epsilon);
  }
  double z = log_sum_exp(logs);
  std::vector<double> log_pi;
  for (double x : logs) {
    log_pi.push_back(x - z);
    out.distribution.push_back(std::exp(x - z));
  }
  for (const ClassArc& a : c.exits) {
    out.exit_exponents.push_back(a.U + out.theta - out.u_min[a.from]);
    out.scaled_log_exit_rates.push_back(epsilon * (log_pi[a.from] + std::log(a.kappa)) - a.U.to_double());
  }
  return out;
}

}  // namespace metachain
