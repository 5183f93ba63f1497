// Extended-precision eigenvalues and characteristic polynomials. Kept in
// its own translation unit because instantiating Eigen on multiprecision
// scalars is slow to compile.
#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

#include "balance.hpp"
#include "metachain/errors.hpp"
#include "metachain/spectral.hpp"

namespace metachain {
namespace {

namespace bmp = boost::multiprecision;
template <unsigned Digits>
using RealOf = bmp::number<bmp::cpp_bin_float<Digits>, bmp::et_off>;
using Real = RealOf<kExtendedDigits>;
using RealMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using Complex = std::complex<Real>;

template <typename Real = Real>
Real rate(const ChainGraph& g, ArcIndex a, const Real& eps) {
  const Arc& arc = g.arc(a);
  Real u = Real(arc.U.num()) / Real(arc.U.den());
  return Real(g.kappa(a)) * bmp::exp(-u / eps);
}

template <typename Real = Real>
Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> generator(const ChainGraph& g, double epsilon) {
  using RealMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
  if (!(epsilon > 0.0)) throw ValidationError("epsilon must be positive");
  const auto n = static_cast<Eigen::Index>(g.n());
  RealMatrix L = RealMatrix::Zero(n, n);
  const Real eps(epsilon);
  for (ArcIndex a = 0; a < g.arc_count(); ++a) {
    const Arc& arc = g.arc(a);
    Real r = rate<Real>(g, a, eps);
    L(static_cast<Eigen::Index>(arc.tail), static_cast<Eigen::Index>(arc.head)) = r;
    L(static_cast<Eigen::Index>(arc.tail), static_cast<Eigen::Index>(arc.tail)) -= r;
  }
  return L;
}

Real determinant(RealMatrix a) {
  const Eigen::Index n = a.rows();
  Real det(1);
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index p = k;
    for (Eigen::Index i = k + 1; i < n; ++i) {
      if (bmp::abs(a(i, k)) > bmp::abs(a(p, k))) p = i;
    }
    if (a(p, k) == 0) return Real(0);
    if (p != k) {
      a.row(p).swap(a.row(k));
      det = -det;
    }
    det *= a(k, k);
    for (Eigen::Index i = k + 1; i < n; ++i) {
      Real f = a(i, k) / a(k, k);
      a.row(i).tail(n - k) -= f * a.row(k).tail(n - k);
    }
  }
  return det;
}

/// Coefficients of det(tI - L): c[l] for l = 1..n (c[0] = 1).
std::vector<Real> coefficients_via_minors(const RealMatrix& L) {
  const auto n = static_cast<std::size_t>(L.rows());
  std::vector<Real> c(n + 1, Real(0));
  c[0] = 1;
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    std::vector<Eigen::Index> idx;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::size_t{1} << i)) idx.push_back(static_cast<Eigen::Index>(i));
    }
    const auto l = static_cast<Eigen::Index>(idx.size());
    RealMatrix sub(l, l);
    for (Eigen::Index r = 0; r < l; ++r) {
      for (Eigen::Index s = 0; s < l; ++s) sub(r, s) = L(idx[static_cast<std::size_t>(r)], idx[static_cast<std::size_t>(s)]);
    }
    Real d = determinant(sub);
    c[idx.size()] += (idx.size() % 2 == 0) ? d : Real(-d);
  }
  return c;
}

template <typename Real = Real>
std::vector<std::complex<Real>> eigenvalues(Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> L) {
  using RealMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
  using Complex = std::complex<Real>;
  detail::balance(L);
  Eigen::EigenSolver<RealMatrix> solver;
  solver.compute(L, false);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("extended-precision eigenvalue iteration did not converge within " +
                         std::to_string(solver.getMaxIterations()) + " iterations per eigenvalue");
  }
  std::vector<Complex> z;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) z.push_back(solver.eigenvalues()(i));
  std::sort(z.begin(), z.end(), [](const Complex& x, const Complex& y) {
    if (x.real() != y.real()) return x.real() > y.real();
    return x.imag() > y.imag();
  });
  return z;
}

std::vector<Real> coefficients_via_eigenvalues(const RealMatrix& L) {
  auto z = eigenvalues(L);
  std::vector<Complex> e(z.size() + 1, Complex(0));
  e[0] = Complex(1);
  for (const Complex& root : z) {
    for (std::size_t l = z.size(); l >= 1; --l) e[l] -= root * e[l - 1];
  }
  std::vector<Real> c;
  for (const Complex& x : e) c.push_back(x.real());
  return c;
}

Real relative_gap(const Real& a, const Real& b) {
  Real scale = std::max(bmp::abs(a), bmp::abs(b));
  if (scale == 0) return Real(0);
  return bmp::abs(a - b) / scale;
}

/// Returns nothing when some eigenvalue falls below what `Digits`-digit
/// arithmetic resolves.
template <unsigned Digits>
std::optional<DecayRates> decay_rates_at(const ChainGraph& g, double epsilon) {
  using Real = RealOf<Digits>;
  using RealMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
  auto L = generator<Real>(g, epsilon);
  const Eigen::Index n = L.rows();
  DecayRates out;
  if (n < 2) return out;
  // Rows of L sum to zero, so the all-ones vector spans the kernel. In the
  // basis (e_1, ..., e_{n-1}, 1) L is block triangular and the nonzero
  // spectrum is that of M = L_ij - L_{n-1,j}. Splitting the zero off exactly
  // keeps it out of a 2x2 Schur block with the slowest rate.
  RealMatrix M(n - 1, n - 1);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    for (Eigen::Index j = 0; j + 1 < n; ++j) M(i, j) = L(i, j) - L(n - 1, j);
  }
  Real norm(0);
  for (Eigen::Index i = 0; i < M.rows(); ++i) norm = std::max(norm, Real(M.row(i).cwiseAbs().sum()));
  auto z = eigenvalues<Real>(M);
  // Eigenvalues of a 2x2 block are only good to about sqrt(u) * norm.
  const Real resolution = norm * bmp::pow(Real(10), -static_cast<int>(Digits / 2 - 10));
  for (const auto& root : z) {
    Real lambda = -root.real();
    if (!(lambda > resolution)) return std::nullopt;
    out.log_lambda.push_back(static_cast<double>(bmp::log(lambda)));
    out.mu.push_back(static_cast<double>(root.imag()));
  }
  return out;
}

}  // namespace

DecayRates decay_rates(const ChainGraph& g, double epsilon) {
  if (auto r = decay_rates_at<kExtendedDigits>(g, epsilon)) return *r;
  if (auto r = decay_rates_at<kWideDigits>(g, epsilon)) return *r;
  throw NumericalError("slowest rate is below what " + std::to_string(kWideDigits) +
                       "-digit arithmetic resolves");
}

std::vector<double> charpoly_coefficients(const ChainGraph& g, double epsilon, bool via_minors) {
  RealMatrix L = generator(g, epsilon);
  auto c = via_minors ? coefficients_via_minors(L) : coefficients_via_eigenvalues(L);
  std::vector<double> out;
  for (std::size_t l = 1; l < c.size(); ++l) out.push_back(static_cast<double>(c[l]));
  return out;
}

CharpolyCheck charpoly_identity_check(const ChainGraph& g, double epsilon, std::size_t cap) {
  const std::size_t n = g.n();
  if (n > cap) throw CapExceeded("enumeration cap is " + std::to_string(cap) + " states, graph has " + std::to_string(n));
  RealMatrix L = generator(g, epsilon);
  auto c = coefficients_via_minors(L);
  const Real eps(epsilon);
  std::vector<Real> rates;
  for (ArcIndex a = 0; a < g.arc_count(); ++a) rates.push_back(rate(g, a, eps));

  CharpolyCheck out;
  Real worst(0);
  for (std::size_t l = 1; l < n; ++l) {
    Real sum(0);
    for_each_wgraph(
        g, n - l,
        [&](const WGraph& w) {
          Real prod(1);
          for (ArcIndex a : w.arcs) prod *= rates[a];
          sum += prod;
        },
        cap);
    worst = std::max(worst, relative_gap(c[l], sum));
    out.from_matrix.push_back(static_cast<double>(c[l]));
    out.from_wgraphs.push_back(static_cast<double>(sum));
  }
  out.max_relative_residual = static_cast<double>(worst);
  out.constant_term = static_cast<double>(c[n]);
  return out;
}

}  // namespace metachain
