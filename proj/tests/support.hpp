// Shared fixtures and independent oracles for the test binaries. Nothing
// here calls into the code under test except graph construction.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "metachain/chain_graph.hpp"
#include "metachain/io.hpp"
#include "metachain/rational.hpp"

namespace testing {

using metachain::ArcSpec;
using metachain::ChainGraph;
using metachain::Rational;

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(METACHAIN_FIXTURE_DIR) / name;
}

inline ChainGraph load_fixture(const std::string& name) { return metachain::load_graph(fixture(name)); }

inline std::vector<std::string> numbered_states(std::size_t n) {
  std::vector<std::string> s;
  for (std::size_t i = 0; i < n; ++i) s.push_back(std::to_string(i + 1));
  return s;
}

/// Random graph: each ordered pair gets an arc with probability `density`.
/// Weights come from `weight`, prefactors (if wanted) log-uniform in
/// [1/kappa_spread, kappa_spread].
struct RandomGraphSpec {
  std::size_t n = 5;
  double density = 0.5;
  std::function<Rational(std::mt19937_64&)> weight;
  bool prefactors = false;
  double kappa_spread = 1.25;
};

inline ChainGraph random_graph(std::mt19937_64& rng, const RandomGraphSpec& spec) {
  auto states = numbered_states(spec.n);
  std::vector<ArcSpec> arcs;
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_real_distribution<double> lk(-std::log(spec.kappa_spread), std::log(spec.kappa_spread));
  for (std::size_t i = 0; i < spec.n; ++i) {
    for (std::size_t j = 0; j < spec.n; ++j) {
      if (i == j || coin(rng) >= spec.density) continue;
      std::optional<double> kappa;
      if (spec.prefactors) kappa = std::exp(lk(rng));
      arcs.push_back(ArcSpec{states[i], states[j], spec.weight(rng), kappa});
    }
  }
  return ChainGraph::create(states, arcs);
}

/// Distinct weights k * step, k drawn without replacement from 1..kmax.
class DistinctWeights {
 public:
  DistinctWeights(std::int64_t kmax, Rational step) : kmax_(kmax), step_(step) {}
  Rational operator()(std::mt19937_64& rng) {
    if (used_.size() >= static_cast<std::size_t>(kmax_)) throw std::runtime_error("weight pool exhausted");
    std::int64_t k;
    do {
      k = 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(kmax_));
    } while (!used_.insert(k).second);
    return step_ * Rational(k);
  }

 private:
  std::int64_t kmax_;
  Rational step_;
  std::set<std::int64_t> used_;
};

inline std::function<Rational(std::mt19937_64&)> integer_weights(std::int64_t lo, std::int64_t hi) {
  return [lo, hi](std::mt19937_64& rng) {
    return Rational(lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1)));
  };
}

/// Potential-barrier chain: U_ij = B_ij - V_i with B symmetric, so rates
/// satisfy detailed balance.
inline ChainGraph detailed_balance(std::mt19937_64& rng, std::size_t n) {
  auto states = numbered_states(n);
  std::vector<Rational> V;
  for (std::size_t i = 0; i < n; ++i) V.push_back(Rational(static_cast<std::int64_t>(rng() % 1000), 100));
  std::vector<ArcSpec> arcs;
  // A random spanning tree keeps the chain irreducible; other pairs get a
  // barrier with probability 0.3.
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 1; i < n; ++i) edges.insert({rng() % i, i});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng() % 10 < 3) edges.insert({i, j});
  for (auto [i, j] : edges) {
    Rational top = std::max(V[i], V[j]) + Rational(1 + static_cast<std::int64_t>(rng() % 1000), 100);
    arcs.push_back({states[i], states[j], top - V[i], {}});
    arcs.push_back({states[j], states[i], top - V[j], {}});
  }
  return ChainGraph::create(states, arcs);
}

// ---- reachability oracles ------------------------------------------------

using Adjacency = std::vector<std::vector<bool>>;

inline Adjacency adjacency(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& arcs) {
  Adjacency a(n, std::vector<bool>(n, false));
  for (auto [i, j] : arcs) a[i][j] = true;
  return a;
}

inline Adjacency adjacency(const ChainGraph& g) {
  std::vector<std::pair<std::size_t, std::size_t>> arcs;
  for (const auto& a : g.arcs()) arcs.emplace_back(a.tail, a.head);
  return adjacency(g.n(), arcs);
}

/// Reflexive transitive closure by Warshall's algorithm.
inline Adjacency transitive_closure(Adjacency r) {
  const std::size_t n = r.size();
  for (std::size_t i = 0; i < n; ++i) r[i][i] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (r[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (r[k][j]) r[i][j] = true;
  return r;
}

/// SCCs from mutual reachability, each sorted, ordered by smallest vertex.
inline std::vector<std::vector<std::size_t>> scc_oracle(const Adjacency& a) {
  Adjacency r = transitive_closure(a);
  const std::size_t n = a.size();
  std::vector<bool> done(n, false);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (done[i]) continue;
    std::vector<std::size_t> c;
    for (std::size_t j = 0; j < n; ++j) {
      if (r[i][j] && r[j][i]) {
        c.push_back(j);
        done[j] = true;
      }
    }
    out.push_back(c);
  }
  return out;
}

/// Closed classes: SCCs from which nothing outside is reachable.
inline std::vector<std::vector<std::size_t>> closed_class_oracle(const Adjacency& a) {
  Adjacency r = transitive_closure(a);
  std::vector<std::vector<std::size_t>> out;
  for (const auto& c : scc_oracle(a)) {
    bool closed = true;
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (r[c.front()][j] && !(r[j][c.front()])) closed = false;
    }
    if (closed) out.push_back(c);
  }
  return out;
}

/// True if the directed graph has a cycle (three-colour DFS).
inline bool has_cycle_dfs(const Adjacency& a) {
  const std::size_t n = a.size();
  std::vector<int> colour(n, 0);
  std::function<bool(std::size_t)> visit = [&](std::size_t v) {
    colour[v] = 1;
    for (std::size_t w = 0; w < n; ++w) {
      if (!a[v][w]) continue;
      if (colour[w] == 1) return true;
      if (colour[w] == 0 && visit(w)) return true;
    }
    colour[v] = 2;
    return false;
  };
  for (std::size_t v = 0; v < n; ++v) {
    if (colour[v] == 0 && visit(v)) return true;
  }
  return false;
}

// ---- polynomial oracle ---------------------------------------------------

using LComplex = std::complex<long double>;

/// det(tI - A) = t^n + c[1] t^{n-1} + ... + c[n] by Faddeev-LeVerrier.
inline std::vector<long double> charpoly_faddeev(const std::vector<std::vector<long double>>& A) {
  const std::size_t n = A.size();
  std::vector<long double> c(n + 1, 0.0L);
  c[0] = 1.0L;
  std::vector<std::vector<long double>> M(n, std::vector<long double>(n, 0.0L));
  for (std::size_t k = 1; k <= n; ++k) {
    // M_k = A M_{k-1} + c_{k-1} I
    std::vector<std::vector<long double>> next(n, std::vector<long double>(n, 0.0L));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        long double s = 0.0L;
        for (std::size_t l = 0; l < n; ++l) s += A[i][l] * M[l][j];
        next[i][j] = s + (i == j ? c[k - 1] : 0.0L);
      }
    M = next;
    long double tr = 0.0L;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) tr += A[i][l] * M[l][i];
    c[k] = -tr / static_cast<long double>(k);
  }
  return c;
}

/// Roots of the monic polynomial t^n + c[1] t^{n-1} + ... + c[n] by the
/// Aberth-Ehrlich simultaneous iteration.
inline std::vector<LComplex> aberth_roots(const std::vector<long double>& c, int max_iter = 500) {
  const std::size_t n = c.size() - 1;
  auto eval = [&](LComplex z, LComplex& p, LComplex& dp) {
    p = 1.0L;
    dp = 0.0L;
    for (std::size_t k = 1; k <= n; ++k) {
      dp = dp * z + p;
      p = p * z + c[k];
    }
  };
  long double radius = 0.0L;
  for (std::size_t k = 1; k <= n; ++k) radius = std::max(radius, std::pow(std::abs(c[k]), 1.0L / k));
  radius = std::max(radius, 1e-30L);
  std::vector<LComplex> z(n);
  for (std::size_t k = 0; k < n; ++k) {
    long double ang = 2.0L * 3.14159265358979323846L * (k + 0.25L) / n;
    z[k] = std::polar(radius, ang);
  }
  for (int it = 0; it < max_iter; ++it) {
    long double move = 0.0L;
    for (std::size_t k = 0; k < n; ++k) {
      LComplex p, dp;
      eval(z[k], p, dp);
      if (p == LComplex(0.0L)) continue;
      LComplex ratio = p / dp;
      LComplex sum = 0.0L;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != k) sum += 1.0L / (z[k] - z[j]);
      }
      LComplex w = ratio / (1.0L - ratio * sum);
      z[k] -= w;
      move = std::max(move, std::abs(w) / std::max(std::abs(z[k]), 1e-300L));
    }
    if (move < 1e-18L) break;
  }
  return z;
}

}  // namespace testing
