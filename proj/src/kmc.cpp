#include "metachain/kmc.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "metachain/errors.hpp"

namespace metachain {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t trajectory_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

namespace {

struct Rates {
  std::vector<std::vector<double>> out;  // per state, parallel to out_arcs
  std::vector<double> total;
};

Rates rates(const ChainGraph& g, double epsilon) {
  if (!(epsilon > 0.0)) throw ValidationError("epsilon must be positive");
  Rates r;
  r.out.resize(g.n());
  r.total.assign(g.n(), 0.0);
  for (StateIndex i = 0; i < g.n(); ++i) {
    for (ArcIndex a : g.out_arcs(i)) {
      double rate = g.kappa(a) * std::exp(-g.arc(a).U.to_double() / epsilon);
      r.out[i].push_back(rate);
      r.total[i] += rate;
    }
  }
  return r;
}

Trajectory run(const ChainGraph& g, const Rates& r, StateIndex x0, double horizon, std::uint64_t seed,
               std::size_t event_cap) {
  Trajectory t;
  t.x0 = x0;
  t.horizon = horizon;
  t.seed = seed;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  StateIndex x = x0;
  double now = 0.0;
  while (true) {
    if (r.total[x] <= 0.0) {
      t.absorbed = true;
      break;
    }
    if (t.jumps.size() >= event_cap) {
      t.truncated = true;
      break;
    }
    now += std::exponential_distribution<double>(r.total[x])(rng);
    if (!(now < horizon)) break;
    double pick = unit(rng) * r.total[x];
    const auto out = g.out_arcs(x);
    std::size_t k = 0;
    for (; k + 1 < out.size(); ++k) {
      pick -= r.out[x][k];
      if (pick < 0.0) break;
    }
    t.jumps.push_back(Jump{now, out[k]});
    x = g.arc(out[k]).head;
  }
  t.final_state = x;
  return t;
}

}  // namespace

Trajectory simulate(const ChainGraph& g, double epsilon, StateIndex x0, double horizon, std::uint64_t seed,
                    std::size_t event_cap) {
  if (!(horizon > 0.0)) throw ValidationError("horizon must be positive");
  if (x0 >= g.n()) throw ValidationError("initial state out of range");
  return run(g, rates(g, epsilon), x0, horizon, seed, event_cap);
}

std::vector<Trajectory> simulate_many(const ChainGraph& g, double epsilon, std::optional<StateIndex> x0, double horizon,
                                      std::uint64_t master_seed, std::size_t count, std::size_t event_cap) {
  if (!(horizon > 0.0)) throw ValidationError("horizon must be positive");
  if (x0 && *x0 >= g.n()) throw ValidationError("initial state out of range");
  Rates r = rates(g, epsilon);
  std::vector<Trajectory> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t seed = trajectory_seed(master_seed, i);
    StateIndex start = x0 ? *x0 : static_cast<StateIndex>(splitmix64(seed) % g.n());
    out.push_back(run(g, r, start, horizon, seed, event_cap));
  }
  return out;
}

std::vector<double> occupation_times(const ChainGraph& g, const Trajectory& t) {
  std::vector<double> occ(g.n(), 0.0);
  StateIndex x = t.x0;
  double last = 0.0;
  for (const Jump& j : t.jumps) {
    occ[x] += j.time - last;
    last = j.time;
    x = g.arc(j.arc).head;
  }
  if (!t.truncated) occ[x] += t.horizon - last;
  return occ;
}

std::vector<std::pair<StateIndex, double>> holding_times(const ChainGraph& g, const Trajectory& t) {
  std::vector<std::pair<StateIndex, double>> out;
  StateIndex x = t.x0;
  double last = 0.0;
  for (const Jump& j : t.jumps) {
    out.emplace_back(x, j.time - last);
    last = j.time;
    x = g.arc(j.arc).head;
  }
  return out;
}

double ks_statistic_exponential(std::vector<double> samples, double rate) {
  if (samples.empty()) throw ValidationError("KS statistic of an empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double cdf = 1.0 - std::exp(-rate * samples[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - cdf, cdf - static_cast<double>(i) / n});
  }
  return d;
}

std::size_t TransitionCensus::total() const {
  std::size_t s = 0;
  for (std::size_t c : counts) s += c;
  return s;
}

void TransitionCensus::merge(const TransitionCensus& other) {
  if (counts.size() != other.counts.size() || epsilon != other.epsilon || window.lo != other.window.lo ||
      window.hi != other.window.hi) {
    throw ValidationError("cannot merge censuses of different graphs, epsilons or windows");
  }
  for (std::size_t a = 0; a < counts.size(); ++a) counts[a] += other.counts[a];
  trajectories += other.trajectories;
  truncated += other.truncated;
}

TransitionCensus census(const ChainGraph& g, const std::vector<Trajectory>& trajectories, double epsilon,
                        TimeWindow window, std::uint64_t seed) {
  TransitionCensus c;
  c.counts.assign(g.arc_count(), 0);
  c.epsilon = epsilon;
  c.window = window;
  c.seed = seed;
  c.trajectories = trajectories.size();
  for (const Trajectory& t : trajectories) {
    if (t.truncated) ++c.truncated;
    for (const Jump& j : t.jumps) {
      if (j.time >= window.lo && j.time < window.hi) ++c.counts[j.arc];
    }
  }
  return c;
}

CoverageReport census_vs_tgraph(const TransitionCensus& c, const TGraph& t) {
  CoverageReport r;
  r.total = c.total();
  if (r.total == 0) throw ValidationError("census contains no jumps in the window");
  for (ArcIndex a = 0; a < c.counts.size(); ++a) {
    if (c.counts[a] == 0) continue;
    bool in_t = t.contains(a);
    if (in_t) r.on_tgraph += c.counts[a];
    r.per_arc.push_back(ArcCoverage{a, c.counts[a], in_t});
  }
  r.coverage = static_cast<double>(r.on_tgraph) / static_cast<double>(r.total);
  return r;
}

CoverageReport census_vs_tgraph(const ChainGraph& g, const std::vector<Trajectory>& trajectories, const TGraph& t,
                                TimeWindow window) {
  return census_vs_tgraph(census(g, trajectories, 0.0, window), t);
}

std::string census_csv(const ChainGraph& g, const TransitionCensus& c) {
  std::ostringstream out;
  out.precision(17);
  out << "arc,window,count,frequency\n";
  const double total = static_cast<double>(c.total());
  for (ArcIndex a = 0; a < c.counts.size(); ++a) {
    out << g.arc_label(a) << ",[" << c.window.lo << ";" << c.window.hi << ")," << c.counts[a] << ","
        << (total > 0 ? static_cast<double>(c.counts[a]) / total : 0.0) << "\n";
  }
  return out.str();
}

}  // namespace metachain
