#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "metachain/chain_graph.hpp"
#include "metachain/tgraph.hpp"

namespace metachain {

/// Name recorded with every census. Each trajectory gets its own
/// mt19937_64 seeded with splitmix64(master seed, trajectory index).
inline constexpr const char* kGeneratorName = "mt19937_64 seeded by splitmix64";

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t trajectory_seed(std::uint64_t master, std::uint64_t index);

struct Jump {
  double time = 0.0;
  ArcIndex arc = 0;
};

struct Trajectory {
  StateIndex x0 = 0;
  std::vector<Jump> jumps;
  double horizon = 0.0;
  std::uint64_t seed = 0;
  bool absorbed = false;   // reached a state without outgoing arcs
  bool truncated = false;  // hit the event cap before the horizon
  StateIndex final_state = 0;
};

inline constexpr std::size_t kDefaultEventCap = 1'000'000;

/// Gillespie simulation: exponential holding time with rate -L_ii, then a
/// jump i->j with probability L_ij / (-L_ii).
Trajectory simulate(const ChainGraph& g, double epsilon, StateIndex x0, double horizon, std::uint64_t seed,
                    std::size_t event_cap = kDefaultEventCap);

/// `count` independent trajectories; trajectory i uses
/// trajectory_seed(master_seed, i). With no x0 the start is drawn uniformly.
std::vector<Trajectory> simulate_many(const ChainGraph& g, double epsilon, std::optional<StateIndex> x0, double horizon,
                                      std::uint64_t master_seed, std::size_t count,
                                      std::size_t event_cap = kDefaultEventCap);

/// Time spent in each state up to the horizon (or the end of the run).
std::vector<double> occupation_times(const ChainGraph& g, const Trajectory& t);

/// Completed sojourns: (state, holding time).
std::vector<std::pair<StateIndex, double>> holding_times(const ChainGraph& g, const Trajectory& t);

/// Kolmogorov-Smirnov distance between the sample and Exp(rate).
double ks_statistic_exponential(std::vector<double> samples, double rate);

struct TimeWindow {
  double lo = 0.0;
  double hi = 0.0;  // jumps with lo <= time < hi are counted
};

struct TransitionCensus {
  std::vector<std::size_t> counts;  // per arc of the source graph
  std::size_t trajectories = 0;
  std::size_t truncated = 0;
  double epsilon = 0.0;
  TimeWindow window;
  std::uint64_t seed = 0;
  std::string generator = kGeneratorName;

  std::size_t total() const;
  /// Associative merge of two censuses over the same graph, epsilon and window.
  void merge(const TransitionCensus& other);
};

TransitionCensus census(const ChainGraph& g, const std::vector<Trajectory>& trajectories, double epsilon,
                        TimeWindow window, std::uint64_t seed = 0);

struct ArcCoverage {
  ArcIndex arc = 0;
  std::size_t count = 0;
  bool in_tgraph = false;
};

struct CoverageReport {
  std::size_t on_tgraph = 0;
  std::size_t total = 0;
  double coverage = 0.0;
  std::vector<ArcCoverage> per_arc;  // arcs with at least one jump
};

/// Fraction of observed jumps that lie on T-graph arcs. Throws
/// ValidationError for an empty census.
CoverageReport census_vs_tgraph(const TransitionCensus& c, const TGraph& t);
CoverageReport census_vs_tgraph(const ChainGraph& g, const std::vector<Trajectory>& trajectories, const TGraph& t,
                                TimeWindow window);

/// "arc,window,count,frequency" rows.
std::string census_csv(const ChainGraph& g, const TransitionCensus& c);

}  // namespace metachain
