#include "metachain/kinesin.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "metachain/errors.hpp"
#include "metachain/pool.hpp"

namespace metachain {
namespace {

Rational floor_of(const Rational& r) {
  std::int64_t q = r.num() / r.den();
  if (r.num() % r.den() != 0 && r.num() < 0) --q;
  return Rational(q);
}

LabeledArcs labeled(const TGraph& t) { return t.arc_pairs(); }

}  // namespace

ChainGraph build_kinesin(const KinesinParams& p) {
  if (!(p.zeta > Rational(0))) throw ValidationError("zeta must be positive");
  std::vector<std::string> states{"1+", "2+", "3+", "4+", "1-", "2-", "3-", "4-"};
  std::vector<ArcSpec> arcs;
  for (int sign : {+1, -1}) {
    const std::string s = sign > 0 ? "+" : "-";
    const Rational psi = sign > 0 ? p.Psi : -p.Psi;
    auto add = [&](int from, int to, const Rational& u) {
      std::string label = std::to_string(from) + s + "->" + std::to_string(to) + s;
      if (!(u > Rational(0))) throw ValidationError("kinesin exponent " + label + " = " + u.str() + " is not positive");
      arcs.push_back(ArcSpec{std::to_string(from) + s, std::to_string(to) + s, u, std::nullopt});
    };
    add(4, 1, p.F41 - p.F4 - psi);
    add(1, 4, p.F41 - p.F1 + psi);
    add(2, 3, p.F23 - p.F2 + psi);
    add(3, 2, p.F23 - p.F3 - psi);
    add(3, 4, p.F34 - p.F3);
    add(4, 3, p.F34 - p.F4);
    add(1, 2, p.F12 - p.F1);
    add(2, 1, p.F21 - p.F2);
  }
  for (int i = 1; i <= 4; ++i) {
    arcs.push_back(ArcSpec{std::to_string(i) + "+", std::to_string(i) + "-", p.zeta, std::nullopt});
    arcs.push_back(ArcSpec{std::to_string(i) + "-", std::to_string(i) + "+", p.zeta, std::nullopt});
  }
  return ChainGraph::create(std::move(states), arcs);
}

Alg2StopCriterion kinesin_stop(const ChainGraph& k) {
  return Alg2StopCriterion::closed_class_covering(
      {{k.require_state("1+"), k.require_state("1-")}, {k.require_state("3+"), k.require_state("3-")}});
}

bool forward_ring_present(const ChainGraph& k, const LabeledArcs& arcs) {
  for (int i = 1; i <= 4; ++i) {
    int j = i % 4 + 1;
    bool found = false;
    for (const char* s : {"+", "-"}) {
      std::pair<StateIndex, StateIndex> arc{k.require_state(std::to_string(i) + s), k.require_state(std::to_string(j) + s)};
      if (std::find(arcs.begin(), arcs.end(), arc) != arcs.end()) found = true;
    }
    if (!found) return false;
  }
  return true;
}

FinalTGraph kinesin_final_tgraph(KinesinParams p) {
  ChainGraph g = build_kinesin(p);
  FinalTGraph out;
  out.report = run_algorithm2(g, kinesin_stop(g));
  if (out.report.stop_reason != "closed-class-covering-targets") {
    throw InvariantViolation("kinesin run at zeta = " + p.zeta.str() + " ended without meeting the stop rule");
  }
  TGraph t = out.report.tgraph(out.report.P());
  out.arcs = labeled(t);
  for (std::size_t step = 1; step <= out.report.P(); ++step) out.hierarchy.push_back(labeled(out.report.tgraph(step)));
  out.theta = out.report.theta.back();
  out.closed_classes = t.closed_classes();
  out.transient = out.report.transient_states;
  return out;
}

std::string ExponentLaw::str() const {
  if (!slope || *slope == Rational(0)) return constant.decimal_str();
  std::string term = *slope == Rational(1) ? "zeta" : *slope == Rational(-1) ? "-zeta" : slope->decimal_str() + "*zeta";
  if (constant == Rational(0)) return term;
  if (term.front() == '-') return constant.decimal_str() + " - " + term.substr(1);
  return constant.decimal_str() + " + " + term;
}

Rational ExponentLaw::at(const Rational& zeta) const { return constant + slope.value_or(Rational(0)) * zeta; }

Rational simplest_rational_between(const Rational& lo, const Rational& hi) {
  if (hi < lo) return simplest_rational_between(hi, lo);
  if (lo <= Rational(0) && Rational(0) <= hi) return Rational(0);
  if (hi < Rational(0)) return -simplest_rational_between(-hi, -lo);
  Rational fl = floor_of(lo);
  if (fl == lo) return lo;
  if (fl + Rational(1) <= hi) return fl + Rational(1);
  // lo and hi share the integer part: continue on the reciprocals.
  Rational inner = simplest_rational_between(Rational(1) / (hi - fl), Rational(1) / (lo - fl));
  return fl + Rational(1) / inner;
}

std::vector<Rational> parse_grid(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream in(spec);
  std::string item;
  while (std::getline(in, item, ':')) parts.push_back(item);
  if (parts.size() != 3) throw ParseError("grid must look like a:b:step, got '" + spec + "'");
  Rational a = Rational::parse(parts[0]);
  Rational b = Rational::parse(parts[1]);
  Rational step = Rational::parse(parts[2]);
  if (!(step > Rational(0))) throw ParseError("grid step must be positive in '" + spec + "'");
  if (b < a) throw ParseError("grid end lies before its start in '" + spec + "'");
  std::vector<Rational> grid;
  for (Rational z = a; z <= b; z += step) grid.push_back(z);
  return grid;
}

SweepResult kinesin_sweep(const std::vector<Rational>& grid, bool bisect, KinesinParams base, int steps) {
  if (grid.empty()) throw ValidationError("empty zeta grid");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i - 1] < grid[i])) throw ValidationError("zeta grid must be strictly increasing");
  }
  std::map<Rational, FinalTGraph> evaluated;
  // Evaluates every point not seen yet, in parallel.
  auto eval_all = [&](const std::vector<Rational>& zetas) {
    std::vector<Rational> todo;
    for (const Rational& z : zetas)
      if (!evaluated.count(z) && std::find(todo.begin(), todo.end(), z) == todo.end()) todo.push_back(z);
    auto done = parallel_map<FinalTGraph>(todo.size(), [&](std::size_t i) {
      KinesinParams p = base;
      p.zeta = todo[i];
      return kinesin_final_tgraph(p);
    });
    for (std::size_t i = 0; i < todo.size(); ++i) evaluated.emplace(todo[i], std::move(done[i]));
  };
  auto cls = [&](const Rational& z) -> const std::vector<LabeledArcs>& { return evaluated.at(z).hierarchy; };
  eval_all(grid);

  if (bisect) {
    // Brackets narrow in lockstep so each round's midpoints run together.
    // A midpoint in a third class splits the bracket; the upper half
    // starts over with a full step budget.
    struct Bracket {
      Rational lo, hi;
      int left;
    };
    std::vector<Bracket> active;
    for (std::size_t i = 1; i < grid.size(); ++i) {
      if (cls(grid[i - 1]) != cls(grid[i])) active.push_back({grid[i - 1], grid[i], steps});
    }
    while (!active.empty()) {
      std::vector<Rational> mids;
      for (const auto& b : active) mids.push_back((b.lo + b.hi) / Rational(2));
      eval_all(mids);
      std::vector<Bracket> next;
      for (std::size_t i = 0; i < active.size(); ++i) {
        Bracket b = active[i];
        const Rational& mid = mids[i];
        if (cls(mid) == cls(b.lo)) {
          b.lo = mid;
        } else if (cls(mid) == cls(b.hi)) {
          b.hi = mid;
        } else {
          next.push_back({mid, b.hi, steps});
          b.hi = mid;
        }
        if (--b.left > 0) next.push_back(b);
      }
      active = std::move(next);
    }
  }

  ChainGraph g = build_kinesin(base);
  SweepResult result;
  result.states = g.states();
  result.bisected = bisect;
  for (auto it = evaluated.begin(); it != evaluated.end(); ++it) {
    const FinalTGraph& f = it->second;
    if (result.intervals.empty() || result.intervals.back().hierarchy != f.hierarchy) {
      if (!result.intervals.empty()) {
        SweepBoundary b{std::prev(it)->first, it->first, std::nullopt};
        if (bisect) b.value = simplest_rational_between(b.lo, b.hi);
        result.boundaries.push_back(b);
        result.intervals.back().upper = b.value ? *b.value : b.lo;
      }
      SweepInterval iv;
      if (!result.boundaries.empty()) {
        iv.lower = result.boundaries.back().value ? *result.boundaries.back().value : result.boundaries.back().hi;
      }
      iv.final_arcs = f.arcs;
      iv.hierarchy = f.hierarchy;
      iv.closed_classes = f.closed_classes;
      iv.transient = f.transient;
      iv.forward_ring = forward_ring_present(g, f.arcs);
      result.intervals.push_back(std::move(iv));
    }
    result.intervals.back().samples.push_back(SweepSample{it->first, f.theta});
  }

  if (bisect) {
    // Drop zero-width classes sitting exactly on a critical value.
    for (std::size_t i = 1; i + 1 < result.intervals.size();) {
      const SweepInterval& iv = result.intervals[i];
      if (iv.lower && iv.upper && *iv.lower == *iv.upper) {
        result.boundaries[i - 1].hi = result.boundaries[i].hi;
        result.boundaries.erase(result.boundaries.begin() + static_cast<std::ptrdiff_t>(i));
        result.intervals.erase(result.intervals.begin() + static_cast<std::ptrdiff_t>(i));
      } else {
        ++i;
      }
    }
  }

  for (SweepInterval& iv : result.intervals) {
    const auto& s = iv.samples;
    ExponentLaw law;
    if (s.size() == 1 || s.front().zeta == s.back().zeta) {
      law.constant = s.front().theta;
      law.consistent = std::all_of(s.begin(), s.end(), [&](const SweepSample& x) { return x.theta == s.front().theta; });
    } else {
      law.slope = (s.back().theta - s.front().theta) / (s.back().zeta - s.front().zeta);
      law.constant = s.front().theta - *law.slope * s.front().zeta;
      law.consistent = std::all_of(s.begin(), s.end(), [&](const SweepSample& x) { return law.at(x.zeta) == x.theta; });
    }
    iv.slowest = law;
  }
  return result;
}

}  // namespace metachain
