#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "dot_grammar.hpp"
#include "metachain/dot.hpp"
#include "metachain/errors.hpp"
#include "metachain/io.hpp"
#include "metachain/kinesin.hpp"
#include "metachain/report.hpp"
#include "support.hpp"

using namespace metachain;
using testing::fixture;
using testing::load_fixture;
using testing::numbered_states;

namespace {

namespace fs = std::filesystem;

Rational R(const char* s) { return Rational::parse(s); }

Rational U(const ChainGraph& g, const char* from, const char* to) {
  auto a = g.find_arc(g.require_state(from), g.require_state(to));
  REQUIRE(a.has_value());
  return g.arc(*a).U;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir() {
  static fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("metachain-cli-" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

struct Run {
  int rc = -1;
  std::string out, err;
};

/// Runs the CLI with the given argument string; stdout and stderr captured.
Run cli(const std::string& args) {
  static int counter = 0;
  auto base = scratch_dir() / ("run" + std::to_string(counter++));
  std::string cmd = std::string("'") + METACHAIN_CLI + "' " + args + " > '" + base.string() + ".out' 2> '" +
                    base.string() + ".err'";
  int status = std::system(cmd.c_str());
  Run r;
  r.rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(base.string() + ".out");
  r.err = slurp(base.string() + ".err");
  return r;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

const std::vector<Rational>& critical_values() {
  static const std::vector<Rational> v{R("1/2"), R("9/2"), R("5"), R("11/2"), R("6"), R("19/2"), R("10")};
  return v;
}

/// The slowest exponent on each of the eight intervals, as a function of zeta.
Rational expected_theta(const Rational& zeta) {
  if (zeta < R("1/2")) return R("10");
  if (zeta < R("9/2")) return R("21/2") - zeta;
  if (zeta < R("6")) return R("6");
  if (zeta < R("10")) return zeta;
  return R("10");
}

}  // namespace

TEST_CASE("kinesin exponents") {
  auto g = build_kinesin(KinesinParams{});
  CHECK(g.n() == 8);
  CHECK(g.arc_count() == 24);
  CHECK_FALSE(g.has_prefactors());
  CHECK(U(g, "3+", "2+") == R("0.5"));
  CHECK(U(g, "4+", "3+") == R("10"));
  CHECK(U(g, "1-", "4-") == R("0.5"));
  // Minus copy: psi -> -psi.
  CHECK(U(g, "4+", "1+") == R("5.5"));
  CHECK(U(g, "4-", "1-") == R("9.5"));
  CHECK(U(g, "2+", "3+") == R("9.5"));
  CHECK(U(g, "3-", "2-") == R("4.5"));
  for (const char* i : {"1", "2", "3", "4"}) {
    CHECK(U(g, (std::string(i) + "+").c_str(), (std::string(i) + "-").c_str()) == R("7"));
    CHECK(U(g, (std::string(i) + "-").c_str(), (std::string(i) + "+").c_str()) == R("7"));
  }
  KinesinParams bad;
  bad.zeta = 0;
  CHECK_THROWS_AS(build_kinesin(bad), ValidationError);
  KinesinParams low;
  low.F23 = R("4");  // 3+ -> 2+ would be 4 - 5 - 2 < 0
  CHECK_THROWS_AS(build_kinesin(low), ValidationError);
}

TEST_CASE("grid parsing and simplest rationals") {
  CHECK(parse_grid("0.25:1.25:0.5") == std::vector<Rational>{R("0.25"), R("0.75"), R("1.25")});
  CHECK(parse_grid("1:2:1/3") == std::vector<Rational>{R("1"), R("4/3"), R("5/3"), R("2")});
  CHECK_THROWS_AS(parse_grid("1:2"), ParseError);
  CHECK_THROWS_AS(parse_grid("1:2:0"), ParseError);
  CHECK_THROWS_AS(parse_grid("2:1:1"), ParseError);
  CHECK_THROWS_AS(parse_grid("a:2:1"), ParseError);
  CHECK(simplest_rational_between(R("1048575/2097152"), R("2097153/4194304")) == R("1/2"));
  CHECK(simplest_rational_between(R("0.3"), R("0.4")) == R("1/3"));
  CHECK(simplest_rational_between(R("2"), R("3")) == R("2"));
  CHECK(simplest_rational_between(R("19/2"), R("19/2")) == R("19/2"));
  CHECK(simplest_rational_between(R("3.1"), R("3.2")) == R("16/5"));
}

TEST_CASE("sweep on a single class") {
  SUBCASE("zeta in {1, 3}: one class, exponent 10.5 - zeta") {
    auto s = kinesin_sweep({R("1"), R("3")});
    REQUIRE(s.intervals.size() == 1);
    CHECK(s.boundaries.empty());
    const auto& iv = s.intervals[0];
    CHECK(iv.forward_ring);
    REQUIRE(iv.slowest.slope.has_value());
    CHECK(*iv.slowest.slope == R("-1"));
    CHECK(iv.slowest.constant == R("10.5"));
    CHECK(iv.slowest.str() == "10.5 - zeta");
    CHECK(iv.slowest.consistent);
  }
  SUBCASE("zeta = 5.25: exponent 6") {
    auto s = kinesin_sweep({R("5.25")});
    REQUIRE(s.intervals.size() == 1);
    CHECK(s.intervals[0].forward_ring);
    CHECK(s.intervals[0].samples[0].theta == R("6"));
    CHECK(s.intervals[0].slowest.str() == "6");
  }
  CHECK_THROWS_AS(kinesin_sweep({}), ValidationError);
  CHECK_THROWS_AS(kinesin_sweep({R("2"), R("1")}), ValidationError);
}

TEST_CASE("sweep over the offset grid") {
  auto grid = parse_grid("0.25:10.25:0.5");
  auto s = kinesin_sweep(grid);
  REQUIRE(s.intervals.size() == 8);
  REQUIRE(s.boundaries.size() == 7);
  for (std::size_t i = 0; i < 7; ++i) {
    CAPTURE(i);
    CHECK(s.boundaries[i].lo < critical_values()[i]);
    CHECK(critical_values()[i] < s.boundaries[i].hi);
    CHECK(s.boundaries[i].hi - s.boundaries[i].lo == R("0.5"));
    CHECK_FALSE(s.boundaries[i].value.has_value());
  }
  for (std::size_t i = 0; i + 1 < s.intervals.size(); ++i) CHECK(s.intervals[i].hierarchy != s.intervals[i + 1].hierarchy);
  for (const auto& iv : s.intervals) {
    for (const auto& smp : iv.samples) {
      CAPTURE(smp.zeta.str());
      CHECK(smp.theta == expected_theta(smp.zeta));
      bool inside = R("1/2") < smp.zeta && smp.zeta < R("10");
      if (inside) CHECK(iv.forward_ring);
    }
  }
  CHECK(s.intervals[1].slowest.str() == "10.5 - zeta");
  CHECK(s.intervals[2].slowest.str() == "6");
  CHECK(s.intervals[5].slowest.str() == "zeta");
  CHECK(s.intervals[7].slowest.str() == "10");
}

TEST_CASE("bisection pins the critical values exactly") {
  auto s = kinesin_sweep(parse_grid("0.25:10.25:0.5"), true);
  REQUIRE(s.boundaries.size() == 7);
  for (std::size_t i = 0; i < 7; ++i) {
    REQUIRE(s.boundaries[i].value.has_value());
    CHECK(*s.boundaries[i].value == critical_values()[i]);
    CHECK(s.boundaries[i].hi - s.boundaries[i].lo < R("1/1000000"));
  }
  REQUIRE(s.intervals.size() == 8);
  std::vector<std::string> laws;
  for (const auto& iv : s.intervals) {
    laws.push_back(iv.slowest.str());
    CHECK(iv.slowest.consistent);
    for (const auto& smp : iv.samples) CHECK(smp.theta == expected_theta(smp.zeta));
  }
  CHECK(laws == std::vector<std::string>{"10", "10.5 - zeta", "6", "6", "6", "zeta", "zeta", "10"});
  for (std::size_t i = 1; i + 1 < 8; ++i) CHECK(s.intervals[i].forward_ring);
  CHECK(*s.intervals[0].upper == R("1/2"));
  CHECK_FALSE(s.intervals[0].lower.has_value());
  CHECK_FALSE(s.intervals[7].upper.has_value());
}

TEST_CASE("halving the grid step keeps the classes and tightens the brackets") {
  auto coarse = kinesin_sweep(parse_grid("0.25:10.25:0.5"));
  auto fine = kinesin_sweep(parse_grid("0.125:10.375:0.25"));
  REQUIRE(fine.intervals.size() == coarse.intervals.size());
  for (std::size_t i = 0; i < coarse.intervals.size(); ++i) CHECK(fine.intervals[i].hierarchy == coarse.intervals[i].hierarchy);
  for (std::size_t i = 0; i < coarse.boundaries.size(); ++i) {
    const auto& c = coarse.boundaries[i];
    const auto& f = fine.boundaries[i];
    CHECK(c.lo <= f.lo);
    CHECK(f.hi <= c.hi);
    CHECK(f.hi - f.lo == R("1/4"));
  }
}

TEST_CASE("DOT export") {
  SUBCASE("two states") {
    auto g = ChainGraph::create(numbered_states(2), {{"1", "2", R("1"), {}}, {"2", "1", R("3/7"), {}}});
    auto p = testing::dot::parse(export_dot(g));
    CHECK(p.directed);
    CHECK(p.nodes.size() == 2);
    REQUIRE(p.edges.size() == 2);
    CHECK(p.edges[0].from == "1");
    CHECK(p.edges[0].to == "2");
    CHECK(p.edges[0].attrs.at("label") == "1");
    CHECK(p.edges[1].attrs.at("label") == "3/7");
  }
  SUBCASE("step 2 of the integer example clusters {1,2,3}") {
    auto g = load_fixture("integer7.json");
    auto p = testing::dot::parse(export_dot(g, alg2_dot_style(run_algorithm2(g), 2)));
    REQUIRE(p.clusters.size() == 1);
    auto c = p.clusters[0];
    std::sort(c.begin(), c.end());
    CHECK(c == std::vector<std::string>{"1", "2", "3"});
    CHECK(p.edges.size() == g.arc_count());
  }
  SUBCASE("awkward state names are quoted") {
    auto g = ChainGraph::create({"a \"b\"", "c\\d", "1+"}, {{"a \"b\"", "c\\d", R("2"), {}}, {"c\\d", "1+", R("1"), {}}});
    auto p = testing::dot::parse(export_dot(g));
    REQUIRE(p.edges.size() == 2);
    CHECK(p.edges[0].from == "a \"b\"");
    CHECK(p.edges[0].to == "c\\d");
  }
  SUBCASE("weights round-trip exactly") {
    std::mt19937_64 rng(5);
    testing::RandomGraphSpec spec;
    spec.n = 6;
    spec.weight = [](std::mt19937_64& r) {
      return Rational(1 + static_cast<std::int64_t>(r() % 1000), 1 + static_cast<std::int64_t>(r() % 17));
    };
    for (int trial = 0; trial < 20; ++trial) {
      auto g = testing::random_graph(rng, spec);
      auto p = testing::dot::parse(export_dot(g));
      REQUIRE(p.edges.size() == g.arc_count());
      for (const auto& e : p.edges) {
        auto a = g.find_arc(g.require_state(e.from), g.require_state(e.to));
        REQUIRE(a.has_value());
        CHECK(Rational::parse(e.attrs.at("label")) == g.arc(*a).U);
      }
    }
  }
  SUBCASE("the checker rejects broken input") {
    CHECK_THROWS(testing::dot::parse("digraph { a -> }"));
    CHECK_THROWS(testing::dot::parse("digraph { a -- b }"));
    CHECK_THROWS(testing::dot::parse("digraph { \"a }"));
  }
}

TEST_CASE("report JSON is deterministic and carries the schema") {
  auto s1 = dump_report(sweep_json(kinesin_sweep(parse_grid("0.25:10.25:0.5"), true)));
  auto s2 = dump_report(sweep_json(kinesin_sweep(parse_grid("0.25:10.25:0.5"), true)));
  CHECK(s1 == s2);
  auto doc = Json::parse(s1);
  CHECK(doc.at("schema") == kReportSchema);
  CHECK(doc.at("kind") == "kinesin-sweep");
}

TEST_CASE("command line") {
  const std::string decimal7 = q(fixture("decimal7.json"));
  const std::string sym = q(fixture("integer7.json"));

  SUBCASE("alg1 writes a report with exponents and T-graphs") {
    auto out = scratch_dir() / "report.json";
    auto r = cli("alg1 --input " + decimal7 + " --out " + q(out));
    CHECK(r.rc == 0);
    auto doc = Json::parse(slurp(out));
    CHECK(doc.at("kind") == "alg1");
    CHECK(doc.at("gamma").size() == 9);
    CHECK(doc.at("eigen_steps").size() == 6);
    CHECK(doc.contains("final_tgraph"));
    CHECK(doc.contains("transfers"));
  }
  SUBCASE("compare exits 0 when every statement holds") {
    auto r = cli("compare --input " + sym);
    CHECK(r.rc == 0);
    CHECK(Json::parse(r.out).at("ok") == true);
    auto rev = cli("compare --input " + q(fixture("tie_order.json")) + " --tie-break reverse");
    CHECK(rev.rc == 0);
  }
  SUBCASE("kinesin sweep has eight intervals") {
    auto r = cli("kinesin-sweep --grid 0.25:10.25:0.5");
    CHECK(r.rc == 0);
    CHECK(Json::parse(r.out).at("intervals").size() == 8);
  }
  SUBCASE("errors name the offending token") {
    auto unknown = cli("alg1 --input " + decimal7 + " --bogus");
    CHECK(unknown.rc == 1);
    CHECK(unknown.err.find("--bogus") != std::string::npos);

    auto missing = cli("alg1 --input " + q(scratch_dir() / "nope.json"));
    CHECK(missing.rc == 1);
    CHECK(missing.err.find("nope.json") != std::string::npos);

    auto bad = scratch_dir() / "bad.tsv";
    std::ofstream(bad) << "1 2 1\n2 1 3.x\n";
    auto malformed = cli("validate --input " + q(bad));
    CHECK(malformed.rc == 1);
    CHECK(malformed.err.find("3.x") != std::string::npos);
    CHECK(malformed.err.find("line 2") != std::string::npos);

    auto stop = cli("alg1 --input " + decimal7 + " --stop threshold:abc");
    CHECK(stop.rc == 1);
    CHECK(stop.err.find("abc") != std::string::npos);

    // Two closed classes: a validation error, not an invariant violation.
    auto split = scratch_dir() / "split.tsv";
    std::ofstream(split) << "1 2 1\n1 3 1\n";
    auto two = cli("alg2 --input " + q(split));
    CHECK(two.rc == 1);

    auto nosub = cli("");
    CHECK(nosub.rc == 1);
  }
  SUBCASE("identical inputs give byte-identical output") {
    for (const std::string& args : std::vector<std::string>{"alg1 --input " + decimal7, "alg2 --input " + sym, "wgraphs --input " + decimal7,
                                    "kmc --input " + sym + " -e 0.2 -n 200 --seed 9",
                                    "eigs --input " + decimal7 + " -e 0.1 -e 0.05",
                                    "kinesin-sweep --bisect", "export-dot --input " + sym + " --tgraph alg2"}) {
      CAPTURE(args);
      auto a = cli(args);
      auto b = cli(args);
      CHECK(a.rc == 0);
      CHECK(a.out == b.out);
      CHECK_FALSE(a.out.empty());
    }
    auto x = cli("kmc --input " + sym + " -e 0.2 -n 200 --seed 9");
    auto y = cli("kmc --input " + sym + " -e 0.2 -n 200 --seed 10");
    CHECK(x.out != y.out);
    auto one = cli("kinesin-sweep --bisect --threads 1");
    auto four = cli("kinesin-sweep --bisect --threads 4");
    CHECK(one.out == four.out);
  }
  SUBCASE("kmc writes the census as CSV on request") {
    auto csv = scratch_dir() / "census.csv";
    auto r = cli("kmc --input " + sym + " -e 0.2 -n 50 --seed 1 --csv " + q(csv));
    CHECK(r.rc == 0);
    CHECK(slurp(csv).rfind("arc,window,count,frequency\n", 0) == 0);
  }
  SUBCASE("tsv and json inputs agree") {
    auto tsv = scratch_dir() / "decimal7.tsv";
    std::ofstream(tsv) << to_tsv_text(load_fixture("decimal7.json"));
    auto a = cli("alg1 --input " + decimal7);
    auto b = cli("alg1 --input " + q(tsv));
    CHECK(a.out == b.out);
  }
}

TEST_CASE("kinesin sweep matches the frozen reports") {
  // Frozen after checking every interval against the exponent laws, the
  // critical set and the forward-ring statement (cases above).
  auto grid = parse_grid("0.25:10.25:0.5");
  CHECK(dump_report(sweep_json(kinesin_sweep(grid))) == slurp(fs::path(METACHAIN_GOLDEN_DIR) / "kinesin_sweep.json"));
  CHECK(dump_report(sweep_json(kinesin_sweep(grid, true))) ==
        slurp(fs::path(METACHAIN_GOLDEN_DIR) / "kinesin_sweep_bisect.json"));
}
