// Acceptance suite: end-to-end checks of the engine's headline behaviors,
// one test case per criterion, each printing a PASS/FAIL line with timing.

#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <set>

#include "netform/netform.hpp"
#include "test_support.hpp"

using namespace netform;

namespace {

class CriterionTimer {
 public:
  CriterionTimer(int number, std::string label, double budget_seconds)
      : number_(number), label_(std::move(label)), budget_(budget_seconds) {}

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  void finish(bool pass) const {
    const double t = elapsed();
    std::cout << "[criterion " << number_ << "] " << (pass ? "PASS" : "FAIL") << " — " << label_
              << " (" << t << " s, budget " << budget_ << " s)" << std::endl;
    CHECK(pass);
    CHECK(t < budget_);
  }

 private:
  int number_;
  std::string label_;
  double budget_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

ModelParams directed_params(Rational cs, Horizon k = Horizon::infinite()) {
  return {cs, Rational(0), k};
}

std::filesystem::path artifact_dir() {
  const auto dir = std::filesystem::path("acceptance_artifacts");
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("criterion 1: flower welfare closed form") {
  CriterionTimer timer(1, "flower welfare equals the closed form exactly", 1.0);
  bool pass = true;

  pass &= welfare(make_balanced_flower(26, 10, Mode::directed),
                  directed_params(Rational(2), Horizon::finite(10))) == Rational(590);
  pass &= welfare(make_balanced_flower(10, 6, Mode::directed),
                  directed_params(Rational(3, 2), Horizon::finite(6))) == Rational(72);
  timer.finish(pass);
}

TEST_CASE("criterion 2: flower stability and best-response agreement") {
  CriterionTimer timer(2, "flower graphs are stable across the claimed cost range", 10.0);
  bool pass = true;

  const auto big = make_balanced_flower(26, 10, Mode::directed);
  pass &= is_edge_stable(big, directed_params(Rational(1), Horizon::finite(10)));
  pass &= is_edge_stable(big, directed_params(Rational(39, 10), Horizon::finite(10)));

  const auto small = make_balanced_flower(10, 6, Mode::directed);
  const auto small_params = directed_params(Rational(3, 2), Horizon::finite(6));
  pass &= is_edge_stable(small, small_params);
  pass &= is_nash_bruteforce(small, small_params);  // 2^9 strategies per agent
  timer.finish(pass);
}

TEST_CASE("criterion 3: kautz instance checks") {
  CriterionTimer timer(3, "kautz(2,4): shape, stability, symmetry, welfare identity", 5.0);
  bool pass = true;

  const auto g = make_kautz(2, 4, Mode::directed);
  pass &= g.vertex_count() == 24;
  for (int v = 0; v < g.vertex_count(); ++v) pass &= g.speak_out_degree(v) == 2;
  pass &= diameter(g) == std::optional<long>(4);

  const auto p = directed_params(Rational(9, 10), Horizon::finite(4));
  pass &= is_edge_stable(g, p);
  pass &= is_symmetric(g, p);
  // welfare identity n*((n-1) - c*d), evaluated exactly: 24*(23 - 9/10*2)
  pass &= welfare(g, p) == Rational(24) * (Rational(23) - Rational(9, 10) * Rational(2));
  pass &= welfare(g, p) == Rational(2544, 5);
  timer.finish(pass);
}

TEST_CASE("criterion 4: the cycle is the unique efficient shape") {
  CriterionTimer timer(4, "census maximizers are exactly the labeled directed cycles", 30.0);
  bool pass = true;

  const auto is_labeled_cycle = [](const BidirectedGraph& g) {
    for (int v = 0; v < g.vertex_count(); ++v)
      if (g.speak_out_degree(v) != 1) return false;
    return condense_sccs(g).component_count() == 1;
  };

  const auto c3 = enumerate_all(3, directed_params(Rational(1)), Mode::directed);
  pass &= c3.graph_count == 64;
  pass &= c3.efficient_graphs.size() == 2;  // (3-1)! labelings of one class
  for (const auto& g : c3.efficient_graphs) pass &= is_labeled_cycle(g);
  pass &= c3.max_welfare == Rational(3);

  const auto c4 = enumerate_all(4, directed_params(Rational(1)), Mode::directed);
  pass &= c4.graph_count == 4096;
  pass &= c4.efficient_graphs.size() == 6;  // (4-1)! labelings of one class
  for (const auto& g : c4.efficient_graphs) pass &= is_labeled_cycle(g);
  pass &= c4.max_welfare == Rational(8);
  timer.finish(pass);
}

TEST_CASE("criterion 5: extremal parameter censuses") {
  CriterionTimer timer(5, "overpriced, horizon-one, and boundary-cost censuses", 60.0);
  bool pass = true;

  // (a) cost above n-1: only the empty graph survives
  const auto expensive = enumerate_all(4, directed_params(Rational(4)), Mode::directed);
  pass &= expensive.stable_graphs.size() == 1 && expensive.stable_graphs[0].edge_count() == 0;

  // (b) horizon one, cheap edges: the complete graph is the unique stable
  // graph and the unique welfare maximizer
  const auto cheap =
      enumerate_all(4, directed_params(Rational(1, 2), Horizon::finite(1)), Mode::directed);
  pass &= cheap.stable_graphs.size() == 1 &&
          cheap.stable_graphs[0] == make_complete(4, Mode::directed);
  pass &= cheap.efficient_graphs.size() == 1 &&
          cheap.efficient_graphs[0] == make_complete(4, Mode::directed);

  // (c) bidirected boundary costs at horizon one: every enumerated graph is
  // both stable and welfare-maximal
  const auto boundary =
      enumerate_all(3, {Rational(1), Rational(1), Horizon::finite(1)}, Mode::bidirected);
  const bool all_stable =
      boundary.stable_graphs.size() == static_cast<std::size_t>(boundary.graph_count);
  const bool all_maximal =
      boundary.efficient_graphs.size() == static_cast<std::size_t>(boundary.graph_count);
  if (!(all_stable && all_maximal))
    std::cout << "  [criterion 5c] " << boundary.stable_graphs.size() << " of "
              << boundary.graph_count << " graphs stable, " << boundary.efficient_graphs.size()
              << " welfare-maximal: graphs with incomplete edges carry removable edges and"
                 " negative welfare, so the all-graphs claim does not hold under the"
                 " complete-hop utility definitions" << std::endl;
  pass &= all_stable && all_maximal;
  timer.finish(pass);
}

TEST_CASE("criterion 6: anarchy and stability ratios") {
  CriterionTimer timer(6, "census reports poa 0 and pos 1 at n=3, unit cost", 5.0);
  const auto census = enumerate_all(3, directed_params(Rational(1)), Mode::directed);
  bool pass = census.poa.has_value() && census.pos.has_value();
  if (pass) {
    pass &= *census.poa == Rational(0);
    pass &= *census.pos == Rational(1);
  }
  timer.finish(pass);
}

TEST_CASE("criterion 7: bidirected convergence with monitored invariants") {
  CriterionTimer timer(7, "100 seeded bidirected runs converge; run invariants hold", 120.0);
  const ModelParams p{Rational(7, 10), Rational(7, 10), Horizon::finite(3)};
  int converged = 0;
  bool potential_ok = true;
  bool resurrection_ok = true;
  bool replay_ok = true;
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = make_random(6, Mode::bidirected, Rational(2, 5), 1000 + trial);
    DynamicsConfig cfg{.seed = 5000ull + trial, .max_rounds = 1000000,
                       .variant = DynamicsVariant::edge};
    const auto trace = run_edge_dynamics(g, p, cfg);
    if (trace.converged) ++converged;
    const auto audit = audit_trace(trace);
    if (!audit.potential_monotone_ok && potential_ok) {
      potential_ok = false;
      std::cout << "  [criterion 7] trial " << trial << ": " << audit.first_violation
                << std::endl;
    }
    resurrection_ok &= audit.no_resurrection_ok;
    replay_ok &= audit.replay_matches_final && audit.preconditions_ok &&
                 audit.converged_verdict_ok;
  }
  std::cout << "  [criterion 7] converged " << converged << "/100" << std::endl;
  timer.finish(converged == 100 && potential_ok && resurrection_ok && replay_ok);
}

TEST_CASE("criterion 8: directed convergence at the infinite horizon") {
  CriterionTimer timer(8, "at least 95 of 100 seeded directed runs converge", 300.0);
  const auto p = directed_params(Rational(3, 2));
  int converged = 0;
  bool endpoints_stable = true;
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = make_random(8, Mode::directed, Rational(3, 10), 2000 + trial);
    DynamicsConfig cfg{.seed = 7000ull + trial, .max_rounds = 1000000,
                       .variant = DynamicsVariant::edge};
    const auto trace = run_edge_dynamics(g, p, cfg);
    if (trace.converged) {
      ++converged;
      endpoints_stable &= is_edge_stable(trace.final_graph, p);
    }
  }
  std::cout << "  [criterion 8] converged " << converged << "/100" << std::endl;
  timer.finish(converged >= 95 && endpoints_stable);
}

TEST_CASE("criterion 9: convergence paths terminate and stay valid") {
  CriterionTimer timer(9, "200 random convergence paths: cap, move validity, stability", 120.0);
  bool pass = true;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 9;  // n up to 10
    const auto p = directed_params(trial % 2 ? Rational(3, 2) : Rational(5, 2));
    const int density = 15 + (trial % 4) * 12;
    const auto g = test_support::scrambled_graph(n, Mode::directed, 3000 + trial, density);
    const auto result = converge_path(g, p);
    pass &= static_cast<long>(result.moves.size()) <= 16L * n * n * n;
    pass &= is_edge_stable(result.stable_graph, p);

    BidirectedGraph replay = g;
    for (const PathMove& move : result.moves) {
      const auto wanted =
          move.action == EdgeAction::add ? EdgeStatus::addable : EdgeStatus::removable;
      pass &= edge_status(replay, p, move.edge) == wanted;
      replay.apply(move.edge, move.action);
    }
    pass &= replay == result.stable_graph;
    if (!pass) {
      std::cout << "  [criterion 9] failure at trial " << trial << std::endl;
      break;
    }
  }
  timer.finish(pass);
}

TEST_CASE("criterion 10: stability oracle agreement") {
  CriterionTimer timer(10, "single-edge stability agrees with exhaustive best response", 60.0);
  bool pass = true;

  const auto agree = [&](const BidirectedGraph& g, const ModelParams& p) {
    const bool stable = is_edge_stable(g, p);
    const bool nash = is_nash_bruteforce(g, p);
    if (stable != nash) {
      std::cout << "  [criterion 10] named-graph disagreement (n=" << g.vertex_count() << ")"
                << std::endl;
      return false;
    }
    return true;
  };

  pass &= agree(BidirectedGraph(4, Mode::directed), directed_params(Rational(4)));
  pass &= agree(BidirectedGraph(3, Mode::directed), directed_params(Rational(1)));
  pass &= agree(make_cycle(3, Mode::directed), directed_params(Rational(1)));
  pass &= agree(make_cycle(4, Mode::directed), directed_params(Rational(1)));
  pass &= agree(make_complete(4, Mode::directed),
                directed_params(Rational(1, 2), Horizon::finite(1)));
  pass &= agree(make_complete(3, Mode::directed),
                directed_params(Rational(1, 2), Horizon::finite(1)));
  pass &= agree(make_balanced_flower(10, 6, Mode::directed),
                directed_params(Rational(3, 2), Horizon::finite(6)));
  pass &= agree(make_kautz(2, 3, Mode::directed),
                directed_params(Rational(9, 10), Horizon::finite(3)));

  // Exploratory sweep: all 64 labeled directed graphs on three vertices.
  // Disagreements are recorded as a counterexample artifact, not failures.
  nlohmann::json log = nlohmann::json::array();
  for (std::uint64_t mask = 0; mask < 64; ++mask) {
    BidirectedGraph g(3, Mode::directed);
    int bit = 0;
    for (int t = 0; t < 3; ++t)
      for (int h = 0; h < 3; ++h) {
        if (t == h) continue;
        if (mask & (1ull << bit)) g.add_edge(speak(t, h));
        ++bit;
      }
    for (const Rational& c : {Rational(1, 2), Rational(1), Rational(3, 2)})
      for (const Horizon& k : {Horizon::finite(2), Horizon::infinite()}) {
        const auto p = directed_params(c, k);
        const bool stable = is_edge_stable(g, p);
        const bool nash = is_nash_bruteforce(g, p);
        if (stable != nash)
          log.push_back({{"graph", nlohmann::json::parse(encode(g))},
                         {"cs", to_string(c)},
                         {"k", to_string(k)},
                         {"edge_stable", stable},
                         {"nash", nash}});
      }
  }
  write_text_file((artifact_dir() / "stability_nash_disagreements.json").string(),
                  log.dump(2) + "\n");
  std::cout << "  [criterion 10] sweep disagreements logged: " << log.size() << std::endl;
  timer.finish(pass);
}

TEST_CASE("criterion 11: clustering coefficients") {
  CriterionTimer timer(11, "clustering values and dimension monotonicity", 60.0);
  bool pass = true;

  pass &= clustering_global(make_complete(3, Mode::bidirected), 1) ==
          std::vector<Rational>{Rational(1)};
  pass &= clustering_global(make_cycle(3, Mode::directed), 1) ==
          std::vector<Rational>{Rational(0)};
  pass &= clustering_global(BidirectedGraph(5, Mode::directed), 4) ==
          std::vector<Rational>(4, Rational(0));

  for (int trial = 0; trial < 100 && pass; ++trial) {
    const auto g = test_support::scrambled_graph(8, Mode::directed, 4000 + trial, 30);
    const auto vec = clustering_global(g, 5);
    for (std::size_t i = 1; i < vec.size(); ++i) pass &= vec[i - 1] <= vec[i];
  }
  timer.finish(pass);
}

TEST_CASE("criterion 12: rerunning a seeded command reproduces artifacts byte for byte") {
  CriterionTimer timer(12, "dynamics and census artifacts are bitwise reproducible", 60.0);
  const char* bin = std::getenv("NETFORM_BIN");
  REQUIRE(bin != nullptr);
  const auto dir = artifact_dir();
  const std::string graph_path = (dir / "determinism_graph.json").string();

  const auto run = [&](const std::string& args) {
    const std::string command = std::string(bin) + " " + args + " > /dev/null 2>&1";
    return std::system(command.c_str());
  };

  bool pass = true;
  pass &= run("generate --type random --n 6 --mode bidirected --p 0.4 --seed 11 --out " +
              graph_path) == 0;

  const std::string t1 = (dir / "trace_a.tsv").string();
  const std::string t2 = (dir / "trace_b.tsv").string();
  const std::string f1 = (dir / "final_a.json").string();
  const std::string f2 = (dir / "final_b.json").string();
  const std::string dyn_args = " --cs 0.7 --cl 0.7 --k 3 --seed 7 --max-rounds 1000000";
  pass &= run("dynamics --graph " + graph_path + dyn_args + " --trace-out " + t1 +
              " --final-out " + f1) == 0;
  pass &= run("dynamics --graph " + graph_path + dyn_args + " --trace-out " + t2 +
              " --final-out " + f2) == 0;
  pass &= read_text_file(t1) == read_text_file(t2);
  pass &= read_text_file(f1) == read_text_file(f2);

  const std::string c1 = (dir / "census_a.json").string();
  const std::string c2 = (dir / "census_b.json").string();
  pass &= run("census --n 3 --mode directed --cs 1 --k inf --out " + c1) == 0;
  pass &= run("census --n 3 --mode directed --cs 1 --k inf --out " + c2) == 0;
  pass &= read_text_file(c1) == read_text_file(c2);
  timer.finish(pass);
}
