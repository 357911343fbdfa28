#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "netform/netform.hpp"
#include "test_support.hpp"

using namespace netform;

namespace {

const ModelParams kBidirected{Rational(7, 10), Rational(7, 10), Horizon::finite(3)};

ModelParams directed_params(Rational cs) { return {cs, Rational(0), Horizon::infinite()}; }

}  // namespace

TEST_CASE("edge selection rule") {
  SECTION("an incomplete edge is deleted when selected") {
    BidirectedGraph g(2, Mode::bidirected);
    g.add_edge(speak(0, 1));
    const ModelParams p{Rational(1), Rational(1), Horizon::infinite()};
    CHECK(apply_edge_selection(g, p, speak(0, 1)) == EdgeAction::remove);
    CHECK(g.edge_count() == 0);
  }
  SECTION("selections on a stable graph are no-ops") {
    auto g = make_cycle(4, Mode::directed);
    const auto before = g;
    for (int t = 0; t < 4; ++t)
      for (int h = 0; h < 4; ++h)
        if (t != h) CHECK_FALSE(apply_edge_selection(g, directed_params(Rational(1)), speak(t, h)));
    CHECK(g == before);
  }
  SECTION("an addable selection lands") {
    BidirectedGraph g(3, Mode::directed);
    CHECK(apply_edge_selection(g, directed_params(Rational(1, 2)), speak(0, 1)) ==
          EdgeAction::add);
    CHECK(g.speak_edge(0, 1));
  }
}

TEST_CASE("edge steps draw uniformly over the potential edge space") {
  BidirectedGraph g(3, Mode::bidirected);
  SplitMix64 rng(5);
  std::set<std::pair<int, std::pair<int, int>>> seen;
  for (int i = 0; i < 4000; ++i) {
    const auto event = edge_step(g, kBidirected, rng, i);
    CHECK(event.kind == SelectionKind::edge);
    CHECK(event.edge.tail != event.edge.head);
    seen.insert({event.edge.layer == Layer::speaking ? 0 : 1,
                 {event.edge.tail, event.edge.head}});
  }
  CHECK(seen.size() == 12);  // 2 layers x 6 ordered pairs on the empty stable graph
}

TEST_CASE("edge dynamics converge and replay cleanly") {
  SECTION("stable input converges with zero mutations") {
    const auto g = make_cycle(4, Mode::directed);
    DynamicsConfig cfg{.seed = 3, .max_rounds = 100, .variant = DynamicsVariant::edge};
    const auto trace = run_edge_dynamics(g, directed_params(Rational(1)), cfg);
    CHECK(trace.converged);
    CHECK(trace.rounds_used == 0);
    CHECK(trace.mutation_count == 0);
    CHECK(trace.final_graph == g);
  }
  SECTION("same seed, same trace") {
    const auto g = make_random(6, Mode::bidirected, Rational(2, 5), 12);
    DynamicsConfig cfg{.seed = 7, .max_rounds = 200000, .variant = DynamicsVariant::edge};
    const auto a = run_edge_dynamics(g, kBidirected, cfg);
    const auto b = run_edge_dynamics(g, kBidirected, cfg);
    CHECK(a.events == b.events);
    CHECK(a.final_graph == b.final_graph);
    CHECK(render_trace(a) == render_trace(b));
    cfg.seed = 8;
    const auto c = run_edge_dynamics(g, kBidirected, cfg);
    CHECK(render_trace(a) != render_trace(c));
  }
  SECTION("bidirected runs converge to stable graphs with complete edges") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto g = test_support::scrambled_graph(6, Mode::bidirected, seed * 101, 40);
      DynamicsConfig cfg{.seed = seed, .max_rounds = 1000000, .variant = DynamicsVariant::edge};
      const auto trace = run_edge_dynamics(g, kBidirected, cfg);
      REQUIRE(trace.converged);
      CHECK(is_edge_stable(trace.final_graph, kBidirected));
      for (auto [t, h] : trace.final_graph.edges(Layer::speaking))
        CHECK(is_complete_edge(trace.final_graph, speak(t, h)));
      for (auto [t, h] : trace.final_graph.edges(Layer::listening))
        CHECK(is_complete_edge(trace.final_graph, listen(t, h)));

      const auto audit = audit_trace(trace);
      INFO(audit.first_violation);
      CHECK(audit.replay_matches_final);
      CHECK(audit.preconditions_ok);
      CHECK(audit.welfare_consistent);
      CHECK(audit.converged_verdict_ok);
      CHECK(audit.no_resurrection_ok);
    }
  }
  SECTION("a converged endpoint yields no further mutations under any seed") {
    const auto g = test_support::scrambled_graph(5, Mode::bidirected, 77, 40);
    DynamicsConfig cfg{.seed = 4, .max_rounds = 1000000, .variant = DynamicsVariant::edge};
    const auto trace = run_edge_dynamics(g, kBidirected, cfg);
    REQUIRE(trace.converged);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      DynamicsConfig again{.seed = seed, .max_rounds = 500, .variant = DynamicsVariant::edge};
      const auto rerun = run_edge_dynamics(trace.final_graph, kBidirected, again);
      CHECK(rerun.converged);
      CHECK(rerun.mutation_count == 0);
    }
  }
}

TEST_CASE("vertex selection rule") {
  SECTION("incomplete speaking out-edges are deleted together") {
    BidirectedGraph g(3, Mode::bidirected);
    g.add_edge(speak(0, 1));
    g.add_edge(speak(0, 2));
    g.add_edge(listen(2, 0));  // makes 0->2 complete; 0->1 stays incomplete
    g.add_edge(speak(2, 1));
    const ModelParams p{Rational(1, 2), Rational(1, 2), Horizon::infinite()};
    auto changes = apply_vertex_selection(g, p, 0, Layer::speaking, EdgeAction::remove,
                                          VertexApplication::simultaneous);
    REQUIRE(changes.size() == 1);
    CHECK(changes[0].edge == speak(0, 1));
    CHECK_FALSE(g.speak_edge(0, 1));
    CHECK(g.speak_edge(0, 2));
  }
  SECTION("stable graph: every selection is a no-op") {
    auto g = make_cycle(4, Mode::bidirected);
    const ModelParams p{Rational(1), Rational(1), Horizon::infinite()};
    for (int v = 0; v < 4; ++v)
      for (Layer layer : {Layer::speaking, Layer::listening})
        for (EdgeAction action : {EdgeAction::add, EdgeAction::remove})
          CHECK(apply_vertex_selection(g, p, v, layer, action,
                                       VertexApplication::simultaneous)
                    .empty());
  }
  SECTION("nothing is addable from the empty bidirected graph") {
    BidirectedGraph g(4, Mode::bidirected);
    const ModelParams p{Rational(1), Rational(1), Horizon::infinite()};
    for (int v = 0; v < 4; ++v)
      CHECK(apply_vertex_selection(g, p, v, Layer::speaking, EdgeAction::add,
                                   VertexApplication::simultaneous)
                .empty());
  }
}

TEST_CASE("vertex dynamics") {
  SECTION("stable input converges immediately") {
    const auto g = make_cycle(4, Mode::bidirected);
    DynamicsConfig cfg{.seed = 1, .max_rounds = 50, .variant = DynamicsVariant::vertex};
    const auto trace = run_vertex_dynamics(g, {Rational(1), Rational(1), Horizon::infinite()}, cfg);
    CHECK(trace.converged);
    CHECK(trace.mutation_count == 0);
  }
  SECTION("a graph of only incomplete edges dissolves to empty") {
    // At unit costs completing a half pair gains at most its cost, so no
    // addition ever fires and every incomplete edge eventually goes.
    BidirectedGraph g(4, Mode::bidirected);
    g.add_edge(speak(0, 1));
    g.add_edge(speak(1, 2));
    g.add_edge(listen(3, 0));
    g.add_edge(listen(2, 3));
    const ModelParams unit{Rational(1), Rational(1), Horizon::finite(3)};
    DynamicsConfig cfg{.seed = 9, .max_rounds = 10000, .variant = DynamicsVariant::vertex};
    const auto trace = run_vertex_dynamics(g, unit, cfg);
    REQUIRE(trace.converged);
    CHECK(trace.final_graph.edge_count() == 0);
    const auto audit = audit_trace(trace);
    INFO(audit.first_violation);
    CHECK(audit.clean());
  }
  SECTION("determinism and rejection of directed inputs") {
    const auto g = test_support::scrambled_graph(5, Mode::bidirected, 55, 40);
    DynamicsConfig cfg{.seed = 21, .max_rounds = 100000, .variant = DynamicsVariant::vertex};
    const auto a = run_vertex_dynamics(g, kBidirected, cfg);
    const auto b = run_vertex_dynamics(g, kBidirected, cfg);
    CHECK(render_trace(a) == render_trace(b));
    DynamicsConfig bad{.seed = 1, .max_rounds = 10, .variant = DynamicsVariant::vertex};
    CHECK_THROWS_AS(
        run_vertex_dynamics(BidirectedGraph(3, Mode::directed), directed_params(Rational(1)), bad),
        std::invalid_argument);
  }
}

TEST_CASE("trace rendering carries the header and rows") {
  const auto g = make_random(5, Mode::bidirected, Rational(2, 5), 31);
  DynamicsConfig cfg{.seed = 11, .max_rounds = 50000, .variant = DynamicsVariant::edge};
  const auto trace = run_edge_dynamics(g, kBidirected, cfg);
  const std::string text = render_trace(trace);
  CHECK(text.find("# netform-trace/1\n") != std::string::npos);
  CHECK(text.find("# generator: splitmix64\n") != std::string::npos);
  CHECK(text.find("# seed: 11\n") != std::string::npos);
  CHECK(text.find("# cs: 7/10\n") != std::string::npos);
  CHECK(text.find("# proven_regime: true\n") != std::string::npos);
  CHECK(text.find("round\tlayer\ttail\thead\taction\twelfare_after\tpotential_after\n") !=
        std::string::npos);
}

TEST_CASE("convergence path on named inputs") {
  SECTION("stable input emits no moves") {
    const auto result = converge_path(make_cycle(5, Mode::directed), directed_params(Rational(1)));
    CHECK(result.moves.empty());
    CHECK(result.stable_graph == make_cycle(5, Mode::directed));
  }
  SECTION("empty graph above the unit gain stays empty") {
    const auto result =
        converge_path(BidirectedGraph(5, Mode::directed), directed_params(Rational(3, 2)));
    CHECK(result.moves.empty());
    CHECK(result.stable_graph.edge_count() == 0);
  }
  SECTION("two disjoint 4-cycles are stitched with exactly two additions") {
    BidirectedGraph g(8, Mode::directed);
    for (int i = 0; i < 4; ++i) g.add_edge(speak(i, (i + 1) % 4));
    for (int i = 0; i < 4; ++i) g.add_edge(speak(4 + i, 4 + (i + 1) % 4));
    const auto result = converge_path(g, directed_params(Rational(2)));
    REQUIRE(result.moves.size() == 2);
    CHECK(result.moves[0] == PathMove{speak(4, 0), EdgeAction::add, 6});
    CHECK(result.moves[1] == PathMove{speak(0, 4), EdgeAction::add, 6});
    CHECK(result.stable_graph.speak_edge_count() == 10);
    CHECK(is_edge_stable(result.stable_graph, directed_params(Rational(2))));
    CHECK(condense_sccs(result.stable_graph).component_count() == 1);
  }
  SECTION("preconditions") {
    CHECK_THROWS_AS(
        converge_path(BidirectedGraph(3, Mode::bidirected), {Rational(1), Rational(1), Horizon::infinite()}),
        std::invalid_argument);
    CHECK_THROWS_AS(
        converge_path(BidirectedGraph(3, Mode::directed), {Rational(1), Rational(0), Horizon::finite(2)}),
        std::invalid_argument);
    CHECK_THROWS_AS(converge_path(BidirectedGraph(3, Mode::directed), directed_params(Rational(0))),
                    std::invalid_argument);
  }
}

TEST_CASE("convergence path drives scrambled graphs to stability") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const int n = 3 + static_cast<int>(seed % 7);
    const auto g = test_support::scrambled_graph(n, Mode::directed, seed * 1009, 30);
    const auto p = directed_params(seed % 2 ? Rational(3, 2) : Rational(5, 2));
    const auto result = converge_path(g, p);
    INFO("seed=" << seed << " n=" << n);
    CHECK(is_edge_stable(result.stable_graph, p));
    CHECK(static_cast<long>(result.moves.size()) <= 16L * n * n * n);

    // replay: every move qualified at its application point
    BidirectedGraph replay = g;
    for (const PathMove& move : result.moves) {
      const auto status = edge_status(replay, p, move.edge);
      CHECK(status ==
            (move.action == EdgeAction::add ? EdgeStatus::addable : EdgeStatus::removable));
      replay.apply(move.edge, move.action);
    }
    CHECK(replay == result.stable_graph);
  }
}
