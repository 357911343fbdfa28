#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "netform/condensation.hpp"
#include "netform/graph.hpp"
#include "netform/params.hpp"
#include "netform/utility.hpp"

namespace netform {

/// One agent's full strategy: the out-neighborhoods she builds on each layer.
struct Strategy {
  std::vector<int> speak_targets;   // sorted ascending, owner excluded
  std::vector<int> listen_targets;  // empty in directed mode

  friend bool operator==(const Strategy&, const Strategy&) = default;
};

struct AnalysisBudgets {
  int nash_directed_max_n = 16;
  int nash_bidirected_max_n = 10;
  int census_directed_max_n = 4;
  int census_bidirected_max_n = 3;
};

/// A graph is stable exactly when no single edge is addable or removable.
inline bool is_edge_stable(const BidirectedGraph& g, const ModelParams& p) {
  return classify_all(g, p).empty();
}

struct BestResponse {
  Strategy strategy;
  Rational utility;
};

namespace detail {

inline std::vector<int> mask_to_targets(std::uint32_t mask, int v, int n) {
  std::vector<int> targets;
  for (int i = 0; i < n - 1; ++i)
    if (mask & (1u << i)) targets.push_back(i < v ? i : i + 1);
  return targets;
}

inline void install_strategy(BidirectedGraph& g, int v, const Strategy& s) {
  const int n = g.vertex_count();
  for (int h = 0; h < n; ++h) {
    if (h == v) continue;
    if (g.speak_edge(v, h)) g.remove_edge(speak(v, h));
    if (!g.directed() && g.listen_edge(v, h)) g.remove_edge(listen(v, h));
  }
  for (int h : s.speak_targets) g.add_edge(speak(v, h));
  for (int h : s.listen_targets) g.add_edge(listen(v, h));
}

}  // namespace detail

/// Exhaustive best response for one agent, holding everyone else fixed. Ties
/// break toward the smallest strategy (fewest edges, then lexicographically
/// smallest target lists), so the result is deterministic.
inline BestResponse best_response(const BidirectedGraph& g, const ModelParams& p, int v,
                                  const AnalysisBudgets& budgets = {}) {
  p.validate(g.mode());
  const int n = g.vertex_count();
  if (v < 0 || v >= n) throw std::invalid_argument("vertex out of range");
  const int limit = g.directed() ? budgets.nash_directed_max_n : budgets.nash_bidirected_max_n;
  if (n > limit)
    throw std::invalid_argument("best_response budget exceeded: n = " + std::to_string(n) +
                                " > " + std::to_string(limit));

  const std::uint32_t subsets = 1u << (n - 1);
  BidirectedGraph scratch = g;
  std::optional<BestResponse> best;

  auto consider = [&](const Strategy& candidate) {
    detail::install_strategy(scratch, v, candidate);
    const Rational value = utility(scratch, p, v).u_total;
    if (!best || value > best->utility) {
      best = BestResponse{candidate, value};
      return;
    }
    if (value == best->utility) {
      const auto rank = [](const Strategy& s) {
        return std::make_tuple(s.speak_targets.size() + s.listen_targets.size(),
                               s.speak_targets, s.listen_targets);
      };
      if (rank(candidate) < rank(best->strategy)) best->strategy = candidate;
    }
  };

  for (std::uint32_t speak_mask = 0; speak_mask < subsets; ++speak_mask) {
    Strategy candidate{detail::mask_to_targets(speak_mask, v, n), {}};
    if (g.directed()) {
      consider(candidate);
      continue;
    }
    for (std::uint32_t listen_mask = 0; listen_mask < subsets; ++listen_mask) {
      candidate.listen_targets = detail::mask_to_targets(listen_mask, v, n);
      consider(candidate);
    }
  }
  return *best;
}

/// Checks the full deviation space: true iff no agent's exhaustive best
/// response strictly beats her current utility.
inline bool is_nash_bruteforce(const BidirectedGraph& g, const ModelParams& p,
                               const AnalysisBudgets& budgets = {}) {
  for (int v = 0; v < g.vertex_count(); ++v) {
    const Rational current = utility(g, p, v).u_total;
    if (best_response(g, p, v, budgets).utility > current) return false;
  }
  return true;
}

/// Pairwise stability for the bidirected game: no present edge is removable
/// for its tail, and any joint addition of a complete pair that strictly
/// helps one endpoint must strictly hurt the other.
inline bool is_bi_pairwise_stable(const BidirectedGraph& g, const ModelParams& p) {
  if (g.directed())
    throw std::invalid_argument("bi-pairwise stability is defined for bidirected graphs");
  p.validate(g.mode());
  if (!classify_all(g, p).removable.empty()) return false;

  BidirectedGraph scratch = g;
  const int n = g.vertex_count();
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      if (u == v) continue;
      const bool had_speak = g.speak_edge(u, v);
      const bool had_listen = g.listen_edge(v, u);
      if (had_speak && had_listen) continue;
      const Rational u_before = utility(scratch, p, u).u_total;
      const Rational v_before = utility(scratch, p, v).u_total;
      if (!had_speak) scratch.add_edge(speak(u, v));
      if (!had_listen) scratch.add_edge(listen(v, u));
      const Rational u_after = utility(scratch, p, u).u_total;
      const Rational v_after = utility(scratch, p, v).u_total;
      if (!had_speak) scratch.remove_edge(speak(u, v));
      if (!had_listen) scratch.remove_edge(listen(v, u));
      if (u_after > u_before && !(v_after < v_before)) return false;
    }
  return true;
}

inline bool is_symmetric(const BidirectedGraph& g, const ModelParams& p) {
  if (g.vertex_count() == 0) return true;
  const Rational first = utility(g, p, 0).u_total;
  for (int v = 1; v < g.vertex_count(); ++v)
    if (utility(g, p, v).u_total != first) return false;
  return true;
}

/// Longest shortest complete-hop speaking path over ordered pairs; nullopt
/// when the hop digraph is not strongly connected.
inline std::optional<long> diameter(const BidirectedGraph& g) {
  const int n = g.vertex_count();
  long worst = 0;
  for (int v = 0; v < n; ++v) {
    std::vector<long> dist(static_cast<std::size_t>(n), -1);
    dist[static_cast<std::size_t>(v)] = 0;
    std::vector<int> frontier{v};
    long depth = 0;
    while (!frontier.empty()) {
      ++depth;
      std::vector<int> next;
      for (int u : frontier)
        for (int w = 0; w < n; ++w)
          if (dist[static_cast<std::size_t>(w)] == -1 && g.speak_hop(u, w)) {
            dist[static_cast<std::size_t>(w)] = depth;
            next.push_back(w);
          }
      frontier.swap(next);
    }
    for (int w = 0; w < n; ++w) {
      if (dist[static_cast<std::size_t>(w)] == -1) return std::nullopt;
      worst = std::max(worst, dist[static_cast<std::size_t>(w)]);
    }
  }
  return worst;
}

namespace detail {

inline std::vector<Rational> clustering_vector(const BidirectedGraph& g,
                                               const std::vector<EdgeRef>& edges, int dim) {
  if (dim < 1) throw std::invalid_argument("clustering dimension must be >= 1");
  std::vector<Rational> out(static_cast<std::size_t>(dim), Rational(0));
  if (edges.empty()) return out;  // edgeless convention: all zeros
  for (int i = 1; i <= dim; ++i) {
    ModelParams probe{Rational(1), g.directed() ? Rational(0) : Rational(1),
                      Horizon::finite(static_cast<std::uint32_t>(i) + 1)};
    long removable = 0;
    for (const EdgeRef& e : edges)
      if (edge_status(g, probe, e) == EdgeStatus::removable) ++removable;
    out[static_cast<std::size_t>(i - 1)] = Rational(removable, static_cast<long>(edges.size()));
  }
  return out;
}

inline std::vector<EdgeRef> present_edges(const BidirectedGraph& g, std::optional<int> tail) {
  std::vector<EdgeRef> edges;
  for (auto [t, h] : g.edges(Layer::speaking))
    if (!tail || t == *tail) edges.push_back(speak(t, h));
  if (!g.directed())
    for (auto [t, h] : g.edges(Layer::listening))
      if (!tail || t == *tail) edges.push_back(listen(t, h));
  return edges;
}

}  // namespace detail

/// Entry i (1-based) is the fraction of present edges that are removable at
/// unit cost within horizon i+1: edges with a short alternate route around
/// them. Both layers count in bidirected mode.
inline std::vector<Rational> clustering_global(const BidirectedGraph& g, int dim) {
  return detail::clustering_vector(g, detail::present_edges(g, std::nullopt), dim);
}

inline std::vector<Rational> clustering_local(const BidirectedGraph& g, int v, int dim) {
  if (v < 0 || v >= g.vertex_count()) throw std::invalid_argument("vertex out of range");
  return detail::clustering_vector(g, detail::present_edges(g, v), dim);
}

struct AnalysisReport {
  bool edge_stable = false;
  std::optional<bool> nash_stable;        // only when brute force was requested
  std::optional<bool> bi_pairwise_stable; // bidirected mode only
  Rational welfare_total;
  bool symmetric = false;
  std::vector<Rational> clustering;
  std::optional<long> diameter_value;  // nullopt = unreachable pairs exist
};

struct AnalyzeOptions {
  bool with_nash = false;
  int clustering_dim = 1;
  AnalysisBudgets budgets;
};

inline AnalysisReport analyze(const BidirectedGraph& g, const ModelParams& p,
                              const AnalyzeOptions& opts = {}) {
  p.validate(g.mode());
  AnalysisReport report;
  report.edge_stable = is_edge_stable(g, p);
  if (opts.with_nash) report.nash_stable = is_nash_bruteforce(g, p, opts.budgets);
  if (!g.directed()) report.bi_pairwise_stable = is_bi_pairwise_stable(g, p);
  report.welfare_total = welfare(g, p);
  report.symmetric = is_symmetric(g, p);
  report.clustering = clustering_global(g, opts.clustering_dim);
  report.diameter_value = diameter(g);
  return report;
}

struct EquilibriumCensus {
  int n = 0;
  Mode mode = Mode::directed;
  ModelParams params;
  long graph_count = 0;
  std::vector<BidirectedGraph> stable_graphs;     // enumeration order
  std::vector<BidirectedGraph> efficient_graphs;  // welfare maximizers
  Rational max_welfare;
  std::optional<Rational> min_stable_welfare;
  std::optional<Rational> max_stable_welfare;
  // Ratio convention: poa = worst stable welfare / optimal welfare and
  // pos = best stable welfare / optimal welfare, so poa 0 means an
  // arbitrarily bad equilibrium exists. poa_inverse carries the textbook
  // optimal/worst ratio when the worst stable welfare is positive. All three
  // are absent when the optimal welfare is not positive.
  std::optional<Rational> poa;
  std::optional<Rational> pos;
  std::optional<Rational> poa_inverse;
};

using GraphPredicate = std::function<bool(const BidirectedGraph&)>;

/// Visits every labeled graph on n vertices (optionally filtered), recording
/// the stable set, the welfare maximum and its maximizers, and the anarchy /
/// stability ratios.
inline EquilibriumCensus enumerate_all(int n, const ModelParams& p, Mode mode,
                                       const GraphPredicate& predicate = {},
                                       const AnalysisBudgets& budgets = {}) {
  p.validate(mode);
  if (n < 1) throw std::invalid_argument("census needs n >= 1");
  const int limit =
      mode == Mode::directed ? budgets.census_directed_max_n : budgets.census_bidirected_max_n;
  if (n > limit)
    throw std::invalid_argument("census budget exceeded: n = " + std::to_string(n) + " > " +
                                std::to_string(limit));

  const int pair_count = n * (n - 1);
  const int bits = mode == Mode::directed ? pair_count : 2 * pair_count;
  const std::uint64_t space = 1ull << bits;

  EquilibriumCensus census;
  census.n = n;
  census.mode = mode;
  census.params = p;

  bool have_max = false;
  for (std::uint64_t mask = 0; mask < space; ++mask) {
    BidirectedGraph g(n, mode);
    int bit = 0;
    for (int layer_idx = 0; layer_idx < (mode == Mode::directed ? 1 : 2); ++layer_idx)
      for (int t = 0; t < n; ++t)
        for (int h = 0; h < n; ++h) {
          if (t == h) continue;
          if (mask & (1ull << bit))
            g.add_edge({layer_idx == 0 ? Layer::speaking : Layer::listening, t, h});
          ++bit;
        }
    if (predicate && !predicate(g)) continue;
    ++census.graph_count;

    const Rational w = welfare(g, p);
    if (!have_max || w > census.max_welfare) {
      census.max_welfare = w;
      census.efficient_graphs.clear();
      have_max = true;
    }
    if (w == census.max_welfare) census.efficient_graphs.push_back(g);

    if (is_edge_stable(g, p)) {
      census.stable_graphs.push_back(g);
      if (!census.min_stable_welfare || w < *census.min_stable_welfare)
        census.min_stable_welfare = w;
      if (!census.max_stable_welfare || w > *census.max_stable_welfare)
        census.max_stable_welfare = w;
    }
  }

  if (have_max && census.max_welfare > 0 && census.min_stable_welfare) {
    census.poa = *census.min_stable_welfare / census.max_welfare;
    census.pos = *census.max_stable_welfare / census.max_welfare;
    if (*census.min_stable_welfare > 0)
      census.poa_inverse = census.max_welfare / *census.min_stable_welfare;
  }
  return census;
}

}  // namespace netform
