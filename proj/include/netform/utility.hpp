#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "netform/graph.hpp"
#include "netform/params.hpp"
#include "netform/rational.hpp"

namespace netform {

namespace detail {

/// Depth-bounded BFS over the complete-hop relation in the given direction.
/// Marks every vertex reachable from v within the horizon; v itself is marked
/// visited but never counted (an agent does not reach herself).
inline long bounded_reach(const BidirectedGraph& g, Horizon k, Layer direction, int v,
                          std::vector<std::uint8_t>* visited_out = nullptr) {
  const int n = g.vertex_count();
  if (v < 0 || v >= n) throw std::invalid_argument("vertex out of range");
  std::vector<std::uint8_t> visited(static_cast<std::size_t>(n), 0);
  visited[static_cast<std::size_t>(v)] = 1;
  std::vector<int> frontier{v};
  std::vector<int> next;
  long reached = 0;
  const long depth_cap = k.effective_depth(n);
  for (long depth = 0; depth < depth_cap && !frontier.empty(); ++depth) {
    next.clear();
    for (int u : frontier)
      for (int w = 0; w < n; ++w) {
        if (visited[static_cast<std::size_t>(w)] || !g.hop(direction, u, w)) continue;
        visited[static_cast<std::size_t>(w)] = 1;
        next.push_back(w);
        ++reached;
      }
    frontier.swap(next);
  }
  if (visited_out) *visited_out = std::move(visited);
  return reached;
}

}  // namespace detail

/// Vertices reachable from v within k complete hops, ascending order.
inline std::vector<int> reach_set(const BidirectedGraph& g, Horizon k, Layer direction, int v) {
  std::vector<std::uint8_t> visited;
  detail::bounded_reach(g, k, direction, v, &visited);
  std::vector<int> out;
  for (int w = 0; w < g.vertex_count(); ++w)
    if (w != v && visited[static_cast<std::size_t>(w)]) out.push_back(w);
  return out;
}

inline long reach_count(const BidirectedGraph& g, Horizon k, Layer direction, int v) {
  return detail::bounded_reach(g, k, direction, v);
}

struct UtilityBreakdown {
  long speak_reach = 0;
  long listen_reach = 0;
  long ds_out = 0;
  long dl_out = 0;
  Rational u_speak;
  Rational u_listen;
  Rational u_total;
};

/// Per-agent utility: reached agents minus maintained edges, on each layer.
/// Directed mode carries only the speaking portion (listening is free and
/// implicitly complete, so its terms are reported as zero).
inline UtilityBreakdown utility(const BidirectedGraph& g, const ModelParams& p, int v) {
  p.validate(g.mode());
  UtilityBreakdown out;
  out.speak_reach = reach_count(g, p.horizon, Layer::speaking, v);
  out.ds_out = g.speak_out_degree(v);
  out.u_speak = Rational(out.speak_reach) - p.speak_cost * Rational(out.ds_out);
  if (!g.directed()) {
    out.listen_reach = reach_count(g, p.horizon, Layer::listening, v);
    out.dl_out = g.listen_out_degree(v);
    out.u_listen = Rational(out.listen_reach) - p.listen_cost * Rational(out.dl_out);
  }
  out.u_total = out.u_speak + out.u_listen;
  return out;
}

inline Rational welfare(const BidirectedGraph& g, const ModelParams& p) {
  Rational total;
  for (int v = 0; v < g.vertex_count(); ++v) total += utility(g, p, v).u_total;
  return total;
}

enum class EdgeStatus { addable, removable, neutral_present, neutral_absent };

inline std::string to_string(EdgeStatus s) {
  switch (s) {
    case EdgeStatus::addable: return "addable";
    case EdgeStatus::removable: return "removable";
    case EdgeStatus::neutral_present: return "neutral-present";
    case EdgeStatus::neutral_absent: return "neutral-absent";
  }
  return "?";
}

namespace detail {

/// Tail's utility restricted to the layer a toggle can affect. Toggling one
/// of v's speaking edges cannot change v's listening reach: the toggled edge
/// only participates in listening hops pointing INTO v, and a walk from v
/// that revisits v never reaches anything its own suffix would not.
inline Rational side_utility(const BidirectedGraph& g, const ModelParams& p, Layer layer, int v) {
  if (layer == Layer::speaking)
    return Rational(reach_count(g, p.horizon, Layer::speaking, v)) -
           p.speak_cost * Rational(g.speak_out_degree(v));
  return Rational(reach_count(g, p.horizon, Layer::listening, v)) -
         p.listen_cost * Rational(g.listen_out_degree(v));
}

inline void validate_edge_query(const BidirectedGraph& g, const EdgeRef& e) {
  if (e.tail < 0 || e.tail >= g.vertex_count() || e.head < 0 || e.head >= g.vertex_count())
    throw std::invalid_argument("edge endpoint out of range");
  if (e.tail == e.head) throw std::invalid_argument("self-loops are not allowed");
  if (g.directed() && e.layer == Layer::listening)
    throw std::invalid_argument("directed mode restricts edge queries to the speaking layer");
}

/// Classifies e against the scratch graph, toggling it in place and undoing
/// the toggle before returning. `base` is the tail's current side utility.
inline EdgeStatus status_against(BidirectedGraph& scratch, const ModelParams& p, const EdgeRef& e,
                                 const Rational& base) {
  const bool present = scratch.has_edge(e);
  scratch.apply(e, present ? EdgeAction::remove : EdgeAction::add);
  const Rational toggled = side_utility(scratch, p, e.layer, e.tail);
  scratch.apply(e, present ? EdgeAction::add : EdgeAction::remove);
  if (present)
    return toggled > base ? EdgeStatus::removable : EdgeStatus::neutral_present;
  return toggled > base ? EdgeStatus::addable : EdgeStatus::neutral_absent;
}

}  // namespace detail

/// Classification of one potential edge by exact utility comparison for its
/// tail agent; both inequalities are strict, so ties stay neutral.
inline EdgeStatus edge_status(const BidirectedGraph& g, const ModelParams& p, const EdgeRef& e) {
  p.validate(g.mode());
  detail::validate_edge_query(g, e);
  BidirectedGraph scratch = g;
  const Rational base = detail::side_utility(scratch, p, e.layer, e.tail);
  return detail::status_against(scratch, p, e, base);
}

struct Classification {
  std::vector<EdgeRef> addable;
  std::vector<EdgeRef> removable;

  bool empty() const { return addable.empty() && removable.empty(); }
};

/// Status of every potential edge (both layers in bidirected mode), emitted
/// in lexicographic EdgeRef order.
inline Classification classify_all(const BidirectedGraph& g, const ModelParams& p) {
  p.validate(g.mode());
  Classification out;
  BidirectedGraph scratch = g;
  const int n = g.vertex_count();
  const Layer layers[] = {Layer::speaking, Layer::listening};
  for (Layer layer : layers) {
    if (layer == Layer::listening && g.directed()) continue;
    for (int t = 0; t < n; ++t) {
      const Rational base = detail::side_utility(scratch, p, layer, t);
      for (int h = 0; h < n; ++h) {
        if (t == h) continue;
        const EdgeRef e{layer, t, h};
        switch (detail::status_against(scratch, p, e, base)) {
          case EdgeStatus::addable: out.addable.push_back(e); break;
          case EdgeStatus::removable: out.removable.push_back(e); break;
          default: break;
        }
      }
    }
  }
  return out;
}

/// Induction measure of the bidirected convergence argument: complete edges
/// plus all edges, both layers counted.
inline long potential(const BidirectedGraph& g) {
  if (g.directed()) throw std::invalid_argument("potential is defined for bidirected graphs");
  long complete = 0;
  long edges = 0;
  for (auto [t, h] : g.edges(Layer::speaking)) {
    ++edges;
    if (g.listen_edge(h, t)) ++complete;
  }
  for (auto [t, h] : g.edges(Layer::listening)) {
    ++edges;
    if (g.speak_edge(h, t)) ++complete;
  }
  return complete + edges;
}

}  // namespace netform
