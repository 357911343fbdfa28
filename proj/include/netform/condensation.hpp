#pragma once

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "netform/graph.hpp"
#include "netform/rational.hpp"

namespace netform {

/// Strongly connected components of the speaking-hop digraph together with
/// the acyclic component-level graph. Components are numbered by their
/// smallest contained vertex so downstream tie-breaking is deterministic.
struct Condensation {
  std::vector<std::vector<int>> components;     // each sorted ascending
  std::vector<int> component_of;                // vertex -> component index
  std::vector<std::pair<int, int>> dag_edges;   // sorted, deduplicated, acyclic
  std::vector<int> component_sizes;
  std::vector<bool> large_flags;                // size > threshold, when given
  bool has_threshold = false;

  int component_count() const { return static_cast<int>(components.size()); }
};

/// Tarjan over the speaking hops (in bidirected mode that is the projection
/// onto complete speaking edges). When a cost threshold is supplied, marks
/// the components whose size strictly exceeds it.
inline Condensation condense_sccs(const BidirectedGraph& g,
                                  std::optional<Rational> large_threshold = std::nullopt) {
  const int n = g.vertex_count();
  std::vector<int> index(static_cast<std::size_t>(n), -1);
  std::vector<int> lowlink(static_cast<std::size_t>(n), 0);
  std::vector<bool> on_stack(static_cast<std::size_t>(n), false);
  std::vector<int> stack;
  std::vector<int> raw_component(static_cast<std::size_t>(n), -1);
  int next_index = 0;
  int raw_count = 0;

  struct Frame {
    int vertex;
    int next_head;
  };
  std::vector<Frame> call_stack;

  for (int root = 0; root < n; ++root) {
    if (index[static_cast<std::size_t>(root)] != -1) continue;
    call_stack.push_back({root, 0});
    index[static_cast<std::size_t>(root)] = lowlink[static_cast<std::size_t>(root)] = next_index++;
    stack.push_back(root);
    on_stack[static_cast<std::size_t>(root)] = true;

    while (!call_stack.empty()) {
      Frame& frame = call_stack.back();
      const int v = frame.vertex;
      bool descended = false;
      while (frame.next_head < n) {
        const int w = frame.next_head++;
        if (w == v || !g.speak_hop(v, w)) continue;
        if (index[static_cast<std::size_t>(w)] == -1) {
          index[static_cast<std::size_t>(w)] = lowlink[static_cast<std::size_t>(w)] = next_index++;
          stack.push_back(w);
          on_stack[static_cast<std::size_t>(w)] = true;
          call_stack.push_back({w, 0});
          descended = true;
          break;
        }
        if (on_stack[static_cast<std::size_t>(w)])
          lowlink[static_cast<std::size_t>(v)] =
              std::min(lowlink[static_cast<std::size_t>(v)], index[static_cast<std::size_t>(w)]);
      }
      if (descended) continue;

      if (lowlink[static_cast<std::size_t>(v)] == index[static_cast<std::size_t>(v)]) {
        for (;;) {
          const int w = stack.back();
          stack.pop_back();
          on_stack[static_cast<std::size_t>(w)] = false;
          raw_component[static_cast<std::size_t>(w)] = raw_count;
          if (w == v) break;
        }
        ++raw_count;
      }
      call_stack.pop_back();
      if (!call_stack.empty()) {
        const int parent = call_stack.back().vertex;
        lowlink[static_cast<std::size_t>(parent)] =
            std::min(lowlink[static_cast<std::size_t>(parent)], lowlink[static_cast<std::size_t>(v)]);
      }
    }
  }

  // Renumber components by smallest contained vertex.
  std::vector<int> renumber(static_cast<std::size_t>(raw_count), -1);
  Condensation out;
  out.component_of.assign(static_cast<std::size_t>(n), -1);
  for (int v = 0; v < n; ++v) {
    const int raw = raw_component[static_cast<std::size_t>(v)];
    if (renumber[static_cast<std::size_t>(raw)] == -1) {
      renumber[static_cast<std::size_t>(raw)] = static_cast<int>(out.components.size());
      out.components.emplace_back();
    }
    const int id = renumber[static_cast<std::size_t>(raw)];
    out.component_of[static_cast<std::size_t>(v)] = id;
    out.components[static_cast<std::size_t>(id)].push_back(v);
  }
  for (const auto& members : out.components)
    out.component_sizes.push_back(static_cast<int>(members.size()));

  for (int v = 0; v < n; ++v)
    for (int w = 0; w < n; ++w) {
      if (v == w || !g.speak_hop(v, w)) continue;
      const int a = out.component_of[static_cast<std::size_t>(v)];
      const int b = out.component_of[static_cast<std::size_t>(w)];
      if (a != b) out.dag_edges.emplace_back(a, b);
    }
  std::sort(out.dag_edges.begin(), out.dag_edges.end());
  out.dag_edges.erase(std::unique(out.dag_edges.begin(), out.dag_edges.end()),
                      out.dag_edges.end());

  if (large_threshold) {
    out.has_threshold = true;
    for (int size : out.component_sizes)
      out.large_flags.push_back(Rational(size) > *large_threshold);
  }
  return out;
}

/// Component-level reachability closure: reach[a][b] is true when component b
/// is reachable from component a through the condensation DAG (a != b).
inline std::vector<std::vector<bool>> component_reachability(const Condensation& c) {
  const int m = c.component_count();
  std::vector<std::vector<bool>> reach(static_cast<std::size_t>(m),
                                       std::vector<bool>(static_cast<std::size_t>(m), false));
  for (auto [a, b] : c.dag_edges) reach[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = true;
  // Repeated relaxation; component counts are desk scale.
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto [a, b] : c.dag_edges)
      for (int t = 0; t < m; ++t)
        if (reach[static_cast<std::size_t>(b)][static_cast<std::size_t>(t)] &&
            !reach[static_cast<std::size_t>(a)][static_cast<std::size_t>(t)]) {
          reach[static_cast<std::size_t>(a)][static_cast<std::size_t>(t)] = true;
          changed = true;
        }
  }
  return reach;
}

}  // namespace netform
