#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "netform/condensation.hpp"
#include "netform/graph.hpp"
#include "netform/params.hpp"
#include "netform/utility.hpp"

namespace netform {

struct PathMove {
  EdgeRef edge;
  EdgeAction action;
  int step;  // 1 = removal pass; 5..8 = the addition rule that emitted it

  friend bool operator==(const PathMove&, const PathMove&) = default;
};

struct ConvergePathResult {
  BidirectedGraph stable_graph;
  std::vector<PathMove> moves;
};

namespace detail {

struct LargeComponentView {
  Condensation cond;
  std::vector<std::vector<bool>> reach;  // component-level closure
  std::vector<int> large;                // large component ids, ascending

  bool large_reaches(int a, int b) const { return reach[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]; }

  long large_count() const { return static_cast<long>(large.size()); }

  int representative(int comp) const { return cond.components[static_cast<std::size_t>(comp)].front(); }

  bool has_outgoing_large(int comp) const {
    for (int other : large)
      if (other != comp && large_reaches(comp, other)) return true;
    return false;
  }
  bool has_incoming_large(int comp) const {
    for (int other : large)
      if (other != comp && large_reaches(other, comp)) return true;
    return false;
  }

  /// Vertices reachable from the component (its own members included).
  long closure_size(int comp) const {
    long total = 0;
    for (int other = 0; other < cond.component_count(); ++other)
      if (other == comp || large_reaches(comp, other))
        total += cond.component_sizes[static_cast<std::size_t>(other)];
    return total;
  }
};

inline LargeComponentView build_view(const BidirectedGraph& g, const Rational& cost) {
  LargeComponentView view{condense_sccs(g, cost), {}, {}};
  view.reach = component_reachability(view.cond);
  for (int c = 0; c < view.cond.component_count(); ++c)
    if (view.cond.large_flags[static_cast<std::size_t>(c)]) view.large.push_back(c);
  return view;
}

}  // namespace detail

/// Drives the graph to a stable one through addable/removable single-edge
/// moves only, following the constructive argument for the directed infinite
/// horizon: strip removable edges, then repeatedly merge or absorb strongly
/// connected components via one of four addition rules until nothing is
/// addable. Components and representatives are always chosen by smallest
/// contained vertex id, so the emitted move list is deterministic.
inline ConvergePathResult converge_path(const BidirectedGraph& start, const ModelParams& p) {
  if (!start.directed()) throw std::invalid_argument("converge_path requires directed mode");
  if (!p.horizon.is_infinite()) throw std::invalid_argument("converge_path requires an infinite horizon");
  if (p.speak_cost <= 0) throw std::invalid_argument("converge_path requires a positive speaking cost");
  p.validate(start.mode());

  const long n = start.vertex_count();
  const long move_cap = 16 * n * n * n;
  ConvergePathResult result{start, {}};
  BidirectedGraph& g = result.stable_graph;

  auto guard_cap = [&] {
    if (static_cast<long>(result.moves.size()) > move_cap)
      throw std::logic_error("converge_path exceeded its move cap; the procedure is buggy");
  };

  auto assert_addable = [&](const EdgeRef& e, int step) {
    if (edge_status(g, p, e) != EdgeStatus::addable)
      throw std::logic_error("converge_path step " + std::to_string(step) +
                             " selected a non-addable edge");
  };

  auto add = [&](int tail, int head, int step) {
    const EdgeRef e = speak(tail, head);
    assert_addable(e, step);
    g.add_edge(e);
    result.moves.push_back({e, EdgeAction::add, step});
    guard_cap();
  };

  // Step 1: strip removable edges, lexicographically smallest first, until
  // none remains.
  auto removal_pass = [&] {
    long removed = 0;
    for (;;) {
      const Classification cls = classify_all(g, p);
      if (cls.removable.empty()) return removed;
      const EdgeRef e = cls.removable.front();
      g.remove_edge(e);
      result.moves.push_back({e, EdgeAction::remove, 1});
      ++removed;
      guard_cap();
    }
  };

  removal_pass();
  for (;;) {
    // Step 2: stop once nothing is addable.
    const Classification cls = classify_all(g, p);
    if (cls.addable.empty()) break;

    // Step 3: condense into strongly connected components; components larger
    // than the cost are the units of progress and at least one must exist.
    detail::LargeComponentView view = detail::build_view(g, p.speak_cost);
    const long large_before = view.large_count();
    if (large_before == 0)
      throw std::logic_error("addable edge exists but no large component does");

    int applied_step = 0;
    bool added = false;

    // Step 5: some large root still reaches another large leaf; pull the leaf
    // back up to the root's representative.
    for (int root : view.large) {
      if (view.has_incoming_large(root)) continue;  // step 4: roots only
      for (int leaf : view.large) {
        if (leaf == root || !view.large_reaches(root, leaf)) continue;
        if (view.has_outgoing_large(leaf)) continue;
        add(view.representative(leaf), view.representative(root), 5);
        applied_step = 5;
        added = true;
        break;
      }
      if (added) break;
    }

    // Step 6: several mutually unreachable large components; stitch the first
    // violating pair together (one edge, plus the reverse if still needed).
    if (!added && large_before >= 2) {
      for (std::size_t i = 0; i < view.large.size() && !added; ++i)
        for (std::size_t j = 0; j < view.large.size() && !added; ++j) {
          if (i == j) continue;
          const int t1 = view.large[i];
          const int t2 = view.large[j];
          if (view.large_reaches(t2, t1)) continue;
          add(view.representative(t2), view.representative(t1), 6);
          detail::LargeComponentView updated = detail::build_view(g, p.speak_cost);
          const int c1 = updated.cond.component_of[static_cast<std::size_t>(view.representative(t1))];
          const int c2 = updated.cond.component_of[static_cast<std::size_t>(view.representative(t2))];
          if (c1 != c2 && !updated.large_reaches(c1, c2))
            add(view.representative(t1), view.representative(t2), 6);
          applied_step = 6;
          added = true;
        }
    }

    if (!added) {
      if (large_before != 1)
        throw std::logic_error("steps 5 and 6 exhausted with several large components left");
      const int t1 = view.large.front();

      // Step 7: a small leaf component cannot reach the large component yet;
      // hook it directly onto the representative.
      for (int comp = 0; comp < view.cond.component_count() && !added; ++comp) {
        if (comp == t1) continue;
        bool is_leaf = true;
        for (auto [a, b] : view.cond.dag_edges)
          if (a == comp) {
            is_leaf = false;
            break;
          }
        if (!is_leaf) continue;
        add(view.cond.components[static_cast<std::size_t>(comp)].front(), view.representative(t1), 7);
        applied_step = 7;
        added = true;
      }

      // Step 8: every component reaches the large one; pick a small root that
      // still sees enough outside it and wire the entry point back to it.
      if (!added) {
        for (int comp = 0; comp < view.cond.component_count() && !added; ++comp) {
          if (comp == t1) continue;
          bool is_root = true;
          for (auto [a, b] : view.cond.dag_edges)
            if (b == comp) {
              is_root = false;
              break;
            }
          if (!is_root) continue;
          const long outside = view.closure_size(comp) -
                               view.cond.component_sizes[static_cast<std::size_t>(t1)];
          if (Rational(outside) <= p.speak_cost) continue;

          const int source = view.cond.components[static_cast<std::size_t>(comp)].front();
          // Locate the first edge entering the large component on a breadth
          // first search from the small root (ascending head order).
          int entry = -1;
          std::vector<std::uint8_t> seen(static_cast<std::size_t>(n), 0);
          std::vector<int> frontier{source};
          seen[static_cast<std::size_t>(source)] = 1;
          while (!frontier.empty() && entry == -1) {
            std::vector<int> next;
            for (int u : frontier) {
              for (int w = 0; w < n && entry == -1; ++w) {
                if (seen[static_cast<std::size_t>(w)] || !g.speak_hop(u, static_cast<int>(w)))
                  continue;
                if (view.cond.component_of[static_cast<std::size_t>(w)] == t1) entry = static_cast<int>(w);
                seen[static_cast<std::size_t>(w)] = 1;
                next.push_back(static_cast<int>(w));
              }
              if (entry != -1) break;
            }
            frontier.swap(next);
          }
          if (entry == -1)
            throw std::logic_error("step 8 root does not reach the large component");
          add(entry, source, 8);
          applied_step = 8;
          added = true;
        }
        if (!added) throw std::logic_error("no addition rule applied despite an addable edge");
      }
    }

    const long removed = removal_pass();
    const detail::LargeComponentView after = detail::build_view(g, p.speak_cost);
    if ((applied_step == 5 || applied_step == 6) && after.large_count() >= large_before)
      throw std::logic_error("steps 5/6 failed to reduce the large component count");
    if (applied_step == 7 && removed != 0)
      throw std::logic_error("step 7 must not create removable edges");
    if ((applied_step == 7 || applied_step == 8) && after.large_count() > large_before)
      throw std::logic_error("steps 7/8 must not grow the large component count");
  }
  return result;
}

}  // namespace netform
