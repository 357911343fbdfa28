#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "netform/graph.hpp"
#include "netform/params.hpp"
#include "netform/rng.hpp"
#include "netform/utility.hpp"

namespace netform {

enum class DynamicsVariant { edge, vertex };

inline std::string to_string(DynamicsVariant v) {
  return v == DynamicsVariant::edge ? "edge" : "vertex";
}

/// How a vertex step applies its qualifying edges. The model statement is
/// simultaneous (all individually qualifying edges change at once, judged
/// against the pre-step graph); sequential re-evaluates after each change and
/// is kept as an experimental alternative.
enum class VertexApplication { simultaneous, sequential };

inline std::string to_string(VertexApplication a) {
  return a == VertexApplication::simultaneous ? "simultaneous" : "sequential";
}

struct DynamicsConfig {
  std::uint64_t seed = 0;
  long max_rounds = 1000000;
  DynamicsVariant variant = DynamicsVariant::edge;
  long stability_scan_interval = 0;  // 0 resolves to 2*n*(n-1) at run start
  VertexApplication vertex_application = VertexApplication::simultaneous;
};

struct EdgeChange {
  EdgeRef edge;
  EdgeAction action;

  friend bool operator==(const EdgeChange&, const EdgeChange&) = default;
};

enum class SelectionKind { edge, vertex };

struct DynamicsEvent {
  long round = 0;
  SelectionKind kind = SelectionKind::edge;
  EdgeRef edge;          // edge variant: the selected potential edge
  int vertex = -1;       // vertex variant selection
  Layer layer = Layer::speaking;
  EdgeAction action = EdgeAction::add;
  std::vector<EdgeChange> changes;  // empty means no-op
  Rational welfare_after;
  std::optional<long> potential_after;  // absent in directed mode

  bool is_mutation() const { return !changes.empty(); }
  friend bool operator==(const DynamicsEvent&, const DynamicsEvent&) = default;
};

struct DynamicsTrace {
  DynamicsConfig config;  // resolved (scan interval filled in)
  ModelParams params;
  BidirectedGraph initial_graph;
  BidirectedGraph final_graph;
  std::vector<DynamicsEvent> events;
  bool converged = false;
  long rounds_used = 0;
  long mutation_count = 0;
};

/// Toggles the edge iff it is addable (when absent) or removable (when
/// present); returns the applied action, or nullopt for a no-op round.
inline std::optional<EdgeAction> apply_edge_selection(BidirectedGraph& g, const ModelParams& p,
                                                      const EdgeRef& e) {
  switch (edge_status(g, p, e)) {
    case EdgeStatus::addable:
      g.add_edge(e);
      return EdgeAction::add;
    case EdgeStatus::removable:
      g.remove_edge(e);
      return EdgeAction::remove;
    default:
      return std::nullopt;
  }
}

/// Applies one vertex selection: every out-edge of v in the layer that
/// individually qualifies for the action is applied. Simultaneous judging is
/// against the pre-step graph; sequential re-checks after every change.
inline std::vector<EdgeChange> apply_vertex_selection(BidirectedGraph& g, const ModelParams& p,
                                                      int v, Layer layer, EdgeAction action,
                                                      VertexApplication application) {
  std::vector<EdgeChange> changes;
  const int n = g.vertex_count();
  const EdgeStatus wanted = action == EdgeAction::add ? EdgeStatus::addable : EdgeStatus::removable;
  if (application == VertexApplication::simultaneous) {
    std::vector<EdgeRef> qualifying;
    for (int h = 0; h < n; ++h) {
      if (h == v) continue;
      const EdgeRef e{layer, v, h};
      if (edge_status(g, p, e) == wanted) qualifying.push_back(e);
    }
    for (const EdgeRef& e : qualifying) {
      g.apply(e, action);
      changes.push_back({e, action});
    }
    return changes;
  }
  for (bool progressed = true; progressed;) {
    progressed = false;
    for (int h = 0; h < n; ++h) {
      if (h == v) continue;
      const EdgeRef e{layer, v, h};
      if (edge_status(g, p, e) != wanted) continue;
      g.apply(e, action);
      changes.push_back({e, action});
      progressed = true;
      break;
    }
  }
  return changes;
}

namespace detail {

/// Selection layout for edge dynamics: index = layer * n(n-1) + tail * (n-1)
/// + head slot (heads skip the tail). Directed mode draws speaking pairs only.
inline EdgeRef draw_edge_selection(const BidirectedGraph& g, SplitMix64& rng) {
  const std::uint64_t n = static_cast<std::uint64_t>(g.vertex_count());
  const std::uint64_t pairs = n * (n - 1);
  const std::uint64_t space = g.directed() ? pairs : 2 * pairs;
  const std::uint64_t slot = rng.bounded(space);
  const Layer layer = slot < pairs ? Layer::speaking : Layer::listening;
  const std::uint64_t pair_slot = slot % pairs;
  const int tail = static_cast<int>(pair_slot / (n - 1));
  const std::uint64_t offset = pair_slot % (n - 1);
  const int head = static_cast<int>(offset < static_cast<std::uint64_t>(tail) ? offset : offset + 1);
  return {layer, tail, head};
}

}  // namespace detail

inline DynamicsEvent edge_step(BidirectedGraph& g, const ModelParams& p, SplitMix64& rng,
                               long round = 0) {
  DynamicsEvent event;
  event.round = round;
  event.kind = SelectionKind::edge;
  event.edge = detail::draw_edge_selection(g, rng);
  if (auto applied = apply_edge_selection(g, p, event.edge))
    event.changes.push_back({event.edge, *applied});
  return event;
}

inline DynamicsEvent vertex_step(BidirectedGraph& g, const ModelParams& p, SplitMix64& rng,
                                 VertexApplication application = VertexApplication::simultaneous,
                                 long round = 0) {
  if (g.directed())
    throw std::invalid_argument("vertex dynamics are defined for bidirected graphs");
  DynamicsEvent event;
  event.round = round;
  event.kind = SelectionKind::vertex;
  // Selection layout: index = vertex * 4 + layer * 2 + action.
  const std::uint64_t slot = rng.bounded(static_cast<std::uint64_t>(g.vertex_count()) * 4);
  event.vertex = static_cast<int>(slot / 4);
  event.layer = (slot / 2) % 2 == 0 ? Layer::speaking : Layer::listening;
  event.action = slot % 2 == 0 ? EdgeAction::add : EdgeAction::remove;
  event.changes =
      apply_vertex_selection(g, p, event.vertex, event.layer, event.action, application);
  return event;
}

namespace detail {

inline DynamicsTrace run_dynamics(const BidirectedGraph& start, const ModelParams& p,
                                  const DynamicsConfig& cfg) {
  p.validate(start.mode());
  if (cfg.max_rounds < 1) throw std::invalid_argument("max_rounds must be >= 1");
  if (cfg.stability_scan_interval < 0)
    throw std::invalid_argument("stability_scan_interval must be >= 0");
  if (cfg.variant == DynamicsVariant::vertex && start.directed())
    throw std::invalid_argument("vertex dynamics are defined for bidirected graphs");

  const long n = start.vertex_count();
  DynamicsConfig resolved = cfg;
  if (resolved.stability_scan_interval == 0)
    resolved.stability_scan_interval = n > 1 ? 2 * n * (n - 1) : 1;

  DynamicsTrace trace{resolved, p, start, start, {}, false, 0, 0};
  BidirectedGraph g = start;
  SplitMix64 rng(resolved.seed);

  Rational current_welfare = welfare(g, p);
  std::optional<long> current_potential;
  if (!g.directed()) current_potential = potential(g);

  if (classify_all(g, p).empty()) {
    trace.converged = true;
    trace.final_graph = g;
    return trace;
  }

  long noop_streak = 0;
  for (long round = 0; round < resolved.max_rounds; ++round) {
    DynamicsEvent event =
        resolved.variant == DynamicsVariant::edge
            ? edge_step(g, p, rng, round)
            : vertex_step(g, p, rng, resolved.vertex_application, round);
    const bool mutated = event.is_mutation();
    if (mutated) {
      current_welfare = welfare(g, p);
      if (!g.directed()) current_potential = potential(g);
      trace.mutation_count += static_cast<long>(event.changes.size());
    }
    event.welfare_after = current_welfare;
    event.potential_after = current_potential;
    trace.events.push_back(std::move(event));

    bool scan = false;
    if (mutated) {
      noop_streak = 0;
      scan = true;
    } else if (++noop_streak % resolved.stability_scan_interval == 0) {
      scan = true;
    }
    if (scan && classify_all(g, p).empty()) {
      trace.converged = true;
      trace.rounds_used = round + 1;
      break;
    }
  }
  if (!trace.converged) trace.rounds_used = resolved.max_rounds;
  trace.final_graph = g;
  return trace;
}

}  // namespace detail

/// Runs edge dynamics until no edge is addable or removable, or the round cap
/// is hit. Identical (seed, inputs) produce identical traces.
inline DynamicsTrace run_edge_dynamics(const BidirectedGraph& start, const ModelParams& p,
                                       const DynamicsConfig& cfg) {
  if (cfg.variant != DynamicsVariant::edge)
    throw std::invalid_argument("run_edge_dynamics requires the edge variant");
  return detail::run_dynamics(start, p, cfg);
}

inline DynamicsTrace run_vertex_dynamics(const BidirectedGraph& start, const ModelParams& p,
                                         const DynamicsConfig& cfg) {
  if (cfg.variant != DynamicsVariant::vertex)
    throw std::invalid_argument("run_vertex_dynamics requires the vertex variant");
  return detail::run_dynamics(start, p, cfg);
}

/// Replay-based audit of a trace: every recorded change must have qualified
/// against the graph state before its event, the final graph must match, the
/// convergence verdict must agree with a fresh stability scan, and the two
/// monitored run invariants are reported per trace.
struct TraceAudit {
  bool replay_matches_final = false;
  bool preconditions_ok = true;
  bool welfare_consistent = true;
  bool converged_verdict_ok = false;
  /// Bidirected: once a speaking edge and its reverse listening edge are both
  /// absent, neither may ever be added again.
  bool no_resurrection_ok = true;
  /// Bidirected: potential (complete edges + edges) never increases across
  /// mutation events.
  bool potential_monotone_ok = true;
  std::string first_violation;

  bool clean() const {
    return replay_matches_final && preconditions_ok && welfare_consistent &&
           converged_verdict_ok && no_resurrection_ok && potential_monotone_ok;
  }
};

inline TraceAudit audit_trace(const DynamicsTrace& trace) {
  TraceAudit audit;
  BidirectedGraph g = trace.initial_graph;
  const ModelParams& p = trace.params;
  const bool bidirected = !g.directed();
  const int n = g.vertex_count();

  auto note = [&](bool& flag, const std::string& message) {
    flag = false;
    if (audit.first_violation.empty()) audit.first_violation = message;
  };

  std::vector<std::uint8_t> dead(static_cast<std::size_t>(n) * n, 0);
  auto refresh_dead = [&](int v, int w) {
    if (!g.speak_edge(v, w) && !g.listen_edge(w, v))
      dead[static_cast<std::size_t>(v) * n + w] = 1;
  };
  if (bidirected)
    for (int v = 0; v < n; ++v)
      for (int w = 0; w < n; ++w)
        if (v != w) refresh_dead(v, w);

  Rational last_welfare = welfare(g, p);
  long last_potential = bidirected ? potential(g) : 0;

  for (const DynamicsEvent& event : trace.events) {
    // Qualification is judged against the pre-event graph for every change in
    // the event (vertex steps apply their batch simultaneously).
    for (const EdgeChange& change : event.changes) {
      const EdgeStatus status = edge_status(g, p, change.edge);
      const EdgeStatus wanted =
          change.action == EdgeAction::add ? EdgeStatus::addable : EdgeStatus::removable;
      if (status != wanted)
        note(audit.preconditions_ok,
             "round " + std::to_string(event.round) + ": change did not qualify");
      if (bidirected && change.action == EdgeAction::add) {
        const int v = change.edge.layer == Layer::speaking ? change.edge.tail : change.edge.head;
        const int w = change.edge.layer == Layer::speaking ? change.edge.head : change.edge.tail;
        if (dead[static_cast<std::size_t>(v) * n + w])
          note(audit.no_resurrection_ok,
               "round " + std::to_string(event.round) + ": resurrected a dead pair");
      }
    }
    for (const EdgeChange& change : event.changes)
      if (!g.apply(change.edge, change.action))
        note(audit.preconditions_ok,
             "round " + std::to_string(event.round) + ": change was a no-op on replay");

    if (event.is_mutation()) {
      last_welfare = welfare(g, p);
      if (bidirected) {
        const long pot = potential(g);
        if (pot > last_potential)
          note(audit.potential_monotone_ok,
               "round " + std::to_string(event.round) + ": potential rose from " +
                   std::to_string(last_potential) + " to " + std::to_string(pot));
        last_potential = pot;
        for (const EdgeChange& change : event.changes) {
          const int v = change.edge.layer == Layer::speaking ? change.edge.tail : change.edge.head;
          const int w = change.edge.layer == Layer::speaking ? change.edge.head : change.edge.tail;
          refresh_dead(v, w);
        }
      }
    }
    if (event.welfare_after != last_welfare)
      note(audit.welfare_consistent,
           "round " + std::to_string(event.round) + ": recorded welfare mismatch");
    if (bidirected &&
        (!event.potential_after || *event.potential_after != last_potential))
      note(audit.welfare_consistent,
           "round " + std::to_string(event.round) + ": recorded potential mismatch");
  }

  audit.replay_matches_final = g == trace.final_graph;
  if (!audit.replay_matches_final && audit.first_violation.empty())
    audit.first_violation = "replayed graph differs from recorded final graph";
  audit.converged_verdict_ok = trace.converged == classify_all(g, p).empty();
  if (!audit.converged_verdict_ok && audit.first_violation.empty())
    audit.first_violation = "convergence verdict disagrees with stability scan";
  return audit;
}

}  // namespace netform
