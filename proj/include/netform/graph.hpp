#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "netform/params.hpp"
#include "netform/rational.hpp"
#include "netform/rng.hpp"

namespace netform {

enum class Layer { speaking, listening };

inline std::string to_string(Layer layer) {
  return layer == Layer::speaking ? "speaking" : "listening";
}

inline Layer parse_layer(std::string_view s) {
  if (s == "speaking") return Layer::speaking;
  if (s == "listening") return Layer::listening;
  throw std::invalid_argument("unknown layer: '" + std::string(s) + "'");
}

/// One directed edge in one layer; the unit of every mutation and every
/// dynamics decision. The tail agent owns (and pays for) the edge.
struct EdgeRef {
  Layer layer = Layer::speaking;
  int tail = 0;
  int head = 0;

  friend constexpr auto operator<=>(const EdgeRef&, const EdgeRef&) = default;
};

inline EdgeRef speak(int tail, int head) { return {Layer::speaking, tail, head}; }
inline EdgeRef listen(int tail, int head) { return {Layer::listening, tail, head}; }

enum class EdgeAction { add, remove };

inline std::string to_string(EdgeAction a) {
  return a == EdgeAction::add ? "add" : "remove";
}

/// A two-layer directed graph: speaking edges (contact initiated by the tail)
/// and listening edges (contact accepted by the tail). In directed mode no
/// listening edges are stored and every query treats the listening layer as
/// complete, which is lossless when listening is free.
class BidirectedGraph {
 public:
  BidirectedGraph(int n, Mode mode) : n_(n), mode_(mode) {
    if (n < 1) throw std::invalid_argument("graph needs at least one vertex");
    speak_.assign(static_cast<std::size_t>(n) * n, 0);
    if (mode == Mode::bidirected) listen_.assign(static_cast<std::size_t>(n) * n, 0);
    speak_out_.assign(static_cast<std::size_t>(n), 0);
    listen_out_.assign(static_cast<std::size_t>(n), 0);
  }

  int vertex_count() const { return n_; }
  Mode mode() const { return mode_; }
  bool directed() const { return mode_ == Mode::directed; }

  bool speak_edge(int tail, int head) const { return speak_[index(tail, head)] != 0; }

  /// Stored listening edge; in directed mode the layer is implicitly full.
  bool listen_edge(int tail, int head) const {
    if (directed()) return tail != head;
    return listen_[index(tail, head)] != 0;
  }

  bool has_edge(const EdgeRef& e) const {
    check_endpoints(e.tail, e.head);
    return e.layer == Layer::speaking ? speak_edge(e.tail, e.head) : listen_edge(e.tail, e.head);
  }

  /// A speaking hop v->w carries reachability only when the reverse listening
  /// edge exists; a listening hop mirrors that with the reverse speaking edge.
  bool speak_hop(int v, int w) const {
    return speak_edge(v, w) && (directed() || listen_[index(w, v)] != 0);
  }
  bool listen_hop(int v, int w) const {
    if (directed()) return speak_edge(w, v);
    return listen_[index(v, w)] != 0 && speak_edge(w, v);
  }
  bool hop(Layer direction, int v, int w) const {
    return direction == Layer::speaking ? speak_hop(v, w) : listen_hop(v, w);
  }

  int speak_out_degree(int v) const { return speak_out_[static_cast<std::size_t>(v)]; }
  int listen_out_degree(int v) const {
    return directed() ? 0 : listen_out_[static_cast<std::size_t>(v)];
  }

  long speak_edge_count() const { return speak_count_; }
  long listen_edge_count() const { return listen_count_; }
  long edge_count() const { return speak_count_ + listen_count_; }

  /// Adds the edge; returns false when it was already present (a no-op).
  bool add_edge(const EdgeRef& e) {
    validate_mutation(e);
    auto& cell = layer_cell(e);
    if (cell) return false;
    cell = 1;
    bump_counts(e, +1);
    return true;
  }

  /// Removes the edge; returns false when it was already absent (a no-op).
  bool remove_edge(const EdgeRef& e) {
    validate_mutation(e);
    auto& cell = layer_cell(e);
    if (!cell) return false;
    cell = 0;
    bump_counts(e, -1);
    return true;
  }

  bool apply(const EdgeRef& e, EdgeAction action) {
    return action == EdgeAction::add ? add_edge(e) : remove_edge(e);
  }

  /// Stored edges of one layer in lexicographic (tail, head) order.
  std::vector<std::pair<int, int>> edges(Layer layer) const {
    std::vector<std::pair<int, int>> out;
    const auto& cells = layer == Layer::speaking ? speak_ : listen_;
    if (cells.empty()) return out;
    for (int t = 0; t < n_; ++t)
      for (int h = 0; h < n_; ++h)
        if (cells[index(t, h)]) out.emplace_back(t, h);
    return out;
  }

  friend bool operator==(const BidirectedGraph&, const BidirectedGraph&) = default;

 private:
  std::size_t index(int tail, int head) const {
    check_endpoints(tail, head);
    return static_cast<std::size_t>(tail) * n_ + head;
  }

  void check_endpoints(int tail, int head) const {
    if (tail < 0 || tail >= n_ || head < 0 || head >= n_)
      throw std::invalid_argument("edge endpoint out of range");
  }

  void validate_mutation(const EdgeRef& e) const {
    check_endpoints(e.tail, e.head);
    if (e.tail == e.head) throw std::invalid_argument("self-loops are not allowed");
    if (directed() && e.layer == Layer::listening)
      throw std::invalid_argument("directed mode stores no listening edges");
  }

  std::uint8_t& layer_cell(const EdgeRef& e) {
    return e.layer == Layer::speaking ? speak_[index(e.tail, e.head)]
                                      : listen_[index(e.tail, e.head)];
  }

  void bump_counts(const EdgeRef& e, int delta) {
    if (e.layer == Layer::speaking) {
      speak_count_ += delta;
      speak_out_[static_cast<std::size_t>(e.tail)] += delta;
    } else {
      listen_count_ += delta;
      listen_out_[static_cast<std::size_t>(e.tail)] += delta;
    }
  }

  int n_;
  Mode mode_;
  std::vector<std::uint8_t> speak_;
  std::vector<std::uint8_t> listen_;  // empty in directed mode
  std::vector<int> speak_out_;
  std::vector<int> listen_out_;
  long speak_count_ = 0;
  long listen_count_ = 0;
};

struct MutateResult {
  BidirectedGraph graph;
  bool changed;
};

inline MutateResult mutate_edge(const BidirectedGraph& g, const EdgeRef& e, EdgeAction action) {
  MutateResult out{g, false};
  out.changed = out.graph.apply(e, action);
  return out;
}

inline BidirectedGraph new_graph(int n, Mode mode) { return BidirectedGraph(n, mode); }

/// A speaking edge is complete when its reverse listening edge exists, and
/// vice versa. Only complete edges carry reachability, and in directed mode
/// every stored edge is complete by construction.
inline bool is_complete_edge(const BidirectedGraph& g, const EdgeRef& e) {
  if (!g.has_edge(e)) throw std::invalid_argument("edge is not present");
  if (g.directed()) return true;
  return e.layer == Layer::speaking ? g.listen_edge(e.head, e.tail)
                                    : g.speak_edge(e.head, e.tail);
}

namespace detail {

/// Turns a directed construction bidirected by pairing every speaking edge
/// with its reverse listening edge, so every edge comes out complete.
inline void complete_pair(BidirectedGraph& g, int tail, int head) {
  g.add_edge(speak(tail, head));
  if (!g.directed()) g.add_edge(listen(head, tail));
}

}  // namespace detail

inline BidirectedGraph make_cycle(int n, Mode mode) {
  if (n < 2) throw std::invalid_argument("cycle needs at least two vertices");
  BidirectedGraph g(n, mode);
  for (int i = 0; i < n; ++i) detail::complete_pair(g, i, (i + 1) % n);
  return g;
}

inline BidirectedGraph make_complete(int n, Mode mode) {
  BidirectedGraph g(n, mode);
  for (int t = 0; t < n; ++t)
    for (int h = 0; h < n; ++h)
      if (t != h) detail::complete_pair(g, t, h);
  return g;
}

/// Petal sizes (non-center vertices per petal) of the balanced flower.
/// Petals are filled with floor(k/2) vertices each; when a remainder is left
/// over, earlier petals donate one vertex apiece (lowest petal first) until
/// the final petal holds floor(k/2)-1 vertices. Feasible whenever at least
/// one full petal exists and no petal must donate more than one vertex
/// (always the case for k up to about 2*sqrt(n)).
inline std::vector<int> flower_petal_sizes(int n, int k) {
  const int h = k / 2;
  if (k < 4) throw std::invalid_argument("flower needs k >= 4");
  if (n < 3) throw std::invalid_argument("flower needs n >= 3");
  const int spokes = n - 1;
  const int full = spokes / h;
  if (full < 1) throw std::invalid_argument("flower needs at least floor(k/2) + 1 vertices");
  const int remainder = spokes - full * h;
  std::vector<int> sizes(static_cast<std::size_t>(full), h);
  if (remainder > 0) {
    const int steal = (h - 1) - remainder;
    if (steal > full)
      throw std::invalid_argument("flower rebalancing infeasible for this (n, k)");
    for (int i = 0; i < steal; ++i) sizes[static_cast<std::size_t>(i)] -= 1;
    sizes.push_back(h - 1);
  }
  return sizes;
}

/// Balanced flower: directed petal cycles sharing vertex 0 as the center.
/// Diameter is at most k while using only (n-1) + ceil((n-1)/floor(k/2))
/// edges. Bidirected mode doubles every edge into a complete pair.
inline BidirectedGraph make_balanced_flower(int n, int k, Mode mode) {
  const std::vector<int> sizes = flower_petal_sizes(n, k);
  BidirectedGraph g(n, mode);
  int next_vertex = 1;
  for (int size : sizes) {
    int prev = 0;
    for (int i = 0; i < size; ++i) {
      detail::complete_pair(g, prev, next_vertex);
      prev = next_vertex++;
    }
    detail::complete_pair(g, prev, 0);
  }
  return g;
}

/// Vertex labels of the Kautz graph: all length-D strings over {0..d} with
/// adjacent symbols distinct, in lexicographic order.
inline std::vector<std::vector<int>> kautz_label_sequences(int d, int D) {
  if (d < 1 || D < 1) throw std::invalid_argument("kautz needs d >= 1 and D >= 1");
  std::vector<std::vector<int>> labels;
  std::vector<int> current;
  auto extend = [&](auto&& self) -> void {
    if (static_cast<int>(current.size()) == D) {
      labels.push_back(current);
      return;
    }
    for (int symbol = 0; symbol <= d; ++symbol) {
      if (!current.empty() && current.back() == symbol) continue;
      current.push_back(symbol);
      self(self);
      current.pop_back();
    }
  };
  extend(extend);
  return labels;
}

inline std::vector<std::string> kautz_vertex_labels(int d, int D) {
  if (d > 9) throw std::invalid_argument("label strings are only defined for d <= 9");
  std::vector<std::string> out;
  for (const auto& seq : kautz_label_sequences(d, D)) {
    std::string s;
    for (int symbol : seq) s.push_back(static_cast<char>('0' + symbol));
    out.push_back(std::move(s));
  }
  return out;
}

/// Kautz graph on (d+1)*d^(D-1) vertices: label shift edges give uniform
/// out-degree d and diameter exactly D.
inline BidirectedGraph make_kautz(int d, int D, Mode mode) {
  const auto labels = kautz_label_sequences(d, D);
  BidirectedGraph g(static_cast<int>(labels.size()), mode);
  std::map<std::vector<int>, int> id_of;
  for (int i = 0; i < static_cast<int>(labels.size()); ++i) id_of[labels[i]] = i;
  std::vector<int> successor(labels.front().size());
  for (int i = 0; i < static_cast<int>(labels.size()); ++i) {
    const auto& label = labels[static_cast<std::size_t>(i)];
    std::copy(label.begin() + 1, label.end(), successor.begin());
    for (int symbol = 0; symbol <= d; ++symbol) {
      if (symbol == label.back()) continue;
      successor.back() = symbol;
      detail::complete_pair(g, i, id_of.at(successor));
    }
  }
  return g;
}

/// Maps a (vertex count, diameter) request onto Kautz parameters when some
/// (d, D) represents it exactly.
inline std::optional<std::pair<int, int>> kautz_params_for(long n, int diameter) {
  if (n < 2 || diameter < 1) return std::nullopt;
  // (d+1)*d^(D-1) is strictly increasing in d for fixed D.
  for (int d = 1; d + 1 <= n; ++d) {
    long vertices = d + 1;
    for (int i = 1; i < diameter && vertices <= n; ++i) vertices *= d;
    if (vertices == n) return std::make_pair(d, diameter);
    if (d >= 2 && vertices > n) return std::nullopt;
  }
  return std::nullopt;
}

/// Seeded random graph. Each ordered pair is drawn independently with the
/// given probability; in bidirected mode a successful draw emits the complete
/// pair (speaking edge plus its reverse listening edge), so random starts
/// satisfy the same all-edges-complete guarantee as the other constructors.
inline BidirectedGraph make_random(int n, Mode mode, const Rational& p, std::uint64_t seed) {
  if (p < 0 || p > 1) throw std::invalid_argument("edge probability must lie in [0, 1]");
  BidirectedGraph g(n, mode);
  SplitMix64 rng(seed);
  const auto num = static_cast<std::uint64_t>(p.numerator());
  const auto den = static_cast<std::uint64_t>(p.denominator());
  for (int t = 0; t < n; ++t)
    for (int h = 0; h < n; ++h) {
      if (t == h) continue;
      if (rng.bounded(den) < num) detail::complete_pair(g, t, h);
    }
  return g;
}

}  // namespace netform
