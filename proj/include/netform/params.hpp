#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "netform/rational.hpp"

namespace netform {

enum class Mode { directed, bidirected };

inline std::string to_string(Mode mode) {
  return mode == Mode::directed ? "directed" : "bidirected";
}

inline Mode parse_mode(std::string_view s) {
  if (s == "directed") return Mode::directed;
  if (s == "bidirected") return Mode::bidirected;
  throw std::invalid_argument("unknown mode: '" + std::string(s) + "'");
}

/// Path-length horizon: a positive integer or infinity. Infinity is a
/// distinguished state, never a large stand-in value; several results hold
/// only at the infinite horizon, so callers branch on it explicitly.
class Horizon {
 public:
  static constexpr Horizon infinite() { return Horizon(0); }

  static constexpr Horizon finite(std::uint32_t depth) {
    if (depth == 0) throw std::invalid_argument("horizon must be >= 1");
    return Horizon(depth);
  }

  constexpr bool is_infinite() const { return depth_ == 0; }

  constexpr std::uint32_t finite_depth() const {
    if (is_infinite()) throw std::logic_error("horizon is infinite");
    return depth_;
  }

  /// Effective search depth on an n-vertex graph: paths never need more than
  /// n-1 hops, so the infinite horizon truncates there.
  constexpr long effective_depth(int n) const {
    const long cap = n > 0 ? n - 1 : 0;
    if (is_infinite()) return cap;
    return depth_ < static_cast<std::uint32_t>(cap) ? static_cast<long>(depth_) : cap;
  }

  constexpr bool operator==(const Horizon&) const = default;

 private:
  constexpr explicit Horizon(std::uint32_t depth) : depth_(depth) {}
  std::uint32_t depth_;  // 0 encodes infinity; constructors keep it private
};

inline std::string to_string(Horizon k) {
  return k.is_infinite() ? "inf" : std::to_string(k.finite_depth());
}

inline Horizon parse_horizon(std::string_view s) {
  if (s == "inf" || s == "infinity" || s == "∞") return Horizon::infinite();
  std::uint64_t value = 0;
  if (s.empty()) throw std::invalid_argument("empty horizon");
  for (char c : s) {
    if (c < '0' || c > '9') throw std::invalid_argument("malformed horizon: '" + std::string(s) + "'");
    value = value * 10 + static_cast<std::uint64_t>(c - '0');
    if (value > 0xffffffffULL) throw std::invalid_argument("horizon out of range");
  }
  return Horizon::finite(static_cast<std::uint32_t>(value));
}

/// The three knobs that fix a game instance: the speaking edge cost, the
/// listening edge cost, and the horizon within which reached agents pay off.
struct ModelParams {
  Rational speak_cost;
  Rational listen_cost;
  Horizon horizon = Horizon::infinite();

  void validate(Mode mode) const {
    if (speak_cost < 0 || listen_cost < 0)
      throw std::invalid_argument("edge costs must be nonnegative");
    if (mode == Mode::directed && listen_cost != 0)
      throw std::invalid_argument("directed mode requires a zero listening cost");
  }
};

}  // namespace netform
