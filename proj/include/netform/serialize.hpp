#pragma once

#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "netform/graph.hpp"

namespace netform {

inline constexpr const char* kGraphFormatVersion = "netform-graph/1";

/// Canonical graph document: fixed field set, edges sorted lexicographically,
/// two-space indentation. Equal graphs serialize to identical bytes, which is
/// what makes golden-file and rerun-determinism checks possible.
inline std::string encode(const BidirectedGraph& g) {
  nlohmann::json doc;
  doc["version"] = kGraphFormatVersion;
  doc["n"] = g.vertex_count();
  doc["mode"] = to_string(g.mode());
  doc["speaking"] = nlohmann::json::array();
  for (auto [t, h] : g.edges(Layer::speaking)) doc["speaking"].push_back({t, h});
  doc["listening"] = nlohmann::json::array();
  if (!g.directed())
    for (auto [t, h] : g.edges(Layer::listening)) doc["listening"].push_back({t, h});
  return doc.dump(2) + "\n";
}

inline BidirectedGraph decode(const std::string& bytes) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed graph document: ") + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("graph document must be an object");
  for (const auto& key : {"version", "n", "mode", "speaking", "listening"})
    if (!doc.contains(key))
      throw std::invalid_argument(std::string("graph document missing field '") + key + "'");
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string& key = it.key();
    if (key != "version" && key != "n" && key != "mode" && key != "speaking" &&
        key != "listening")
      throw std::invalid_argument("unexpected field '" + key + "' in graph document");
  }
  if (!doc["version"].is_string() || doc["version"].get<std::string>() != kGraphFormatVersion)
    throw std::invalid_argument("unsupported graph document version");
  if (!doc["n"].is_number_integer() || doc["n"].get<long>() < 1)
    throw std::invalid_argument("graph document needs an integer n >= 1");

  const int n = doc["n"].get<int>();
  const Mode mode = parse_mode(doc["mode"].get<std::string>());
  BidirectedGraph g(n, mode);

  auto load_layer = [&](const char* key, Layer layer) {
    const auto& edges = doc[key];
    if (!edges.is_array()) throw std::invalid_argument("edge list must be an array");
    for (const auto& entry : edges) {
      if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number_integer() ||
          !entry[1].is_number_integer())
        throw std::invalid_argument("edges must be [tail, head] integer pairs");
      const long tail = entry[0].get<long>();
      const long head = entry[1].get<long>();
      if (tail < 0 || tail >= n || head < 0 || head >= n)
        throw std::invalid_argument("edge endpoint out of range");
      if (tail == head) throw std::invalid_argument("self-loops are not allowed");
      EdgeRef e{layer, static_cast<int>(tail), static_cast<int>(head)};
      if (!g.add_edge(e)) throw std::invalid_argument("duplicate edge in graph document");
    }
  };

  load_layer("speaking", Layer::speaking);
  if (mode == Mode::directed) {
    if (!doc["listening"].is_array() || !doc["listening"].empty())
      throw std::invalid_argument("directed documents must have an empty listening list");
  } else {
    load_layer("listening", Layer::listening);
  }
  return g;
}

inline void save_graph_file(const BidirectedGraph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << encode(g);
}

inline BidirectedGraph load_graph_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode(bytes);
}

}  // namespace netform
