#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "netform/analysis.hpp"
#include "netform/dynamics.hpp"
#include "netform/rng.hpp"
#include "netform/serialize.hpp"

namespace netform {

inline constexpr const char* kToolName = "netform";
inline constexpr const char* kToolVersion = "1.0.0";

inline nlohmann::json tool_stamp() {
  return {{"name", kToolName}, {"version", kToolVersion}, {"generator", SplitMix64::kGeneratorId}};
}

inline nlohmann::json params_to_json(const ModelParams& p) {
  return {{"cs", to_string(p.speak_cost)},
          {"cl", to_string(p.listen_cost)},
          {"k", to_string(p.horizon)}};
}

inline ModelParams params_from_json(const nlohmann::json& j) {
  ModelParams p;
  p.speak_cost = parse_rational(j.at("cs").get<std::string>());
  p.listen_cost = j.contains("cl") ? parse_rational(j.at("cl").get<std::string>()) : Rational(0);
  p.horizon = parse_horizon(j.at("k").get<std::string>());
  return p;
}

inline nlohmann::json graph_to_json(const BidirectedGraph& g) {
  return nlohmann::json::parse(encode(g));
}

/// Whether convergence of this run configuration is covered by a proven
/// guarantee: bidirected with both costs positive at any horizon, or directed
/// at the infinite horizon.
inline bool proven_convergence_regime(Mode mode, const ModelParams& p) {
  if (mode == Mode::bidirected) return p.speak_cost > 0 && p.listen_cost > 0;
  return p.horizon.is_infinite();
}

/// Tab-delimited trace: a commented header block (seed, params, generator,
/// initial graph) followed by one row per event. Vertex steps emit one row
/// per changed edge, all sharing the round number.
inline std::string render_trace(const DynamicsTrace& trace) {
  std::ostringstream out;
  const BidirectedGraph& g0 = trace.initial_graph;
  out << "# netform-trace/1\n";
  out << "# tool: " << kToolName << " " << kToolVersion << "\n";
  out << "# generator: " << SplitMix64::kGeneratorId << "\n";
  out << "# seed: " << trace.config.seed << "\n";
  out << "# variant: " << to_string(trace.config.variant) << "\n";
  if (trace.config.variant == DynamicsVariant::vertex)
    out << "# vertex_application: " << to_string(trace.config.vertex_application) << "\n";
  out << "# mode: " << to_string(g0.mode()) << "\n";
  out << "# n: " << g0.vertex_count() << "\n";
  out << "# cs: " << to_string(trace.params.speak_cost) << "\n";
  out << "# cl: " << to_string(trace.params.listen_cost) << "\n";
  out << "# k: " << to_string(trace.params.horizon) << "\n";
  out << "# max_rounds: " << trace.config.max_rounds << "\n";
  out << "# scan_interval: " << trace.config.stability_scan_interval << "\n";
  out << "# proven_regime: "
      << (proven_convergence_regime(g0.mode(), trace.params) ? "true" : "false") << "\n";
  out << "# initial_graph: " << graph_to_json(g0).dump() << "\n";
  out << "# converged: " << (trace.converged ? "true" : "false") << "\n";
  out << "# rounds_used: " << trace.rounds_used << "\n";
  out << "# mutations: " << trace.mutation_count << "\n";
  out << "round\tlayer\ttail\thead\taction\twelfare_after\tpotential_after\n";

  auto potential_cell = [&](const DynamicsEvent& e) {
    return e.potential_after ? std::to_string(*e.potential_after) : std::string("-");
  };
  for (const DynamicsEvent& event : trace.events) {
    if (event.changes.empty()) {
      if (event.kind == SelectionKind::edge)
        out << event.round << '\t' << to_string(event.edge.layer) << '\t' << event.edge.tail
            << '\t' << event.edge.head << "\tno-op\t" << to_string(event.welfare_after) << '\t'
            << potential_cell(event) << '\n';
      else
        out << event.round << '\t' << to_string(event.layer) << '\t' << event.vertex
            << "\t-\tno-op\t" << to_string(event.welfare_after) << '\t' << potential_cell(event)
            << '\n';
      continue;
    }
    for (const EdgeChange& change : event.changes)
      out << event.round << '\t' << to_string(change.edge.layer) << '\t' << change.edge.tail
          << '\t' << change.edge.head << '\t'
          << (change.action == EdgeAction::add ? "added" : "removed") << '\t'
          << to_string(event.welfare_after) << '\t' << potential_cell(event) << '\n';
  }
  return out.str();
}

inline nlohmann::json report_to_json(const AnalysisReport& report, const ModelParams& p,
                                     const BidirectedGraph& g, const nlohmann::json& config) {
  nlohmann::json doc;
  doc["version"] = "netform-report/1";
  doc["tool"] = tool_stamp();
  doc["config"] = config;
  doc["params"] = params_to_json(p);
  doc["n"] = g.vertex_count();
  doc["mode"] = to_string(g.mode());
  doc["edge_stable"] = report.edge_stable;
  doc["nash_stable"] =
      report.nash_stable ? nlohmann::json(*report.nash_stable) : nlohmann::json("not-computed");
  doc["bi_pairwise_stable"] = report.bi_pairwise_stable
                                  ? nlohmann::json(*report.bi_pairwise_stable)
                                  : nlohmann::json("n/a");
  doc["welfare"] = to_string(report.welfare_total);
  doc["symmetric"] = report.symmetric;
  doc["clustering_global"] = nlohmann::json::array();
  for (const Rational& r : report.clustering) doc["clustering_global"].push_back(to_string(r));
  doc["diameter"] = report.diameter_value ? nlohmann::json(*report.diameter_value)
                                          : nlohmann::json("inf");
  return doc;
}

inline nlohmann::json census_to_json(const EquilibriumCensus& census,
                                     const nlohmann::json& config) {
  nlohmann::json doc;
  doc["version"] = "netform-census/1";
  doc["tool"] = tool_stamp();
  doc["config"] = config;
  doc["n"] = census.n;
  doc["mode"] = to_string(census.mode);
  doc["params"] = params_to_json(census.params);
  doc["graph_count"] = census.graph_count;
  doc["stable_count"] = census.stable_graphs.size();
  doc["efficient_count"] = census.efficient_graphs.size();
  doc["max_welfare"] = to_string(census.max_welfare);
  auto opt = [](const std::optional<Rational>& r) {
    return r ? nlohmann::json(to_string(*r)) : nlohmann::json("undefined");
  };
  doc["min_stable_welfare"] = opt(census.min_stable_welfare);
  doc["max_stable_welfare"] = opt(census.max_stable_welfare);
  doc["poa"] = opt(census.poa);
  doc["pos"] = opt(census.pos);
  doc["poa_inverse"] = opt(census.poa_inverse);
  doc["stable_graphs"] = nlohmann::json::array();
  for (const BidirectedGraph& g : census.stable_graphs)
    doc["stable_graphs"].push_back(graph_to_json(g));
  doc["efficient_graphs"] = nlohmann::json::array();
  for (const BidirectedGraph& g : census.efficient_graphs)
    doc["efficient_graphs"].push_back(graph_to_json(g));
  return doc;
}

inline void write_text_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << bytes;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace netform
