// netform command line tool: generate graphs, run seeded dynamics, analyze
// stability and efficiency, enumerate small equilibrium censuses, and batch
// experiments. Human-readable summaries go to stdout; machine artifacts only
// to files. Exit codes: 0 success/converged, 2 dynamics hit the round cap
// without converging, 1 usage or input error.

#include <atomic>
#include <exception>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "netform/netform.hpp"

namespace {

using namespace netform;
using nlohmann::json;

struct GraphSpec {
  std::string type;  // empty | cycle | complete | flower | kautz | random | file
  int n = 0;
  int k = 0;
  int d = 0;
  int D = 0;
  std::string p = "1/2";
  std::uint64_t seed = 0;
  bool has_seed = false;
  Mode mode = Mode::directed;
  std::string path;
};

BidirectedGraph build_graph(const GraphSpec& spec) {
  if (spec.type == "empty") return BidirectedGraph(spec.n, spec.mode);
  if (spec.type == "cycle") return make_cycle(spec.n, spec.mode);
  if (spec.type == "complete") return make_complete(spec.n, spec.mode);
  if (spec.type == "flower") return make_balanced_flower(spec.n, spec.k, spec.mode);
  if (spec.type == "kautz") {
    if (spec.d > 0 && spec.D > 0) return make_kautz(spec.d, spec.D, spec.mode);
    if (spec.n > 0 && spec.k > 0) {
      auto params = kautz_params_for(spec.n, spec.k);
      if (!params)
        throw std::invalid_argument("no Kautz graph has exactly " + std::to_string(spec.n) +
                                    " vertices and diameter " + std::to_string(spec.k));
      return make_kautz(params->first, params->second, spec.mode);
    }
    throw std::invalid_argument("kautz needs --d and --D (or --n and --k)");
  }
  if (spec.type == "random") {
    if (!spec.has_seed) throw std::invalid_argument("random graphs need --seed");
    return make_random(spec.n, spec.mode, parse_rational(spec.p), spec.seed);
  }
  if (spec.type == "file") return load_graph_file(spec.path);
  throw std::invalid_argument("unknown graph type '" + spec.type + "'");
}

std::uint64_t draw_entropy_seed() {
  std::random_device device;
  return (static_cast<std::uint64_t>(device()) << 32) ^ device();
}

void print_graph_summary(const BidirectedGraph& g) {
  std::cout << "n: " << g.vertex_count() << "\n";
  std::cout << "mode: " << to_string(g.mode()) << "\n";
  std::cout << "speaking edges: " << g.speak_edge_count() << "\n";
  if (!g.directed()) std::cout << "listening edges: " << g.listen_edge_count() << "\n";
  const auto diam = diameter(g);
  std::cout << "diameter: " << (diam ? std::to_string(*diam) : std::string("inf")) << "\n";
}

struct ParamsCli {
  std::string cs = "1";
  std::string cl = "0";
  std::string k = "inf";

  ModelParams resolve() const {
    return ModelParams{parse_rational(cs), parse_rational(cl), parse_horizon(k)};
  }

  void attach(CLI::App* cmd) {
    cmd->add_option("--cs", cs, "speaking edge cost (rational, e.g. 3/2 or 1.5)");
    cmd->add_option("--cl", cl, "listening edge cost (rational; 0 in directed mode)");
    cmd->add_option("--k", k, "horizon: positive integer or 'inf'");
  }
};

json params_config(const ParamsCli& p) {
  return {{"cs", to_string(parse_rational(p.cs))},
          {"cl", to_string(parse_rational(p.cl))},
          {"k", to_string(parse_horizon(p.k))}};
}

int run_generate(const GraphSpec& spec, const std::string& out_path) {
  BidirectedGraph g = build_graph(spec);
  save_graph_file(g, out_path);
  std::cout << "type: " << spec.type << "\n";
  if (spec.type == "random") std::cout << "seed: " << spec.seed << "\n";
  print_graph_summary(g);
  std::cout << "written: " << out_path << "\n";
  return 0;
}

int run_dynamics_cmd(const std::string& graph_path, const ParamsCli& params_cli,
                     DynamicsConfig cfg, bool seed_given, const std::string& trace_path,
                     const std::string& final_path) {
  BidirectedGraph g = load_graph_file(graph_path);
  const ModelParams params = params_cli.resolve();
  params.validate(g.mode());
  if (!seed_given) {
    cfg.seed = draw_entropy_seed();
    std::cout << "seed (drawn from entropy): " << cfg.seed << "\n";
  }
  if (!proven_convergence_regime(g.mode(), params))
    std::cerr << "warning: this configuration (directed mode, finite horizon) has no"
                 " convergence guarantee; treat the run as exploratory\n";

  const DynamicsTrace trace = cfg.variant == DynamicsVariant::edge
                                  ? run_edge_dynamics(g, params, cfg)
                                  : run_vertex_dynamics(g, params, cfg);
  if (!trace_path.empty()) write_text_file(trace_path, render_trace(trace));
  if (!final_path.empty()) save_graph_file(trace.final_graph, final_path);

  std::cout << "converged: " << (trace.converged ? "true" : "false") << "\n";
  std::cout << "rounds_used: " << trace.rounds_used << "\n";
  std::cout << "mutations: " << trace.mutation_count << "\n";
  std::cout << "final_welfare: " << to_string(welfare(trace.final_graph, params)) << "\n";
  return trace.converged ? 0 : 2;
}

int run_analyze(const std::string& graph_path, const ParamsCli& params_cli, bool with_nash,
                int clustering_dim, const std::string& out_path,
                const std::string& clustering_path) {
  BidirectedGraph g = load_graph_file(graph_path);
  const ModelParams params = params_cli.resolve();
  params.validate(g.mode());
  AnalyzeOptions opts;
  opts.with_nash = with_nash;
  opts.clustering_dim = clustering_dim;
  const AnalysisReport report = analyze(g, params, opts);

  json config = {{"command", "analyze"},
                 {"graph", graph_path},
                 {"params", params_config(params_cli)},
                 {"nash", with_nash},
                 {"clustering_dim", clustering_dim}};
  if (!out_path.empty())
    write_text_file(out_path, report_to_json(report, params, g, config).dump(2) + "\n");
  if (!clustering_path.empty()) {
    std::string rows = "dim\tvalue\n";
    for (std::size_t i = 0; i < report.clustering.size(); ++i)
      rows += std::to_string(i + 1) + "\t" + to_string(report.clustering[i]) + "\n";
    write_text_file(clustering_path, rows);
  }

  std::cout << "edge_stable: " << (report.edge_stable ? "true" : "false") << "\n";
  if (report.nash_stable)
    std::cout << "nash_stable: " << (*report.nash_stable ? "true" : "false") << "\n";
  if (report.bi_pairwise_stable)
    std::cout << "bi_pairwise_stable: " << (*report.bi_pairwise_stable ? "true" : "false")
              << "\n";
  std::cout << "welfare: " << to_string(report.welfare_total) << "\n";
  std::cout << "symmetric: " << (report.symmetric ? "true" : "false") << "\n";
  std::cout << "diameter: "
            << (report.diameter_value ? std::to_string(*report.diameter_value)
                                      : std::string("inf"))
            << "\n";
  return 0;
}

int run_census(int n, Mode mode, const ParamsCli& params_cli, const std::string& out_path) {
  const ModelParams params = params_cli.resolve();
  params.validate(mode);
  const EquilibriumCensus census = enumerate_all(n, params, mode);
  json config = {{"command", "census"},
                 {"n", n},
                 {"mode", to_string(mode)},
                 {"params", params_config(params_cli)}};
  if (!out_path.empty())
    write_text_file(out_path, census_to_json(census, config).dump(2) + "\n");
  std::cout << "graphs: " << census.graph_count << "\n";
  std::cout << "stable: " << census.stable_graphs.size() << "\n";
  std::cout << "max_welfare: " << to_string(census.max_welfare) << "\n";
  std::cout << "poa: " << (census.poa ? to_string(*census.poa) : std::string("undefined"))
            << "\n";
  std::cout << "pos: " << (census.pos ? to_string(*census.pos) : std::string("undefined"))
            << "\n";
  return 0;
}

int run_converge_path(const std::string& graph_path, const ParamsCli& params_cli,
                      const std::string& moves_path, const std::string& final_path) {
  BidirectedGraph g = load_graph_file(graph_path);
  ModelParams params = params_cli.resolve();
  const ConvergePathResult result = converge_path(g, params);

  if (!moves_path.empty()) {
    json doc;
    doc["version"] = "netform-moves/1";
    doc["tool"] = tool_stamp();
    doc["config"] = {{"command", "converge-path"},
                     {"graph", graph_path},
                     {"params", params_config(params_cli)}};
    doc["moves"] = json::array();
    for (const PathMove& move : result.moves)
      doc["moves"].push_back({{"layer", to_string(move.edge.layer)},
                              {"tail", move.edge.tail},
                              {"head", move.edge.head},
                              {"action", move.action == EdgeAction::add ? "add" : "remove"},
                              {"step", move.step}});
    write_text_file(moves_path, doc.dump(2) + "\n");
  }
  if (!final_path.empty()) save_graph_file(result.stable_graph, final_path);
  std::cout << "moves: " << result.moves.size() << "\n";
  std::cout << "stable: "
            << (is_edge_stable(result.stable_graph, params) ? "true" : "false") << "\n";
  return 0;
}

struct TrialRow {
  std::uint64_t seed = 0;
  bool converged = false;
  long rounds_used = 0;
  long mutations = 0;
  std::string final_welfare;
  std::string error;
};

int run_batch(const std::string& config_path, const std::string& out_path, int jobs) {
  const json config = json::parse(read_text_file(config_path));
  if (!config.contains("seeds") || !config["seeds"].is_array())
    throw std::invalid_argument("batch config needs a 'seeds' array (explicit per-trial seeds)");
  std::vector<std::uint64_t> seeds;
  for (const auto& s : config["seeds"]) seeds.push_back(s.get<std::uint64_t>());

  GraphSpec spec;
  const json& graph = config.at("graph");
  spec.type = graph.at("type").get<std::string>();
  spec.mode = graph.contains("mode") ? parse_mode(graph["mode"].get<std::string>())
                                     : Mode::directed;
  if (graph.contains("n")) spec.n = graph["n"].get<int>();
  if (graph.contains("k")) spec.k = graph["k"].get<int>();
  if (graph.contains("d")) spec.d = graph["d"].get<int>();
  if (graph.contains("D")) spec.D = graph["D"].get<int>();
  if (graph.contains("p")) spec.p = graph["p"].get<std::string>();
  if (graph.contains("path")) spec.path = graph["path"].get<std::string>();

  const ModelParams params = params_from_json(config.at("params"));
  DynamicsConfig base_cfg;
  if (config.contains("dynamics")) {
    const json& dyn = config["dynamics"];
    if (dyn.contains("variant"))
      base_cfg.variant = dyn["variant"].get<std::string>() == "vertex" ? DynamicsVariant::vertex
                                                                       : DynamicsVariant::edge;
    if (dyn.contains("max_rounds")) base_cfg.max_rounds = dyn["max_rounds"].get<long>();
    if (dyn.contains("scan_interval"))
      base_cfg.stability_scan_interval = dyn["scan_interval"].get<long>();
  }

  std::vector<TrialRow> rows(seeds.size());
  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= seeds.size()) return;
      TrialRow& row = rows[i];
      row.seed = seeds[i];
      try {
        // Per-trial derivation: the trial seed spawns one stream for the
        // graph draw and one for the dynamics, so any row reruns standalone.
        SplitMix64 root(seeds[i]);
        GraphSpec trial_spec = spec;
        trial_spec.has_seed = true;
        trial_spec.seed = root.next();
        DynamicsConfig cfg = base_cfg;
        cfg.seed = root.next();
        const BidirectedGraph g = build_graph(trial_spec);
        params.validate(g.mode());
        const DynamicsTrace trace = cfg.variant == DynamicsVariant::edge
                                        ? run_edge_dynamics(g, params, cfg)
                                        : run_vertex_dynamics(g, params, cfg);
        row.converged = trace.converged;
        row.rounds_used = trace.rounds_used;
        row.mutations = trace.mutation_count;
        row.final_welfare = to_string(welfare(trace.final_graph, params));
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    }
  };
  if (jobs < 1) jobs = 1;
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  json doc;
  doc["version"] = "netform-batch/1";
  doc["tool"] = tool_stamp();
  doc["config"] = config;
  doc["warnings"] = json::array();
  for (std::size_t i = 0; i < seeds.size(); ++i)
    for (std::size_t j = i + 1; j < seeds.size(); ++j)
      if (seeds[i] == seeds[j])
        doc["warnings"].push_back("duplicate seed " + std::to_string(seeds[i]) + " at trials " +
                                  std::to_string(i) + " and " + std::to_string(j));
  doc["trials"] = json::array();
  long converged_count = 0;
  long total_rounds = 0;
  long ok_count = 0;
  std::optional<Rational> min_welfare, max_welfare;
  Rational welfare_sum;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const TrialRow& row = rows[i];
    json trial = {{"index", i}, {"seed", row.seed}};
    if (!row.error.empty()) {
      trial["error"] = row.error;
    } else {
      trial["converged"] = row.converged;
      trial["rounds_used"] = row.rounds_used;
      trial["mutations"] = row.mutations;
      trial["final_welfare"] = row.final_welfare;
      ++ok_count;
      if (row.converged) ++converged_count;
      total_rounds += row.rounds_used;
      const Rational w = parse_rational(row.final_welfare);
      welfare_sum += w;
      if (!min_welfare || w < *min_welfare) min_welfare = w;
      if (!max_welfare || w > *max_welfare) max_welfare = w;
    }
    doc["trials"].push_back(trial);
  }
  json aggregate = {{"trials", seeds.size()}, {"completed", ok_count},
                    {"converged", converged_count}};
  if (ok_count > 0) {
    aggregate["convergence_rate"] = to_string(Rational(converged_count, ok_count));
    aggregate["mean_rounds"] = to_string(Rational(total_rounds, ok_count));
    aggregate["welfare_min"] = to_string(*min_welfare);
    aggregate["welfare_max"] = to_string(*max_welfare);
    aggregate["welfare_mean"] = to_string(welfare_sum / Rational(ok_count));
  }
  doc["aggregate"] = aggregate;
  if (!out_path.empty()) write_text_file(out_path, doc.dump(2) + "\n");

  std::cout << "trials: " << seeds.size() << "\n";
  std::cout << "converged: " << converged_count << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"netform: a network formation game engine (speaking/listening layers,"
               " exact rational utilities, seeded dynamics)"};
  app.require_subcommand(1);

  // generate
  auto* generate = app.add_subcommand("generate", "construct a graph and write its document");
  GraphSpec spec;
  std::string gen_out;
  std::string gen_mode = "directed";
  generate->add_option("--type", spec.type,
                       "one of: empty, cycle, complete, flower, kautz, random")
      ->required();
  generate->add_option("--n", spec.n, "vertex count");
  generate->add_option("--k", spec.k, "flower diameter bound / kautz diameter");
  generate->add_option("--d", spec.d, "kautz out-degree");
  generate->add_option("--D", spec.D, "kautz string length (= diameter)");
  generate->add_option("--p", spec.p, "random edge probability (rational)");
  auto* gen_seed = generate->add_option("--seed", spec.seed, "random constructor seed");
  generate->add_option("--mode", gen_mode, "directed | bidirected");
  generate->add_option("--out", gen_out, "output graph document path")->required();

  // dynamics
  auto* dynamics = app.add_subcommand("dynamics", "run seeded asynchronous dynamics");
  std::string dyn_graph, dyn_trace, dyn_final, dyn_variant = "edge",
                                               dyn_vertex_application = "simultaneous";
  ParamsCli dyn_params;
  DynamicsConfig dyn_cfg;
  dynamics->add_option("--graph", dyn_graph, "input graph document")->required();
  dyn_params.attach(dynamics);
  auto* dyn_seed = dynamics->add_option("--seed", dyn_cfg.seed, "dynamics seed");
  dynamics->add_option("--max-rounds", dyn_cfg.max_rounds, "round cap");
  dynamics->add_option("--scan-interval", dyn_cfg.stability_scan_interval,
                       "no-op rounds between stability scans (0 = 2n(n-1))");
  dynamics->add_option("--variant", dyn_variant, "edge | vertex");
  dynamics->add_option("--vertex-application", dyn_vertex_application,
                       "simultaneous | sequential (vertex variant)");
  dynamics->add_option("--trace-out", dyn_trace, "trace file path");
  dynamics->add_option("--final-out", dyn_final, "final graph document path");

  // analyze
  auto* analyze_cmd = app.add_subcommand("analyze", "stability / welfare / symmetry report");
  std::string ana_graph, ana_out, ana_clustering;
  ParamsCli ana_params;
  bool ana_nash = false;
  int ana_dim = 1;
  analyze_cmd->add_option("--graph", ana_graph, "input graph document")->required();
  ana_params.attach(analyze_cmd);
  analyze_cmd->add_flag("--nash", ana_nash, "run the exhaustive best-response check");
  analyze_cmd->add_option("--clustering-dim", ana_dim, "clustering vector length");
  analyze_cmd->add_option("--out", ana_out, "report file path");
  analyze_cmd->add_option("--clustering-out", ana_clustering,
                          "clustering vector as tab-delimited rows");

  // census
  auto* census = app.add_subcommand("census", "enumerate all labeled graphs at small n");
  int census_n = 3;
  std::string census_mode = "directed", census_out;
  ParamsCli census_params;
  census->add_option("--n", census_n, "vertex count")->required();
  census->add_option("--mode", census_mode, "directed | bidirected");
  census_params.attach(census);
  census->add_option("--out", census_out, "census file path");

  // batch
  auto* batch = app.add_subcommand("batch", "run a list of seeded dynamics trials");
  std::string batch_config, batch_out;
  int batch_jobs = 1;
  batch->add_option("--config", batch_config, "batch config (JSON)")->required();
  batch->add_option("--out", batch_out, "results file path");
  batch->add_option("--jobs", batch_jobs, "worker threads (trial-level only)");

  // converge-path
  auto* cpath = app.add_subcommand("converge-path",
                                   "construct an explicit move sequence to a stable graph");
  std::string cp_graph, cp_moves, cp_final;
  ParamsCli cp_params;
  cp_params.k = "inf";
  cpath->add_option("--graph", cp_graph, "input graph document (directed)")->required();
  cpath->add_option("--cs", cp_params.cs, "speaking edge cost (rational)");
  cpath->add_option("--moves-out", cp_moves, "moves file path");
  cpath->add_option("--final-out", cp_final, "stable graph document path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (generate->parsed()) {
      spec.mode = parse_mode(gen_mode);
      spec.has_seed = gen_seed->count() > 0;
      return run_generate(spec, gen_out);
    }
    if (dynamics->parsed()) {
      dyn_cfg.variant = dyn_variant == "vertex" ? DynamicsVariant::vertex : DynamicsVariant::edge;
      dyn_cfg.vertex_application = dyn_vertex_application == "sequential"
                                       ? VertexApplication::sequential
                                       : VertexApplication::simultaneous;
      return run_dynamics_cmd(dyn_graph, dyn_params, dyn_cfg, dyn_seed->count() > 0, dyn_trace,
                              dyn_final);
    }
    if (analyze_cmd->parsed())
      return run_analyze(ana_graph, ana_params, ana_nash, ana_dim, ana_out, ana_clustering);
    if (census->parsed())
      return run_census(census_n, parse_mode(census_mode), census_params, census_out);
    if (batch->parsed()) return run_batch(batch_config, batch_out, batch_jobs);
    if (cpath->parsed()) return run_converge_path(cp_graph, cp_params, cp_moves, cp_final);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
