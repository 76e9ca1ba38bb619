// relaxmdim command-line front end.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <iterator>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "CLI11.hpp"

#include "relaxmdim/errors.hpp"
#include "relaxmdim/generators.hpp"
#include "relaxmdim/graph.hpp"
#include "relaxmdim/greedy.hpp"
#include "relaxmdim/gw.hpp"
#include "relaxmdim/io.hpp"
#include "relaxmdim/localization.hpp"
#include "relaxmdim/offspring.hpp"
#include "relaxmdim/parallel.hpp"
#include "relaxmdim/tree.hpp"

#ifndef RELAXMDIM_VERSION
#define RELAXMDIM_VERSION "unknown"
#endif

namespace {

using namespace relaxmdim;
using io::json;

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string utc_now() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Everything one invocation reads and writes. Results are buffered and only
// flushed once the command has finished and its witnesses have verified.
struct Run {
  std::string command;
  std::vector<std::string> argv;
  json parameters = json::object();
  std::vector<std::uint64_t> seeds;
  json inputs = json::array();
  json schemas = json::array();
  std::vector<std::pair<std::string, std::string>> files;  // path ("-" = stdout), contents
  std::string output = "-";
  std::string manifest;

  void emit(std::string path, std::string body, const char* schema) {
    schemas.push_back({{"path", path}, {"schema", schema}});
    files.emplace_back(std::move(path), std::move(body));
  }
};

struct LoadedGraph {
  Graph graph;
  std::vector<std::string> labels;
  std::optional<Vertex> root;
};

LoadedGraph load_input(Run& run, const std::string& path, bool lcc) {
  std::string text = read_file(path);
  run.inputs.push_back({{"path", path}, {"bytes", text.size()}, {"sha256", sha256_hex(text)}});
  auto data = load_edge_list(text);
  if (data.self_loops_dropped || data.duplicates_dropped) {
    std::cerr << "note: dropped " << data.self_loops_dropped << " self-loop(s) and "
              << data.duplicates_dropped << " duplicate edge(s)\n";
  }
  run.parameters["self_loops_dropped"] = data.self_loops_dropped;
  run.parameters["duplicates_dropped"] = data.duplicates_dropped;
  LoadedGraph out{std::move(data.graph), std::move(data.labels), data.root};
  if (lcc) {
    if (out.graph.empty()) throw ValidationError("input has no edges");
    auto sub = largest_connected_component(out.graph);
    std::vector<std::string> labels;
    std::optional<Vertex> root;
    for (Vertex i = 0; i < sub.original.size(); ++i) {
      labels.push_back(out.labels[sub.original[i]]);
      if (out.root && sub.original[i] == *out.root) root = i;
    }
    run.parameters["lcc_fraction"] =
        static_cast<double>(sub.graph.order()) / static_cast<double>(out.graph.order());
    out = {std::move(sub.graph), std::move(labels), root};
  }
  if (out.graph.empty()) throw ValidationError("input has no edges");
  return out;
}

json label_list(const LoadedGraph& g, const SensorSet& s) {
  json out = json::array();
  for (Vertex v : s) out.push_back(g.labels[v]);
  return out;
}

[[noreturn]] void verification_failed(const std::string& what) {
  throw std::logic_error("witness failed verification: " + what);
}

// ---------------------------------------------------------------------------

struct Common {
  std::string input;
  bool lcc = false;
};

void cmd_stats(Run& run, const Common& c) {
  auto g = load_input(run, c.input, c.lcc);
  run.parameters["lcc"] = c.lcc;
  json j = json{{"schema", io::kStatsSchema}};
  j.update(io::to_json(graph_stats(g.graph)));
  run.emit(run.output, j.dump(2) + "\n", io::kStatsSchema);
}

struct MdimOpts {
  std::size_t k = 0;
  std::string method = "greedy";
};

void cmd_mdim(Run& run, const Common& c, const MdimOpts& o) {
  auto g = load_input(run, c.input, c.lcc);
  run.parameters["lcc"] = c.lcc;
  run.parameters["k"] = o.k;
  run.parameters["method"] = o.method;
  json j = json{{"schema", io::kMdimSchema}, {"method", o.method}, {"n", g.graph.order()}};
  SensorSet witness;
  bool verified = false;
  if (o.method == "exact-tree") {
    if (!is_tree(g.graph)) throw IncompatibleMethodError("exact-tree requires an acyclic connected input");
    auto rep = exact_tree_md(g.graph, o.k);
    witness = rep.witness;
    j.update(io::to_json(rep));
    verified = is_k_relaxed_resolving(g.graph, witness, static_cast<Distance>(o.k));
  } else if (o.method == "brute") {
    if (g.graph.order() > kBruteForceLimit) {
      throw ResourceRefusalError("brute force is limited to n <= " + std::to_string(kBruteForceLimit) +
                                 ", input has n = " + std::to_string(g.graph.order()));
    }
    auto rep = brute_force_md(g.graph, o.k);
    witness = rep.witness;
    j["k"] = o.k;
    j["md"] = rep.md;
    j["witness"] = witness;
    verified = is_k_relaxed_resolving(g.graph, witness, static_cast<Distance>(o.k));
  } else if (o.method == "greedy") {
    if (!is_connected(g.graph)) throw ValidationError("greedy requires a connected graph; try --lcc");
    auto dm = all_pairs_distances(g.graph);
    auto rep = greedy_k_resolving_set(dm, static_cast<Distance>(o.k));
    witness = rep.sensors;
    j["k"] = o.k;
    j["md"] = witness.size();
    j["witness"] = witness;
    j["trace"] = io::to_json(rep.trace);
    verified = is_k_relaxed_resolving(dm, witness, static_cast<Distance>(o.k));
  } else {
    throw ValidationError("unknown method '" + o.method + "'");
  }
  if (!verified) verification_failed(o.method + " witness for k = " + std::to_string(o.k));
  j["witness_labels"] = label_list(g, witness);
  j["verified"] = verified;
  run.emit(run.output, j.dump(2) + "\n", io::kMdimSchema);
}

struct SweepOpts {
  std::size_t k_max = 0;
  std::string method = "greedy";
};

void cmd_sweep(Run& run, const Common& c, const SweepOpts& o) {
  auto g = load_input(run, c.input, c.lcc);
  run.parameters["lcc"] = c.lcc;
  run.parameters["k_max"] = o.k_max;
  run.parameters["method"] = o.method;
  auto resolver = parse_resolver(o.method);
  if (!is_connected(g.graph)) throw ValidationError("sweep requires a connected graph; try --lcc");
  if (resolver == Resolver::exact_tree && !is_tree(g.graph)) {
    throw IncompatibleMethodError("exact-tree requires an acyclic connected input");
  }
  auto dm = all_pairs_distances(g.graph);
  std::vector<std::size_t> ks(o.k_max + 1);
  std::iota(ks.begin(), ks.end(), std::size_t{0});
  auto rows = sweep_metrics(g.graph, dm, ks, resolver);
  for (const auto& r : rows) {
    if (!is_k_relaxed_resolving(dm, r.sensor_set, static_cast<Distance>(r.k))) {
      verification_failed("sweep row k = " + std::to_string(r.k));
    }
  }
  std::ostringstream csv;
  io::write_sweep_csv(csv, rows);
  run.emit(run.output, csv.str(), io::kSweepSchema);
}

struct TwoStepOpts {
  std::optional<std::size_t> k_max;
  std::string json_path;
};

bool separates(const DistanceMatrix& dm, const SensorSet& sensors, const std::vector<Vertex>& members) {
  std::vector<std::vector<Distance>> vecs;
  for (Vertex u : members) vecs.push_back(identification_vector(dm, u, sensors));
  std::sort(vecs.begin(), vecs.end());
  return std::adjacent_find(vecs.begin(), vecs.end()) == vecs.end();
}

void cmd_two_step(Run& run, const Common& c, const TwoStepOpts& o) {
  auto g = load_input(run, c.input, c.lcc);
  if (!is_connected(g.graph)) throw ValidationError("two-step requires a connected graph; try --lcc");
  auto dm = all_pairs_distances(g.graph);
  std::size_t k_max = o.k_max.value_or(dm.diameter());
  run.parameters["lcc"] = c.lcc;
  run.parameters["k_max"] = k_max;
  auto curve = qstar_curve(dm, k_max);
  json rows = json::array();
  for (const auto& r : curve) {
    if (!is_k_relaxed_resolving(dm, r.s1, static_cast<Distance>(r.k))) {
      verification_failed("phase-1 set for k = " + std::to_string(r.k));
    }
    for (const auto& cls : r.classes) {
      if (!separates(dm, cls.sensors, cls.members)) {
        verification_failed("phase-2 set for k = " + std::to_string(r.k));
      }
    }
    json row = io::to_json(r);
    json worst = json::array();
    for (Vertex v : r.worst_class) worst.push_back(g.labels[v]);
    row["worst_class_labels"] = std::move(worst);
    rows.push_back(std::move(row));
  }
  std::ostringstream csv;
  io::write_two_step_csv(csv, curve);
  run.emit(run.output, csv.str(), io::kTwoStepCsvSchema);

  std::string json_path = o.json_path;
  if (json_path.empty() && run.output != "-") json_path = run.output + ".json";
  if (json_path.empty()) {
    std::cerr << "note: per-k JSON not written; pass --json or --output\n";
  } else {
    json j = {{"schema", io::kTwoStepSchema}, {"n", g.graph.order()}, {"diameter", dm.diameter()},
              {"curve", std::move(rows)}};
    run.emit(json_path, j.dump(2) + "\n", io::kTwoStepSchema);
  }
}

struct GenerateOpts {
  std::string model;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string offspring = "poisson:3";
  double radius_factor = 1.5;
  double zipf_exponent = 2.5;
};

void cmd_generate(Run& run, const GenerateOpts& o) {
  GeneratorConfig cfg;
  cfg.model = parse_model(o.model);
  cfg.n = o.n;
  cfg.seed = o.seed;
  cfg.offspring = o.offspring;
  cfg.radius_factor = o.radius_factor;
  cfg.zipf_exponent = o.zipf_exponent;
  run.parameters["model"] = o.model;
  run.parameters["n"] = o.n;
  run.parameters["seed"] = o.seed;
  if (cfg.model == Model::gw_tree) run.parameters["offspring"] = o.offspring;
  if (cfg.model == Model::rgg) run.parameters["radius_factor"] = o.radius_factor;
  if (cfg.model == Model::config_model) run.parameters["zipf_exponent"] = o.zipf_exponent;
  run.seeds.push_back(o.seed);
  auto gen = generate(cfg);
  std::vector<std::string> header{"model " + o.model + " n " + std::to_string(o.n) + " seed " +
                                  std::to_string(o.seed)};
  std::ostringstream out;
  io::write_edge_list(out, gen.graph, gen.root, header);
  run.emit(run.output, out.str(), "relaxmdim.edge-list/1");
}

struct GWOpts {
  std::string offspring = "poisson:1";
  std::size_t r_max = 9;
};

void cmd_gw_constants(Run& run, const GWOpts& o) {
  run.parameters["offspring"] = o.offspring;
  run.parameters["r_max"] = o.r_max;
  auto xi = OffspringDistribution::parse(o.offspring);
  if (xi.family() == OffspringDistribution::Family::custom) {
    auto path = o.offspring.substr(o.offspring.find(':') + 1);
    std::string text = read_file(path);
    run.inputs.push_back({{"path", path}, {"bytes", text.size()}, {"sha256", sha256_hex(text)}});
  }
  if (xi.criticality_gap() > 1e-9) {
    std::cerr << "warning: offspring mean differs from 1 by " << io::format_double(xi.criticality_gap())
              << "; the constants are not limits of MD/n for this law\n";
  }
  auto consts = xi.family() == OffspringDistribution::Family::poisson
                    ? poisson_closed_form(xi.parameter(), o.r_max)
                    : gw_sequence(xi, o.r_max);
  run.parameters["tail_bound"] = xi.tail_bound();
  std::ostringstream csv;
  io::write_gw_csv(csv, consts);
  run.emit(run.output, csv.str(), io::kGWSchema);
}

// ---------------------------------------------------------------------------

void write_target(const std::string& path, const std::string& body) {
  if (path == "-") {
    std::cout << body << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << body;
  if (!out) throw ValidationError("write to '" + path + "' failed");
}

void finish(Run& run, double seconds) {
  json outputs = json::array();
  for (const auto& [path, body] : run.files) {
    write_target(path, body);
    outputs.push_back({{"path", path}, {"bytes", body.size()}, {"sha256", sha256_hex(body)}});
  }
  json m = {{"schema", io::kManifestSchema},
            {"tool", "relaxmdim"},
            {"version", RELAXMDIM_VERSION},
            {"command", run.command},
            {"argv", run.argv},
            {"parameters", run.parameters},
            {"seeds", run.seeds},
            {"inputs", run.inputs},
            {"outputs", std::move(outputs)},
            {"output_schemas", run.schemas},
            {"threads", thread_count()},
            {"started_utc", utc_now()},
            {"wall_clock_seconds", seconds}};
  std::string path = run.manifest;
  if (path.empty()) path = run.output == "-" ? "" : run.output + ".manifest.json";
  if (path.empty()) {
    std::cerr << m.dump(2) << '\n';
  } else {
    write_target(path, m.dump(2) + "\n");
  }
}

int run_cli(std::vector<std::string> args);

int dispatch(std::vector<std::string> args) {
  CLI::App app{"k-relaxed metric dimension toolkit", "relaxmdim"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", RELAXMDIM_VERSION);

  unsigned threads = 0;
  app.add_option("--threads", threads, "worker thread cap (0 = RELAXMDIM_THREADS or all cores)");

  Run run;
  run.argv = args;
  Common common;
  auto add_io = [&](CLI::App* sub, bool with_input) {
    if (with_input) {
      sub->add_option("input", common.input, "edge-list file")->required()->check(CLI::ExistingFile);
      sub->add_flag("--lcc", common.lcc, "restrict to the largest connected component");
    }
    sub->add_option("-o,--output", run.output, "result file ('-' for stdout)");
    sub->add_option("--manifest", run.manifest, "manifest path (default <output>.manifest.json)");
  };

  auto* stats = app.add_subcommand("stats", "structural statistics as JSON");
  add_io(stats, true);

  MdimOpts mdim_o;
  auto* mdim = app.add_subcommand("mdim", "k-relaxed resolving set as JSON");
  add_io(mdim, true);
  mdim->add_option("--k", mdim_o.k, "relaxation")->required();
  mdim->add_option("--method", mdim_o.method, "exact-tree | greedy | brute")
      ->check(CLI::IsMember({"exact-tree", "greedy", "brute"}));

  SweepOpts sweep_o;
  auto* sweep = app.add_subcommand("sweep", "metrics for k = 0..k-max as CSV");
  add_io(sweep, true);
  sweep->add_option("--k-max", sweep_o.k_max)->required();
  sweep->add_option("--method", sweep_o.method, "exact-tree | greedy")
      ->check(CLI::IsMember({"exact-tree", "greedy"}));

  TwoStepOpts two_o;
  auto* two = app.add_subcommand("two-step", "worst-case two-step sensor counts as CSV and JSON");
  add_io(two, true);
  two->add_option("--k-max", two_o.k_max, "largest k (default: the diameter)");
  two->add_option("--json", two_o.json_path, "per-k JSON (default <output>.json)");

  GenerateOpts gen_o;
  auto* gen = app.add_subcommand("generate", "random graph as an edge list");
  add_io(gen, false);
  gen->add_option("--model", gen_o.model, "ba-tree | gw-tree | config-model | rgg | uniform-tree")
      ->required()
      ->check(CLI::IsMember({"ba-tree", "gw-tree", "config-model", "rgg", "uniform-tree"}));
  gen->add_option("--n", gen_o.n)->required()->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_o.seed)->required();
  gen->add_option("--offspring", gen_o.offspring, "gw-tree law: poisson:x | geometric:p | pmf:file");
  gen->add_option("--radius-factor", gen_o.radius_factor, "rgg radius multiplier");
  gen->add_option("--zipf-exponent", gen_o.zipf_exponent, "config-model degree exponent");

  GWOpts gw_o;
  auto* gw = app.add_subcommand("gw-constants", "fringe constants d,l,s,e,c per r as CSV");
  add_io(gw, false);
  gw->add_option("--offspring", gw_o.offspring, "poisson:x | geometric:p | pmf:file");
  gw->add_option("--r-max", gw_o.r_max);

  std::string replay_path;
  auto* replay = app.add_subcommand("replay", "re-run the command recorded in a manifest");
  replay->add_option("manifest", replay_path)->required()->check(CLI::ExistingFile);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ErrorKind::validation);
  }

  if (*replay) {
    json m;
    try {
      m = json::parse(read_file(replay_path));
    } catch (const json::exception& e) {
      throw ValidationError(std::string("manifest is not valid JSON: ") + e.what());
    }
    if (!m.contains("argv") || !m["argv"].is_array()) throw ValidationError("manifest has no argv");
    return run_cli(m["argv"].get<std::vector<std::string>>());
  }

  set_thread_count(threads);
  auto start = std::chrono::steady_clock::now();
  if (*stats) {
    run.command = "stats";
    cmd_stats(run, common);
  } else if (*mdim) {
    run.command = "mdim";
    cmd_mdim(run, common, mdim_o);
  } else if (*sweep) {
    run.command = "sweep";
    cmd_sweep(run, common, sweep_o);
  } else if (*two) {
    run.command = "two-step";
    cmd_two_step(run, common, two_o);
  } else if (*gen) {
    run.command = "generate";
    cmd_generate(run, gen_o);
  } else if (*gw) {
    run.command = "gw-constants";
    cmd_gw_constants(run, gw_o);
  }
  std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  finish(run, elapsed.count());
  return 0;
}

int run_cli(std::vector<std::string> args) {
  try {
    return dispatch(std::move(args));
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
}

} // namespace

int main(int argc, char** argv) {
  return run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
