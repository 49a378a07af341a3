#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include "digest.hpp"
#include "graphprobe/error.hpp"
#include "graphprobe/io.hpp"
#include "graphprobe/metrics.hpp"
#include "graphprobe/version.hpp"
#include "table.hpp"

namespace graphprobe::cli {

namespace fs = std::filesystem;

namespace {

void add_common(CLI::App* sub, CommonOptions& o) {
  sub->add_option("--seed", o.seed, "Random seed (falls back to $GRAPHPROBE_SEED, then 0)");
  sub->add_option("--out", o.out, "Write the scores as a JSON array");
  sub->add_option("--manifest", o.manifest, "Run manifest path (default <out>.manifest.json)");
  sub->add_option("--task", o.task, "Downstream task tag recorded with the run");
  sub->add_option("--train-fraction", o.train_fraction, "Share of pairs used for training")
      ->check(CLI::Range(0.0, 1.0));
  sub->add_option("--lr", o.learning_rate, "Learning rate")->check(CLI::NonNegativeNumber);
  sub->add_option("--epochs", o.epochs, "Training epochs")->check(CLI::PositiveNumber);
  sub->add_option("--batch", o.batch_size, "Minibatch size")->check(CLI::PositiveNumber);
  sub->add_option("--optimizer", o.optimizer, "sgd or adam")->check(CLI::IsMember({"sgd", "adam"}));
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  const char* env = std::getenv("GRAPHPROBE_SEED");
  if (env == nullptr || *env == '\0') return 0;
  std::uint64_t value = 0;
  const std::string text(env);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError("GRAPHPROBE_SEED must be a non-negative integer, got '" + text + "'");
  }
  return value;
}

TrainConfig train_config(const CommonOptions& o, std::uint64_t seed) {
  TrainConfig tc;
  tc.learning_rate = o.learning_rate;
  tc.epochs = o.epochs;
  tc.batch_size = o.batch_size;
  tc.optimizer = parse_optimizer_kind(o.optimizer);
  tc.seed = seed;
  try {
    tc.validate();
  } catch (const ValidationError& e) {
    throw UsageError(e.what());
  }
  return tc;
}

Json train_json(const TrainConfig& tc) {
  Json j;
  j["learning_rate"] = tc.learning_rate;
  j["epochs"] = tc.epochs;
  j["batch_size"] = tc.batch_size;
  j["optimizer"] = to_string(tc.optimizer);
  return j;
}

void validate_probe(const ProbeConfig& pc) {
  try {
    pc.validate();
  } catch (const ValidationError& e) {
    throw UsageError(e.what());
  }
}

// Runs `task` on every item concurrently; results keep the input order.
template <typename Item, typename Task>
std::vector<ScoreRecord> run_all(const std::vector<Item>& items, Task task) {
  std::vector<std::future<ScoreRecord>> futures;
  futures.reserve(items.size());
  for (const auto& item : items) futures.push_back(std::async(std::launch::async, task, std::cref(item)));
  std::vector<ScoreRecord> out;
  out.reserve(items.size());
  for (auto& f : futures) out.push_back(f.get());
  return out;
}

std::vector<fs::path> graph_inputs(const std::string& graph) {
  std::vector<fs::path> inputs{graph};
  const auto sidecar = labels_sidecar_path(graph);
  if (fs::exists(sidecar)) inputs.push_back(sidecar);
  return inputs;
}

std::string contextual(const std::string& where, const std::exception& e) { return where + ": " + e.what(); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (const char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string short_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

nlohmann::json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

struct StructureModel {
  std::string name;
  std::string source;
  std::vector<fs::path> files;
};

std::vector<StructureModel> structure_models(const StructureOptions& o, std::size_t num_graphs) {
  std::vector<StructureModel> models;
  for (const auto& dir : o.embedding_dirs) {
    StructureModel m;
    m.source = dir;
    std::vector<std::size_t> missing;
    for (std::size_t k = 0; k < num_graphs; ++k) {
      const fs::path file = fs::path(dir) / ("g" + std::to_string(k) + ".emb");
      if (!fs::is_regular_file(file)) missing.push_back(k);
      m.files.push_back(file);
    }
    if (!missing.empty()) {
      std::string list;
      for (const auto k : missing) list += (list.empty() ? "" : ", ") + std::to_string(k);
      throw Error("embeddings directory " + dir + " has no file for graph indices " + list);
    }
    models.push_back(std::move(m));
  }
  for (const auto& manifest : o.embedding_manifests) {
    const auto doc = read_json(manifest);
    const auto base = fs::path(manifest).parent_path();
    const auto& list = doc.is_array() ? doc : nlohmann::json::array({doc});
    for (std::size_t e = 0; e < list.size(); ++e) {
      const auto& entry = list[e];
      const std::string where = manifest + " entry " + std::to_string(e);
      if (!entry.is_object() || !entry.contains("files") || !entry.at("files").is_array()) {
        throw ValidationError(where + ": expected an object with a \"files\" array");
      }
      StructureModel m;
      m.source = where;
      if (entry.contains("model")) m.name = entry.at("model").get<std::string>();
      for (const auto& f : entry.at("files")) {
        const fs::path p(f.get<std::string>());
        m.files.push_back(p.is_absolute() ? p : base / p);
      }
      if (m.files.size() != num_graphs) {
        throw ValidationError(where + ": lists " + std::to_string(m.files.size()) + " files for " +
                              std::to_string(num_graphs) + " graphs");
      }
      models.push_back(std::move(m));
    }
  }
  if (models.empty()) throw UsageError("probe-structure needs --embeddings-dir or --embedding-manifest");
  return models;
}

}  // namespace

Cli::Cli() {
  app_.set_version_flag("--version", std::string(kVersion));
  app_.require_subcommand(1);

  auto* c = app_.add_subcommand("probe-centrality", "Pairwise centrality-comparison probe");
  c->add_option("--graph", centrality_.graph, "Edge-list file")->required()->check(CLI::ExistingFile);
  c->add_option("--embeddings", centrality_.embeddings, "Embedding files, one score each")
      ->required()
      ->check(CLI::ExistingFile);
  c->add_option("--kind", centrality_.kind, "ec (eigenvector) or bc (betweenness)")
      ->check(CLI::IsMember({"ec", "bc"}));
  c->add_option("--pairs", centrality_.pairs, "Ordered node pairs to sample (default min(10n, n(n-1)))")
      ->check(CLI::Range(std::size_t{10}, std::numeric_limits<std::size_t>::max()));
  c->add_option("--split", centrality_.split, "Hold out pairs (pair) or whole nodes (node)")
      ->check(CLI::IsMember({"pair", "node"}));
  c->add_option("--hidden", centrality_.hidden, "MLP hidden width (default: embedding dimension)")
      ->check(CLI::PositiveNumber);
  add_common(c, common_);

  auto* d = app_.add_subcommand("probe-distance", "Bilinear distance probe");
  d->add_option("--graph", distance_.graph, "Edge-list file")->required()->check(CLI::ExistingFile);
  d->add_option("--embeddings", distance_.embeddings, "Embedding files, one score each")
      ->required()
      ->check(CLI::ExistingFile);
  d->add_option("--cutoff", distance_.cutoff, "Largest hop distance used")
      ->check(CLI::Range(std::uint32_t{1}, std::numeric_limits<std::uint32_t>::max()));
  d->add_option("--rank", distance_.rank, "Rows of the probe map (default: embedding dimension)")
      ->check(CLI::PositiveNumber);
  add_common(d, common_);

  auto* s = app_.add_subcommand("probe-structure", "Graph-level structural probe over a collection");
  s->add_option("--collection", structure_.collection, "Collection file (JSON lines)")
      ->required()
      ->check(CLI::ExistingFile);
  s->add_option("--embeddings-dir", structure_.embedding_dirs, "Directory of g<index>.emb files, one per model")
      ->check(CLI::ExistingDirectory);
  s->add_option("--embedding-manifest", structure_.embedding_manifests,
                "JSON file listing embedding files per graph instead of a directory")
      ->check(CLI::ExistingFile);
  s->add_option("--readout", structure_.readout, "sum, mean or max")->check(CLI::IsMember({"sum", "mean", "max"}));
  s->add_option("--wl-iters", structure_.wl_iters, "Weisfeiler-Lehman rounds")->check(CLI::PositiveNumber);
  s->add_option("--jaccard", structure_.jaccard, "multiset or set")->check(CLI::IsMember({"multiset", "set"}));
  add_common(s, common_);

  auto* r = app_.add_subcommand("report", "Merge score files into a ranked table");
  r->add_option("--in", report_.inputs, "Score JSON files")->required()->check(CLI::ExistingFile);
  r->add_option("--out", report_.out, "Output file (.csv or .json)");
  r->add_option("--format", report_.format, "csv or json (default: from --out extension)")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* h = app_.add_subcommand("homophily", "Edge homophily ratio of a labelled graph");
  h->add_option("--graph", homophily_graph_, "Edge-list file with a .labels sidecar")
      ->required()
      ->check(CLI::ExistingFile);

  auto* p = app_.add_subcommand("replay", "Recompute a run manifest and compare scores bit for bit");
  p->add_option("--manifest", replay_manifest_, "Manifest written by a probe command")
      ->required()
      ->check(CLI::ExistingFile);
}

void Cli::parse(std::vector<std::string> args) {
  args_ = args;
  std::reverse(args.begin(), args.end());
  app_.parse(args);
}

int Cli::execute(std::ostream& out) {
  for (const char* name : {"probe-centrality", "probe-distance", "probe-structure"}) {
    if (app_.got_subcommand(name)) return emit_probe(run_probe(name), out);
  }
  if (app_.got_subcommand("report")) return run_report(out);
  if (app_.got_subcommand("homophily")) return run_homophily(out);
  return run_replay(out);
}

ProbeRun Cli::run_probe(const std::string& command, std::optional<std::uint64_t> seed_override) {
  ProbeRun run;
  run.command = command;
  run.seed = seed_override ? *seed_override : resolve_seed(common_.seed);
  const TrainConfig tc = train_config(common_, run.seed);

  ProbeConfig pc;
  pc.task_tag = common_.task;
  pc.train_fraction = common_.train_fraction;
  pc.seed = run.seed;

  Json config;
  config["task"] = common_.task;
  config["train_fraction"] = common_.train_fraction;
  config["training"] = train_json(tc);

  if (command == "probe-centrality") {
    const auto& o = centrality_;
    pc.probe_kind = o.kind == "ec" ? ProbeKind::centrality_ec : ProbeKind::centrality_bc;
    pc.pair_sample_size = o.pairs;
    pc.pair_split = parse_pair_split(o.split);
    pc.hidden_dim = o.hidden;
    validate_probe(pc);
    const Graph g = load_graph(o.graph);
    const auto kind = o.kind == "ec" ? CentralityKind::eigenvector : CentralityKind::betweenness;
    const auto centrality = kind == CentralityKind::eigenvector ? eigenvector_centrality(g) : betweenness_centrality(g);
    if (g.num_nodes() < 2) throw ValidationError("centrality probe needs at least two nodes");
    config["graph"] = o.graph;
    config["kind"] = o.kind;
    config["pairs"] = o.pairs.value_or(default_pair_sample_size(g.num_nodes()));
    config["split"] = o.split;
    if (o.hidden) config["hidden"] = *o.hidden;
    run.inputs = graph_inputs(o.graph);
    run.scores = run_all(o.embeddings, [&](const std::string& path) {
      try {
        const auto emb = load_embeddings(path);
        if (emb.num_nodes() != g.num_nodes()) {
          throw ValidationError("covers " + std::to_string(emb.num_nodes()) + " nodes, graph has " +
                                std::to_string(g.num_nodes()));
        }
        return ScoreRecord{centrality_probe(centrality, emb, pc, tc), path};
      } catch (const UsageError&) {
        throw;
      } catch (const std::exception& e) {
        throw Error(contextual(path, e));
      }
    });
    for (const auto& e : o.embeddings) run.inputs.emplace_back(e);
  } else if (command == "probe-distance") {
    const auto& o = distance_;
    pc.probe_kind = ProbeKind::distance;
    pc.distance_cutoff = o.cutoff;
    pc.distance_rank = o.rank;
    validate_probe(pc);
    const Graph g = load_graph(o.graph);
    config["graph"] = o.graph;
    config["cutoff"] = o.cutoff;
    if (o.rank) config["rank"] = *o.rank;
    run.inputs = graph_inputs(o.graph);
    run.scores = run_all(o.embeddings, [&](const std::string& path) {
      const auto emb = [&] {
        try {
          return load_embeddings(path);
        } catch (const std::exception& e) {
          throw Error(contextual(path, e));
        }
      }();
      if (o.rank && *o.rank > emb.dim()) {
        throw UsageError("--rank " + std::to_string(*o.rank) + " exceeds the dimension " +
                         std::to_string(emb.dim()) + " of " + path);
      }
      try {
        return ScoreRecord{distance_probe(g, emb, pc, tc), path};
      } catch (const std::exception& e) {
        throw Error(contextual(path, e));
      }
    });
    for (const auto& e : o.embeddings) run.inputs.emplace_back(e);
  } else {
    const auto& o = structure_;
    pc.probe_kind = ProbeKind::structure;
    pc.readout_mode = parse_readout_mode(o.readout);
    pc.wl_iterations = o.wl_iters;
    pc.jaccard_mode = o.jaccard == "set" ? JaccardMode::set : JaccardMode::multiset;
    validate_probe(pc);
    const auto coll = load_collection(o.collection);
    const auto models = structure_models(o, coll.size());
    config["collection"] = o.collection;
    config["readout"] = o.readout;
    config["wl_iterations"] = o.wl_iters;
    config["jaccard"] = o.jaccard;
    run.inputs = {o.collection};
    for (const auto& m : o.embedding_manifests) run.inputs.emplace_back(m);
    run.scores = run_all(models, [&](const StructureModel& m) {
      try {
        std::vector<EmbeddingMatrix> embs;
        embs.reserve(m.files.size());
        for (const auto& f : m.files) {
          try {
            embs.push_back(load_embeddings(f));
          } catch (const std::exception& e) {
            throw Error(contextual(f.string(), e));
          }
        }
        auto score = structural_probe(coll, embs, pc);
        if (!m.name.empty()) score.model_tag = m.name;
        return ScoreRecord{std::move(score), m.source};
      } catch (const std::exception& e) {
        throw Error(contextual(m.source, e));
      }
    });
    for (const auto& m : models) run.inputs.insert(run.inputs.end(), m.files.begin(), m.files.end());
  }
  run.config = std::move(config);
  return run;
}

int Cli::emit_probe(const ProbeRun& run, std::ostream& out) {
  const Json scores = to_json(run.scores);
  if (!common_.out.empty()) write_text(common_.out, scores.dump(2) + "\n");
  fs::path manifest_path = common_.manifest;
  if (manifest_path.empty() && !common_.out.empty()) manifest_path = common_.out + ".manifest.json";
  if (!manifest_path.empty()) {
    Json m;
    m["tool"] = "graphprobe";
    m["version"] = std::string(kVersion);
    m["command"] = run.command;
    m["argv"] = args_;
    m["seed"] = run.seed;
    m["config"] = run.config;
    Json inputs = Json::array();
    for (const auto& p : run.inputs) inputs.push_back(Json{{"path", p.string()}, {"sha256", sha256_file(p)}});
    m["inputs"] = std::move(inputs);
    m["scores"] = scores;
    write_text(manifest_path, m.dump(2) + "\n");
  }

  std::vector<std::vector<std::string>> rows;
  for (const auto& r : run.scores) {
    const auto& s = r.score;
    std::string detail;
    if (s.probe_kind == ProbeKind::distance) {
      detail = "mean loss " + short_number(s.auxiliary.at("test_loss_mean"));
    } else if (s.probe_kind == ProbeKind::structure) {
      detail = "undefined anchors " + short_number(s.auxiliary.at("undefined_anchors"));
    } else {
      detail = "f1 " + fixed(s.auxiliary.at("f1"), 2);
    }
    rows.push_back({s.model_tag, to_string(s.probe_kind), s.metric_name, short_number(s.score), detail, r.source});
  }
  print_table(out, {"model", "probe", "metric", "score", "detail", "source"}, rows);
  return 0;
}

int Cli::run_report(std::ostream& out) {
  std::string format = report_.format;
  if (format.empty() && !report_.out.empty()) {
    const auto ext = fs::path(report_.out).extension().string();
    if (ext == ".csv") format = "csv";
    if (ext == ".json") format = "json";
    if (format.empty()) throw UsageError("cannot infer the report format from '" + report_.out + "'; pass --format");
  }
  if (!format.empty() && report_.out.empty()) throw UsageError("--format needs --out");

  ScoreTable table;
  std::map<std::pair<std::string, std::string>, std::string> origin;
  for (const auto& path : report_.inputs) {
    for (const auto& e : report_entries(read_json(path), path)) {
      const std::string metric = e.probe + "/" + e.metric;
      const auto [it, fresh] = origin.try_emplace({e.model, metric}, path);
      if (!fresh) {
        throw ValidationError("duplicate score for model '" + e.model + "' metric '" + metric + "' in " +
                              it->second + " and " + path);
      }
      table[e.model][metric] = e.value;
    }
  }
  const auto ranked = rank_models(table);

  if (format == "csv") {
    std::string text = "model,metric,value,rank\n";
    for (const auto& row : ranked.rows) {
      text += csv_field(row.model) + "," + csv_field(row.metric) + "," + format_double(row.value) + "," +
              std::to_string(row.rank) + "\n";
    }
    write_text(report_.out, text);
  } else if (format == "json") {
    Json rows = Json::array();
    for (const auto& row : ranked.rows) {
      rows.push_back(Json{{"model", row.model}, {"metric", row.metric}, {"value", row.value}, {"rank", row.rank}});
    }
    write_text(report_.out, rows.dump(2) + "\n");
  }

  std::vector<std::vector<std::string>> rows;
  for (const auto& row : ranked.rows) {
    rows.push_back({row.metric, row.model, short_number(row.value) + " (" + std::to_string(row.rank) + ")"});
  }
  print_table(out, {"metric", "model", "value (rank)"}, rows);
  return 0;
}

int Cli::run_homophily(std::ostream& out) {
  const Graph g = load_graph(homophily_graph_);
  out << format_double(homophily_ratio(g)) << '\n';
  return 0;
}

int Cli::run_replay(std::ostream& out) {
  std::ifstream in(replay_manifest_);
  Json manifest;
  try {
    manifest = Json::parse(in);
  } catch (const Json::exception& e) {
    throw ParseError(replay_manifest_ + ": " + e.what());
  }
  std::vector<std::string> argv;
  std::string command;
  std::uint64_t seed = 0;
  try {
    if (manifest.at("tool").get<std::string>() != "graphprobe") throw ValidationError("not a graphprobe manifest");
    argv = manifest.at("argv").get<std::vector<std::string>>();
    command = manifest.at("command").get<std::string>();
    seed = manifest.at("seed").get<std::uint64_t>();
    for (const auto& input : manifest.at("inputs")) {
      const auto path = input.at("path").get<std::string>();
      if (sha256_file(path) != input.at("sha256").get<std::string>()) {
        throw ValidationError("input " + path + " changed since the manifest was written");
      }
    }
  } catch (const Json::exception& e) {
    throw ValidationError(replay_manifest_ + ": " + e.what());
  }

  Cli again;
  try {
    again.parse(argv);
  } catch (const CLI::ParseError& e) {
    throw ValidationError(replay_manifest_ + ": recorded arguments no longer parse: " + e.what());
  }
  const auto run = again.run_probe(command, seed);
  const Json fresh = to_json(run.scores);
  const Json& recorded = manifest.at("scores");
  if (fresh.dump() == recorded.dump()) {
    out << "replay: " << fresh.size() << " score(s) reproduced exactly\n";
    return 0;
  }
  std::cerr << "graphprobe: replay mismatch\n";
  for (std::size_t k = 0; k < std::max(fresh.size(), recorded.size()); ++k) {
    const std::string a = k < recorded.size() ? recorded[k].dump() : "<missing>";
    const std::string b = k < fresh.size() ? fresh[k].dump() : "<missing>";
    if (a != b) std::cerr << "  score " << k << "\n    recorded: " << a << "\n    replayed: " << b << '\n';
  }
  return 1;
}

}  // namespace graphprobe::cli
