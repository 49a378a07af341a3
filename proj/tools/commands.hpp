#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "score_json.hpp"

namespace graphprobe::cli {

/// Bad flag values discovered after parsing; exits with status 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string manifest;
  std::string task;
  double train_fraction = 0.8;
  double learning_rate = 0.001;
  std::size_t epochs = 200;
  std::size_t batch_size = 256;
  std::string optimizer = "adam";
};

struct CentralityOptions {
  std::string graph;
  std::vector<std::string> embeddings;
  std::string kind = "ec";
  std::optional<std::size_t> pairs;
  std::string split = "pair";
  std::optional<std::size_t> hidden;
};

struct DistanceOptions {
  std::string graph;
  std::vector<std::string> embeddings;
  std::uint32_t cutoff = 3;
  std::optional<std::size_t> rank;
};

struct StructureOptions {
  std::string collection;
  std::vector<std::string> embedding_dirs;
  std::vector<std::string> embedding_manifests;
  std::string readout = "sum";
  std::size_t wl_iters = 3;
  std::string jaccard = "multiset";
};

struct ReportOptions {
  std::vector<std::string> inputs;
  std::string out;
  std::string format;
};

/// Result of a probe command before anything is written.
struct ProbeRun {
  std::string command;
  std::uint64_t seed = 0;
  Json config;
  std::vector<std::filesystem::path> inputs;
  std::vector<ScoreRecord> scores;
};

/// The full command surface. One instance parses one argument list.
class Cli {
 public:
  Cli();

  /// Throws CLI::ParseError on bad usage.
  void parse(std::vector<std::string> args);

  /// Runs the parsed subcommand, writing files and stdout. Returns the exit code.
  int execute(std::ostream& out);

  CLI::App& app() { return app_; }

 private:
  ProbeRun run_probe(const std::string& command, std::optional<std::uint64_t> seed_override = std::nullopt);
  int emit_probe(const ProbeRun& run, std::ostream& out);
  int run_report(std::ostream& out);
  int run_homophily(std::ostream& out);
  int run_replay(std::ostream& out);

  CLI::App app_{"Probe graph embeddings for centrality, distance and structure information", "graphprobe"};
  std::vector<std::string> args_;
  CommonOptions common_;
  CentralityOptions centrality_;
  DistanceOptions distance_;
  StructureOptions structure_;
  ReportOptions report_;
  std::string homophily_graph_;
  std::string replay_manifest_;
};

}  // namespace graphprobe::cli
