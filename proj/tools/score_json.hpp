#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "graphprobe/probes.hpp"

namespace graphprobe::cli {

using Json = nlohmann::ordered_json;

/// A probe result plus the file(s) it was computed from.
struct ScoreRecord {
  ProbeScore score;
  std::string source;
};

Json to_json(const ScoreRecord& record);
Json to_json(const std::vector<ScoreRecord>& records);

/// Fields needed by `report`: model, probe, metric, score.
struct ReportEntry {
  std::string model;
  std::string probe;
  std::string metric;
  double value = 0.0;
};

std::vector<ReportEntry> report_entries(const nlohmann::json& document, const std::string& origin);

}  // namespace graphprobe::cli
