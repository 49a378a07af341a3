#include "score_json.hpp"

#include <cmath>

#include "graphprobe/error.hpp"

namespace graphprobe::cli {

Json to_json(const ScoreRecord& record) {
  const auto& s = record.score;
  Json out;
  out["model"] = s.model_tag;
  out["probe"] = to_string(s.probe_kind);
  out["metric"] = s.metric_name;
  out["score"] = s.score;
  out["source"] = record.source;
  Json aux = Json::object();
  for (const auto& [key, value] : s.auxiliary) aux[key] = value;
  out["auxiliary"] = std::move(aux);
  if (!s.per_anchor.empty()) out["per_anchor"] = s.per_anchor;
  return out;
}

Json to_json(const std::vector<ScoreRecord>& records) {
  Json out = Json::array();
  for (const auto& r : records) out.push_back(to_json(r));
  return out;
}

std::vector<ReportEntry> report_entries(const nlohmann::json& document, const std::string& origin) {
  const auto* items = &document;
  if (document.is_object() && document.contains("scores")) items = &document.at("scores");
  if (!items->is_array()) throw ValidationError(origin + ": expected a JSON array of scores");
  std::vector<ReportEntry> out;
  for (std::size_t k = 0; k < items->size(); ++k) {
    const auto& item = (*items)[k];
    try {
      ReportEntry e;
      e.model = item.at("model").get<std::string>();
      e.probe = item.at("probe").get<std::string>();
      e.metric = item.at("metric").get<std::string>();
      e.value = item.at("score").get<double>();
      if (!std::isfinite(e.value)) throw ValidationError("non-finite score");
      out.push_back(std::move(e));
    } catch (const nlohmann::json::exception& ex) {
      throw ValidationError(origin + ": score entry " + std::to_string(k) + ": " + ex.what());
    }
  }
  return out;
}

}  // namespace graphprobe::cli
