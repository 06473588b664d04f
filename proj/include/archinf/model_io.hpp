#pragma once

#include <string>

#include "json.hpp"

#include "archinf/fit.hpp"
#include "archinf/inference.hpp"
#include "archinf/model.hpp"
#include "archinf/montecarlo.hpp"

namespace archinf {

// A parsed model document: family/orders, parameter values, optional box
// bounds, and the innovation shape.
struct ModelFile {
  ModelSpec spec;
  ParamVector theta;  // bounds populated only when the document has them
  bool has_bounds = false;
  double gamma = 0.5;
};

// Parsing throws config_error naming the offending field path
// (e.g. "params.omega").
ModelFile parse_model_json(const nlohmann::json& doc);
ModelFile load_model_file(const std::string& path);

MCConfig parse_mc_config_json(const nlohmann::json& doc);
MCConfig load_mc_config(const std::string& path);

// CSV series files: UTF-8, '\n' endings, header row "t,y", values with
// 17 significant digits so a read-back is bit exact.
void write_series_csv(const std::string& path, const Series& y);
Series read_series_csv(const std::string& path);

std::string format_g17(double v);

nlohmann::json fit_to_json(const FitResult& fit, const InferenceResult* inference);
nlohmann::json mc_report_to_json(const MCReport& report, const MCConfig& cfg);
nlohmann::json moment_record_to_json(const MomentConditionRecord& rec);

// Write-then-rename so readers never observe a partial file.
void write_text_atomic(const std::string& path, const std::string& contents);

}  // namespace archinf
