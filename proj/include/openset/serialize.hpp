#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "openset/harness.hpp"
#include "openset/thresholds.hpp"
#include "openset/trainer.hpp"

namespace openset {

using Json = nlohmann::ordered_json;

Json to_json(const ClassifierModel& model);
ClassifierModel model_from_json(const Json& doc);

Json to_json(const ThresholdSet& thresholds);
ThresholdSet thresholds_from_json(const Json& doc);

Json to_json(const EvalReport& report);
EvalReport report_from_json(const Json& doc);

Json to_json(const ComparisonTable& table);

std::string dump(const Json& doc);
Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace openset
