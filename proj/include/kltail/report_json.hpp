#pragma once

#include <json.hpp>

#include "kltail/experiments.hpp"
#include "kltail/ingest.hpp"
#include "kltail/inference.hpp"

namespace kltail {

// Field layouts are documented under docs/schema/.
nlohmann::json to_json(const TestConfig& config);
nlohmann::json to_json(const TestReport& report);
nlohmann::json to_json(const CopulaModel& model);
nlohmann::json to_json(const PowerPoint& point);
nlohmann::json to_json(const PowerCurve& curve);
nlohmann::json summary_json(const NullStudy& study);
nlohmann::json to_json(const SeasonComparison& comparison);

// Reproduction manifest: command, arguments, seed, library version.
nlohmann::json make_manifest(std::string_view command, const nlohmann::json& arguments, std::uint64_t seed);

}  // namespace kltail
