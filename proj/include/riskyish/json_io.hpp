#pragma once

#include <json.hpp>

#include "riskyish/cluster.hpp"
#include "riskyish/scoring.hpp"
#include "riskyish/stats.hpp"

namespace riskyish {

// Entity document: {id, name, description?, scores: {dim: 0..4 | null}, created, modified}.
// A null score means explicitly unscored and is dropped on read.
nlohmann::json to_json(const Entity& entity);
/// Throws Error(validation) for wrong field types or non-integer scores.
Entity entity_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const WeightProfile& weights);
WeightProfile weights_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const RiskyishnessScore& score);
nlohmann::json to_json(const cluster::Linkage& linkage);
nlohmann::json to_json(const stats::DescriptiveStats& s);
nlohmann::json to_json(const ValidationReport& report);

/// Parses text, wrapping parse errors as Error(validation).
nlohmann::json parse_json(std::string_view text, const char* what);

} // namespace riskyish
