#pragma once

// Minimal JSON-Schema checker covering the keywords the report schema uses:
// type, required, properties, additionalProperties (bool), items, enum,
// minimum, minItems and local "#/definitions/..." references.

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace crd::detail {

std::vector<std::string> validate_json(const nlohmann::json& document, const nlohmann::json& schema);

const nlohmann::json& report_schema();

}  // namespace crd::detail
