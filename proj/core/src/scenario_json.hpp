#pragma once

// Internal: JSON-level scenario handling shared by scenario.cpp and harness.cpp.

#include <json.hpp>

#include <span>
#include <string>
#include <string_view>

#include "talbot/scenario.hpp"

namespace talbot::detail {

using nlohmann::json;

json parse_document(std::string_view text);
/// `a.b.c=value`; value is parsed as JSON when possible, else taken as a string.
void apply_override(json& doc, const std::string& assignment);
Scenario scenario_from_json(const json& doc, std::string_view text);

/// TimePoint from a number or a {"p", "q"} object.
TimePoint parse_time(const json& j, const std::string& field);

}  // namespace talbot::detail
