#pragma once

#include <string>

#include "json.hpp"

#include "geoverify/geometry.hpp"

namespace geoverify {

using Json = nlohmann::ordered_json;

/// MetricSpec <-> JSON.  Malformed documents raise ParseError.
MetricSpec spec_from_json(const Json& doc);
Json spec_to_json(const MetricSpec& spec);

MetricSpec load_spec(const std::string& path);
void save_text(const std::string& path, const std::string& text);

/// Two-space indented dump with every floating-point number printed as %.17g.
std::string dump_json(const Json& doc);

}  // namespace geoverify
