#pragma once

#include <string>

#include <json.hpp>

namespace pathrisk::detail {

using Json = nlohmann::ordered_json;

/// Serializes with insertion-ordered keys and every float at 17 significant
/// digits. Non-finite floats become the strings "inf", "-inf" and "nan".
std::string dump(const Json& j, int indent = 2);

/// A finite double as a JSON number, otherwise the string form used by dump().
Json number(double x);

}  // namespace pathrisk::detail
