#pragma once

#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

namespace rankfreq {

// Deterministic JSON text: object keys in sorted order, floating-point
// numbers with 17 significant digits, non-finite numbers as null.
std::string format_json(const nlohmann::json& j, int indent = 2);
void write_json(std::ostream& os, const nlohmann::json& j, int indent = 2);

// %.17g, or empty for non-finite values (CSV cells).
std::string format_double(double v);

}  // namespace rankfreq
