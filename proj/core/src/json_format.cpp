#include "rankfreq/json_format.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace rankfreq {
namespace {

void emit(std::ostream& os, const nlohmann::json& j, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      // nlohmann::json objects are std::map-backed, so iteration is sorted.
      os << '{' << nl;
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) os << ',' << nl;
        first = false;
        os << pad << nlohmann::json(key).dump() << (indent > 0 ? ": " : ":");
        emit(os, value, indent, depth + 1);
      }
      os << nl << close_pad << '}';
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << '[' << nl;
      bool first = true;
      for (const auto& value : j) {
        if (!first) os << ',' << nl;
        first = false;
        os << pad;
        emit(os, value, indent, depth + 1);
      }
      os << nl << close_pad << ']';
      return;
    }
    case nlohmann::json::value_t::number_float: {
      const double v = j.get<double>();
      if (std::isfinite(v)) {
        os << format_double(v);
      } else {
        os << "null";
      }
      return;
    }
    default:
      os << j.dump();
  }
}

}  // namespace

std::string format_double(double v) {
  if (!std::isfinite(v)) return {};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_json(std::ostream& os, const nlohmann::json& j, int indent) {
  emit(os, j, indent, 0);
  os << '\n';
}

std::string format_json(const nlohmann::json& j, int indent) {
  std::ostringstream os;
  write_json(os, j, indent);
  return os.str();
}

}  // namespace rankfreq
