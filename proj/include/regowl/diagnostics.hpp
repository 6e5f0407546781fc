#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace regowl {

enum class Severity { Error, Warning };

inline const char* to_string(Severity s) { return s == Severity::Error ? "ERROR" : "WARNING"; }

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;
  int unit_id = 0;
  std::string message;

  bool operator==(const Diagnostic&) const = default;
};

inline bool has_errors(const std::vector<Diagnostic>& ds) {
  for (const auto& d : ds)
    if (d.severity == Severity::Error) return true;
  return false;
}

/// One `SEVERITY CODE unit=<id> <message>` line per diagnostic.
inline std::string format_text(const std::vector<Diagnostic>& ds) {
  std::string out;
  for (const auto& d : ds)
    out += std::string(to_string(d.severity)) + " " + d.code + " unit=" + std::to_string(d.unit_id) + " " +
           d.message + "\n";
  return out;
}

inline nlohmann::json to_json(const std::vector<Diagnostic>& ds) {
  auto arr = nlohmann::json::array();
  for (const auto& d : ds)
    arr.push_back({{"severity", to_string(d.severity)}, {"code", d.code}, {"unit_id", d.unit_id}, {"message", d.message}});
  return arr;
}

}  // namespace regowl
