#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace thingc {

struct SourceSpan {
  std::string file;
  std::uint32_t line = 1;    // 1-based
  std::uint32_t column = 1;  // 1-based byte column
  std::uint32_t length = 0;
  std::string to_string() const {
    return file + ":" + std::to_string(line) + ":" + std::to_string(column);
  }
};

enum class Severity { Error, Warning };

struct ParseDiagnostic {
  Severity severity = Severity::Error;
  SourceSpan span;
  std::string message;
  std::string rule;  // grammar production or check that produced it

  std::string render() const {
    std::string out = span.to_string();
    out += severity == Severity::Error ? ": error: " : ": warning: ";
    out += message;
    if (!rule.empty()) {
      out += " [";
      out += rule;
      out += "]";
    }
    return out;
  }
};

inline bool has_errors(const std::vector<ParseDiagnostic>& ds) {
  for (const auto& d : ds)
    if (d.severity == Severity::Error) return true;
  return false;
}

}  // namespace thingc
