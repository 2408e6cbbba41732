#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "thingc/diagnostics.hpp"
#include "thingc/document.hpp"
#include "thingc/lexer.hpp"

namespace thingc {

struct ParseResult {
  std::optional<ModelDocument> document;
  std::vector<ParseDiagnostic> diagnostics;
  bool ok() const { return document.has_value(); }
};

/// Parses a `.tm` document. Total: returns either a document or at least one
/// error diagnostic, never both. All dotted paths are resolved; the returned
/// model satisfies the construction invariants.
ParseResult parse(std::string_view source, std::string filename = "<input>");

/// Parses a single expression; used for CLI flag values and tests.
struct ExprParseResult {
  ExprPtr expr;
  std::vector<ParseDiagnostic> diagnostics;
};
ExprParseResult parse_expression(std::string_view source, std::string filename = "<expr>");

/// Parses a literal list like `[1, 2, red]`.
struct LiteralListResult {
  std::optional<std::vector<Thing>> things;
  std::vector<ParseDiagnostic> diagnostics;
};
LiteralListResult parse_literal_list(std::string_view source,
                                     std::string filename = "<literals>");

}  // namespace thingc
