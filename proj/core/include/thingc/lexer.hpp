#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "thingc/diagnostics.hpp"

namespace thingc {

enum class TokenKind {
  Identifier,
  Integer,
  String,
  Keyword,
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  LParen,
  RParen,
  Semicolon,
  Comma,
  Dot,
  Arrow,    // ->
  Assign,   // :=
  Eq,       // =
  Ne,       // !=
  Lt,
  Le,
  Gt,
  Ge,
  Plus,
  Minus,
  Star,
  Slash,
  Percent,
  EndOfFile,
};

struct Token {
  TokenKind kind = TokenKind::EndOfFile;
  std::string text;
  std::int64_t value = 0;  // Integer tokens
  SourceSpan span;

  bool is_keyword(std::string_view kw) const {
    return kind == TokenKind::Keyword && text == kw;
  }
};

struct LexResult {
  std::vector<Token> tokens;  // always ends with EndOfFile on success
  std::vector<ParseDiagnostic> diagnostics;
  bool ok() const { return !has_errors(diagnostics); }
};

/// Splits source into tokens. Comments (`//` to end of line) and whitespace
/// are skipped. Keywords include the five stage names.
LexResult tokenize(std::string_view source, std::string filename = "<input>");

bool is_reserved_word(std::string_view word);

}  // namespace thingc
