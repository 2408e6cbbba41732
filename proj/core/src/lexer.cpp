#include "thingc/lexer.hpp"

#include <array>
#include <cctype>

namespace thingc {

namespace {

// The `.fsm` format's extra words (fsm, state, initial, output, transition)
// are contextual and stay ordinary identifiers here.
constexpr std::array kKeywords = {
    "model",    "machine", "storage",  "flow",   "trigger", "when",
    "after",    "do",      "emit",     "input",  "event",   "over",
    "duration", "behavior", "repeat",  "create", "process", "release",
    "transfer", "receive", "true",     "false",  "it",      "now",
    "and",      "or",      "not",      "len",    "verdict",
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

}  // namespace

bool is_reserved_word(std::string_view word) {
  for (const char* kw : kKeywords)
    if (word == kw) return true;
  return false;
}

LexResult tokenize(std::string_view source, std::string filename) {
  LexResult result;
  std::size_t pos = 0;
  std::uint32_t line = 1, col = 1;

  auto span_here = [&](std::uint32_t length) {
    return SourceSpan{filename, line, col, length};
  };
  auto advance = [&](std::size_t n) {
    for (std::size_t i = 0; i < n && pos < source.size(); ++i) {
      if (source[pos] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++pos;
    }
  };
  auto push = [&](TokenKind kind, std::string text, std::uint32_t length) {
    Token t;
    t.kind = kind;
    t.text = std::move(text);
    t.span = span_here(length);
    result.tokens.push_back(std::move(t));
    advance(length);
  };

  while (pos < source.size()) {
    char c = source[pos];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && pos + 1 < source.size() && source[pos + 1] == '/') {
      while (pos < source.size() && source[pos] != '\n') advance(1);
      continue;
    }
    if (ident_start(c)) {
      std::size_t end = pos;
      while (end < source.size() && ident_char(source[end])) ++end;
      std::string word(source.substr(pos, end - pos));
      push(is_reserved_word(word) ? TokenKind::Keyword : TokenKind::Identifier, word,
           static_cast<std::uint32_t>(end - pos));
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t end = pos;
      while (end < source.size() && std::isdigit(static_cast<unsigned char>(source[end]))) ++end;
      std::string digits(source.substr(pos, end - pos));
      Token t;
      t.kind = TokenKind::Integer;
      t.text = digits;
      t.value = std::stoll(digits);
      t.span = span_here(static_cast<std::uint32_t>(end - pos));
      result.tokens.push_back(std::move(t));
      advance(end - pos);
      continue;
    }
    if (c == '"') {
      std::string value;
      std::size_t end = pos + 1;
      bool closed = false;
      while (end < source.size()) {
        char d = source[end];
        if (d == '"') {
          closed = true;
          ++end;
          break;
        }
        if (d == '\\' && end + 1 < source.size()) {
          char esc = source[end + 1];
          switch (esc) {
            case 'n': value += '\n'; break;
            case 't': value += '\t'; break;
            case '"': value += '"'; break;
            case '\\': value += '\\'; break;
            default: value += esc;
          }
          end += 2;
          continue;
        }
        if (d == '\n') break;  // unterminated on this line
        value += d;
        ++end;
      }
      if (!closed) {
        result.diagnostics.push_back({Severity::Error, span_here(1),
                                      "unterminated string literal", "string"});
        return result;
      }
      Token t;
      t.kind = TokenKind::String;
      t.text = std::move(value);
      t.span = span_here(static_cast<std::uint32_t>(end - pos));
      result.tokens.push_back(std::move(t));
      advance(end - pos);
      continue;
    }

    auto two = [&](char a, char b) {
      return c == a && pos + 1 < source.size() && source[pos + 1] == b;
    };
    if (two('-', '>')) { push(TokenKind::Arrow, "->", 2); continue; }
    if (two(':', '=')) { push(TokenKind::Assign, ":=", 2); continue; }
    if (two('!', '=')) { push(TokenKind::Ne, "!=", 2); continue; }
    if (two('<', '=')) { push(TokenKind::Le, "<=", 2); continue; }
    if (two('>', '=')) { push(TokenKind::Ge, ">=", 2); continue; }

    switch (c) {
      case '{': push(TokenKind::LBrace, "{", 1); continue;
      case '}': push(TokenKind::RBrace, "}", 1); continue;
      case '[': push(TokenKind::LBracket, "[", 1); continue;
      case ']': push(TokenKind::RBracket, "]", 1); continue;
      case '(': push(TokenKind::LParen, "(", 1); continue;
      case ')': push(TokenKind::RParen, ")", 1); continue;
      case ';': push(TokenKind::Semicolon, ";", 1); continue;
      case ',': push(TokenKind::Comma, ",", 1); continue;
      case '.': push(TokenKind::Dot, ".", 1); continue;
      case '=': push(TokenKind::Eq, "=", 1); continue;
      case '<': push(TokenKind::Lt, "<", 1); continue;
      case '>': push(TokenKind::Gt, ">", 1); continue;
      case '+': push(TokenKind::Plus, "+", 1); continue;
      case '-': push(TokenKind::Minus, "-", 1); continue;
      case '*': push(TokenKind::Star, "*", 1); continue;
      case '/': push(TokenKind::Slash, "/", 1); continue;
      case '%': push(TokenKind::Percent, "%", 1); continue;
      default: break;
    }

    result.diagnostics.push_back({Severity::Error, span_here(1),
                                  std::string("illegal character `") + c + "`",
                                  "IllegalCharacter"});
    return result;
  }

  Token eof;
  eof.kind = TokenKind::EndOfFile;
  eof.span = SourceSpan{filename, line, col, 0};
  result.tokens.push_back(std::move(eof));
  return result;
}

}  // namespace thingc
