#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace teamcraft::actionlang {

struct SourcePos {
  int line = 1;
  int column = 1;
  bool operator==(const SourcePos&) const = default;
};

enum class TokenKind : std::uint8_t {
  Ident,
  Keyword,
  String,
  Int,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Comma,
  Semicolon,
  Error,
};

std::string_view to_string(TokenKind kind);

struct Token {
  TokenKind kind = TokenKind::Error;
  // Identifier or keyword spelling, decoded string contents, or error message.
  std::string text;
  std::int64_t value = 0;
  SourcePos pos;
  bool operator==(const Token&) const = default;
};

bool is_keyword(std::string_view word);

// Never fails: characters that start no token become Error tokens.
std::vector<Token> tokenize(std::string_view source);

}  // namespace teamcraft::actionlang
