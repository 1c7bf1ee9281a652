#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "teamcraft/actionlang/ast.hpp"
#include "teamcraft/actionlang/lexer.hpp"

namespace teamcraft::actionlang {

inline constexpr int kMaxNesting = 8;

struct ParseError {
  int line = 1;
  int column = 1;
  std::string message;
  std::vector<std::string> expected;

  std::string describe() const;
  bool operator==(const ParseError&) const = default;
};

using ParseResult = std::variant<Program, ParseError>;

// `end` is the position just past the source, used for errors at end of input;
// line 0 means "infer it from the last token".
ParseResult parse(const std::vector<Token>& tokens, SourcePos end = SourcePos{0, 0});
ParseResult parse_source(std::string_view source);

SourcePos end_position(std::string_view source);

}  // namespace teamcraft::actionlang
