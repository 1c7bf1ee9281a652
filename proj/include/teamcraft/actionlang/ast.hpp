#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "teamcraft/actionlang/lexer.hpp"

namespace teamcraft::actionlang {

// Equality on AST nodes is structural and ignores source positions.

struct Arg {
  std::variant<std::string, std::int64_t> value;
  SourcePos pos;

  bool is_string() const { return std::holds_alternative<std::string>(value); }
  bool is_int() const { return std::holds_alternative<std::int64_t>(value); }
  const std::string& str() const { return std::get<std::string>(value); }
  std::int64_t integer() const { return std::get<std::int64_t>(value); }
  bool operator==(const Arg& o) const { return value == o.value; }
};

struct Call {
  std::string name;
  std::vector<Arg> args;
  SourcePos pos;
  bool operator==(const Call& o) const { return name == o.name && args == o.args; }
};

struct Statement;
using Block = std::vector<Statement>;

struct Repeat {
  std::int64_t count = 0;
  Block body;
  bool operator==(const Repeat& o) const;
};

struct Loop {
  Block body;
  bool operator==(const Loop& o) const;
};

// has(item, count), optionally negated.
struct Condition {
  bool negated = false;
  std::string item;
  std::int64_t count = 1;
  SourcePos pos;
  bool operator==(const Condition& o) const {
    return negated == o.negated && item == o.item && count == o.count;
  }
};

struct If {
  Condition cond;
  Block then_block;
  // `else if` chains are stored as an else block holding one If.
  Block else_block;
  bool has_else = false;
  bool operator==(const If& o) const;
};

struct Statement {
  std::variant<Call, Repeat, Loop, If> node;
  SourcePos pos;
  bool operator==(const Statement& o) const { return node == o.node; }
};

inline bool Repeat::operator==(const Repeat& o) const { return count == o.count && body == o.body; }
inline bool Loop::operator==(const Loop& o) const { return body == o.body; }
inline bool If::operator==(const If& o) const {
  return cond == o.cond && then_block == o.then_block && else_block == o.else_block && has_else == o.has_else;
}

struct Program {
  Block body;
  bool operator==(const Program& o) const { return body == o.body; }
};

// Canonical source text; parse(print(p)) == p.
std::string print(const Program& program);
std::string print(const Call& call);
std::string quote(std::string_view text);

// Every call in the program, in source order.
std::vector<const Call*> calls(const Program& program);
int statement_count(const Program& program);

}  // namespace teamcraft::actionlang
