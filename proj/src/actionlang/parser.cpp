#include "teamcraft/actionlang/parser.hpp"

#include <algorithm>

namespace teamcraft::actionlang {

namespace {

struct Failure {
  ParseError error;
};

class Parser {
 public:
  Parser(const std::vector<Token>& tokens, SourcePos end) : toks_(tokens), end_(end) {}

  Program program() {
    Program p;
    while (!at_end()) p.body.push_back(statement(0));
    return p;
  }

 private:
  bool at_end() const { return i_ >= toks_.size(); }
  const Token* peek() const { return at_end() ? nullptr : &toks_[i_]; }
  SourcePos here() const { return at_end() ? end_ : toks_[i_].pos; }

  [[noreturn]] void fail(std::string message, std::vector<std::string> expected) {
    const auto* t = peek();
    if (t && t->kind == TokenKind::Error) {
      throw Failure{ParseError{t->pos.line, t->pos.column, t->text, std::move(expected)}};
    }
    const auto pos = here();
    throw Failure{ParseError{pos.line, pos.column, std::move(message), std::move(expected)}};
  }

  std::string found() const {
    const auto* t = peek();
    if (!t) return "end of input";
    switch (t->kind) {
      case TokenKind::Ident:
      case TokenKind::Keyword:
        return "'" + t->text + "'";
      case TokenKind::String:
        return "string";
      case TokenKind::Int:
        return "integer";
      default:
        return std::string(to_string(t->kind));
    }
  }

  bool check(TokenKind kind) const { return !at_end() && toks_[i_].kind == kind; }
  bool check_keyword(std::string_view word) const {
    return check(TokenKind::Keyword) && toks_[i_].text == word;
  }

  const Token& expect(TokenKind kind) {
    if (!check(kind)) {
      const std::string want(to_string(kind));
      fail("expected " + want + ", found " + found(), {want});
    }
    return toks_[i_++];
  }

  void expect_keyword(std::string_view word) {
    if (!check_keyword(word)) fail("expected '" + std::string(word) + "', found " + found(), {"'" + std::string(word) + "'"});
    ++i_;
  }

  std::int64_t integer() { return expect(TokenKind::Int).value; }

  Statement statement(int depth) {
    const auto* t = peek();
    if (!t) fail("expected statement", {"identifier", "'repeat'", "'loop'", "'if'"});
    const SourcePos pos = t->pos;
    if (t->kind == TokenKind::Keyword) {
      if (t->text == "repeat") return Statement{repeat(depth), pos};
      if (t->text == "loop") {
        ++i_;
        return Statement{Loop{block(depth)}, pos};
      }
      if (t->text == "if") return Statement{if_statement(depth), pos};
    }
    if (t->kind != TokenKind::Ident) {
      fail("expected statement, found " + found(), {"identifier", "'repeat'", "'loop'", "'if'"});
    }
    Call c = call();
    if (check(TokenKind::Semicolon)) ++i_;
    return Statement{std::move(c), pos};
  }

  Repeat repeat(int depth) {
    expect_keyword("repeat");
    Repeat r;
    if (check(TokenKind::LParen)) {
      ++i_;
      r.count = integer();
      expect(TokenKind::RParen);
    } else if (check(TokenKind::Int)) {
      r.count = integer();
    } else {
      fail("expected repeat count, found " + found(), {"integer", "'('"});
    }
    if (r.count < 0) {
      i_ -= 1;
      fail("repeat count must not be negative", {"integer"});
    }
    r.body = block(depth);
    return r;
  }

  If if_statement(int depth) {
    expect_keyword("if");
    If node;
    node.cond = condition();
    node.then_block = block(depth);
    if (check_keyword("else")) {
      ++i_;
      node.has_else = true;
      if (check_keyword("if")) {
        if (depth + 1 > kMaxNesting) fail("blocks nested deeper than 8 levels", {});
        const SourcePos pos = here();
        node.else_block.push_back(Statement{if_statement(depth + 1), pos});
      } else {
        node.else_block = block(depth);
      }
    }
    return node;
  }

  Condition condition() {
    Condition c;
    c.pos = here();
    if (check_keyword("not")) {
      ++i_;
      c.negated = true;
    }
    if (!check(TokenKind::Ident) || toks_[i_].text != "has") fail("expected has(...), found " + found(), {"'has'", "'not'"});
    ++i_;
    expect(TokenKind::LParen);
    c.item = expect(TokenKind::String).text;
    if (check(TokenKind::Comma)) {
      ++i_;
      c.count = integer();
    }
    expect(TokenKind::RParen);
    return c;
  }

  Block block(int depth) {
    if (depth + 1 > kMaxNesting) fail("blocks nested deeper than 8 levels", {});
    expect(TokenKind::LBrace);
    Block b;
    while (!check(TokenKind::RBrace)) {
      if (at_end()) fail("expected '}' before end of input", {"'}'"});
      b.push_back(statement(depth + 1));
    }
    ++i_;
    return b;
  }

  Call call() {
    const Token& name = expect(TokenKind::Ident);
    Call c{name.text, {}, name.pos};
    expect(TokenKind::LParen);
    if (check(TokenKind::RParen)) {
      ++i_;
      return c;
    }
    while (true) {
      c.args.push_back(arg());
      if (check(TokenKind::Comma)) {
        ++i_;
        continue;
      }
      if (check(TokenKind::RParen)) {
        ++i_;
        return c;
      }
      fail("expected ',' or ')', found " + found(), {"','", "')'"});
    }
  }

  Arg arg() {
    const auto* t = peek();
    if (t && t->kind == TokenKind::String) {
      ++i_;
      return Arg{t->text, t->pos};
    }
    if (t && t->kind == TokenKind::Int) {
      ++i_;
      return Arg{t->value, t->pos};
    }
    fail("expected argument", {"string", "integer"});
  }

  const std::vector<Token>& toks_;
  SourcePos end_;
  std::size_t i_ = 0;
};

SourcePos infer_end(const std::vector<Token>& tokens) {
  if (tokens.empty()) return SourcePos{1, 1};
  const auto& t = tokens.back();
  int width = static_cast<int>(t.text.size());
  if (t.kind == TokenKind::String) width += 2;
  if (t.kind == TokenKind::Int) width = static_cast<int>(std::to_string(t.value).size());
  return SourcePos{t.pos.line, t.pos.column + std::max(width, 1)};
}

}  // namespace

std::string ParseError::describe() const {
  std::string out = "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message;
  if (!expected.empty()) {
    out += " (expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) out += " or ";
      out += expected[i];
    }
    out += ")";
  }
  return out;
}

SourcePos end_position(std::string_view source) {
  SourcePos p;
  for (char c : source) {
    if (c == '\n') {
      ++p.line;
      p.column = 1;
    } else {
      ++p.column;
    }
  }
  return p;
}

ParseResult parse(const std::vector<Token>& tokens, SourcePos end) {
  if (end.line == 0) end = infer_end(tokens);
  try {
    return Parser(tokens, end).program();
  } catch (const Failure& f) {
    return f.error;
  }
}

ParseResult parse_source(std::string_view source) { return parse(tokenize(source), end_position(source)); }

}  // namespace teamcraft::actionlang
