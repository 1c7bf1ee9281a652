#include "teamcraft/actionlang/lexer.hpp"

#include <array>
#include <cctype>
#include <limits>

namespace teamcraft::actionlang {

namespace {

constexpr std::array kKeywords{std::string_view{"repeat"}, std::string_view{"loop"}, std::string_view{"if"},
                               std::string_view{"else"}, std::string_view{"not"}};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space_and_comments();
      if (at_end()) break;
      out.push_back(next());
    }
    return out;
  }

 private:
  bool at_end() const { return i_ >= src_.size(); }
  char peek(std::size_t ahead = 0) const { return i_ + ahead < src_.size() ? src_[i_ + ahead] : '\0'; }

  char advance() {
    const char c = src_[i_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space_and_comments() {
    while (!at_end()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (!at_end() && peek() != '\n') advance();
      } else {
        break;
      }
    }
  }

  Token make(TokenKind kind, SourcePos pos, std::string text = {}, std::int64_t value = 0) {
    return Token{kind, std::move(text), value, pos};
  }

  Token next() {
    const SourcePos pos{line_, col_};
    const char c = peek();
    switch (c) {
      case '(':
        advance();
        return make(TokenKind::LParen, pos, "(");
      case ')':
        advance();
        return make(TokenKind::RParen, pos, ")");
      case '{':
        advance();
        return make(TokenKind::LBrace, pos, "{");
      case '}':
        advance();
        return make(TokenKind::RBrace, pos, "}");
      case ',':
        advance();
        return make(TokenKind::Comma, pos, ",");
      case ';':
        advance();
        return make(TokenKind::Semicolon, pos, ";");
      case '"':
      case '\'':
        return string_literal(pos);
      default:
        break;
    }
    if (digit(c) || (c == '-' && digit(peek(1)))) return integer(pos);
    if (ident_start(c)) {
      std::string word;
      while (!at_end() && ident_char(peek())) word.push_back(advance());
      const auto kind = is_keyword(word) ? TokenKind::Keyword : TokenKind::Ident;
      return make(kind, pos, std::move(word));
    }
    advance();
    std::string msg = "unexpected character '";
    msg.push_back(c);
    msg += "'";
    return make(TokenKind::Error, pos, std::move(msg));
  }

  Token integer(SourcePos pos) {
    bool negative = false;
    if (peek() == '-') {
      negative = true;
      advance();
    }
    // Accumulate as a negative number so INT64_MIN is representable.
    std::int64_t v = 0;
    bool overflow = false;
    while (!at_end() && digit(peek())) {
      const int d = advance() - '0';
      if (v < (std::numeric_limits<std::int64_t>::min() + d) / 10) overflow = true;
      if (!overflow) v = v * 10 - d;
    }
    if (!overflow && !negative && v == std::numeric_limits<std::int64_t>::min()) overflow = true;
    if (!at_end() && ident_char(peek())) {
      while (!at_end() && ident_char(peek())) advance();
      return make(TokenKind::Error, pos, "malformed number");
    }
    if (overflow) return make(TokenKind::Error, pos, "integer literal out of range");
    return make(TokenKind::Int, pos, {}, negative ? v : -v);
  }

  Token string_literal(SourcePos pos) {
    const char quote = advance();
    std::string out;
    while (true) {
      if (at_end() || peek() == '\n') return make(TokenKind::Error, pos, "unterminated string");
      const char c = advance();
      if (c == quote) break;
      if (c != '\\') {
        out.push_back(c);
        continue;
      }
      if (at_end()) return make(TokenKind::Error, pos, "unterminated string");
      const char e = advance();
      switch (e) {
        case 'n':
          out.push_back('\n');
          break;
        case 't':
          out.push_back('\t');
          break;
        case '\\':
        case '"':
        case '\'':
          out.push_back(e);
          break;
        default:
          return make(TokenKind::Error, pos, std::string("unknown escape '\\") + e + "'");
      }
    }
    return make(TokenKind::String, pos, std::move(out));
  }

  std::string_view src_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::Ident:
      return "identifier";
    case TokenKind::Keyword:
      return "keyword";
    case TokenKind::String:
      return "string";
    case TokenKind::Int:
      return "integer";
    case TokenKind::LParen:
      return "'('";
    case TokenKind::RParen:
      return "')'";
    case TokenKind::LBrace:
      return "'{'";
    case TokenKind::RBrace:
      return "'}'";
    case TokenKind::Comma:
      return "','";
    case TokenKind::Semicolon:
      return "';'";
    case TokenKind::Error:
      return "error";
  }
  return "error";
}

bool is_keyword(std::string_view word) {
  for (auto k : kKeywords) {
    if (k == word) return true;
  }
  return false;
}

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

}  // namespace teamcraft::actionlang
