#include "teamcraft/actionlang/ast.hpp"

namespace teamcraft::actionlang {

namespace {

void indent(std::string& out, int depth) { out.append(static_cast<std::size_t>(depth) * 2, ' '); }

void print_block(std::string& out, const Block& block, int depth);

void print_if(std::string& out, const If& node, int depth) {
  out += "if ";
  if (node.cond.negated) out += "not ";
  out += "has(" + quote(node.cond.item) + ", " + std::to_string(node.cond.count) + ") {\n";
  print_block(out, node.then_block, depth + 1);
  indent(out, depth);
  out += "}";
  if (!node.has_else) return;
  const bool chained = node.else_block.size() == 1 && std::holds_alternative<If>(node.else_block.front().node);
  if (chained) {
    out += " else ";
    print_if(out, std::get<If>(node.else_block.front().node), depth);
    return;
  }
  out += " else {\n";
  print_block(out, node.else_block, depth + 1);
  indent(out, depth);
  out += "}";
}

void print_statement(std::string& out, const Statement& s, int depth) {
  indent(out, depth);
  if (const auto* c = std::get_if<Call>(&s.node)) {
    out += print(*c) + ";\n";
  } else if (const auto* r = std::get_if<Repeat>(&s.node)) {
    out += "repeat " + std::to_string(r->count) + " {\n";
    print_block(out, r->body, depth + 1);
    indent(out, depth);
    out += "}\n";
  } else if (const auto* l = std::get_if<Loop>(&s.node)) {
    out += "loop {\n";
    print_block(out, l->body, depth + 1);
    indent(out, depth);
    out += "}\n";
  } else {
    print_if(out, std::get<If>(s.node), depth);
    out += "\n";
  }
}

void print_block(std::string& out, const Block& block, int depth) {
  for (const auto& s : block) print_statement(out, s, depth);
}

void collect(const Block& block, std::vector<const Call*>& out, int& count) {
  for (const auto& s : block) {
    ++count;
    if (const auto* c = std::get_if<Call>(&s.node)) {
      out.push_back(c);
    } else if (const auto* r = std::get_if<Repeat>(&s.node)) {
      collect(r->body, out, count);
    } else if (const auto* l = std::get_if<Loop>(&s.node)) {
      collect(l->body, out, count);
    } else {
      const auto& i = std::get<If>(s.node);
      collect(i.then_block, out, count);
      collect(i.else_block, out, count);
    }
  }
}

}  // namespace

std::string quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      default:
        out.push_back(c);
    }
  }
  out += "\"";
  return out;
}

std::string print(const Call& call) {
  std::string out = call.name + "(";
  for (std::size_t i = 0; i < call.args.size(); ++i) {
    if (i) out += ", ";
    const auto& a = call.args[i];
    out += a.is_string() ? quote(a.str()) : std::to_string(a.integer());
  }
  return out + ")";
}

std::string print(const Program& program) {
  std::string out;
  print_block(out, program.body, 0);
  return out;
}

std::vector<const Call*> calls(const Program& program) {
  std::vector<const Call*> out;
  int n = 0;
  collect(program.body, out, n);
  return out;
}

int statement_count(const Program& program) {
  std::vector<const Call*> out;
  int n = 0;
  collect(program.body, out, n);
  return n;
}

}  // namespace teamcraft::actionlang
