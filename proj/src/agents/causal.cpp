#include "teamcraft/agents/causal.hpp"

#include <sstream>

#include <json.hpp>

#include "teamcraft/actionlang/parser.hpp"

namespace teamcraft::agents {

namespace {

constexpr std::string_view kAction = "Action: ";
constexpr std::string_view kCause = "; Cause: [";
constexpr std::string_view kEffect = "]; Effect [";

std::string format_list(const std::vector<std::string>& items) {
  std::string out = "[";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += "'" + items[i] + "'";
  }
  return out + "]";
}

// Contents of a bracketed list of quoted strings, without the brackets.
std::optional<std::vector<std::string>> parse_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < s.size() && (s[i] == ' ' || s[i] == ',')) ++i;
  };
  skip();
  while (i < s.size()) {
    const char q = s[i];
    if (q != '\'' && q != '"') return std::nullopt;
    const auto end = s.find(q, i + 1);
    if (end == std::string_view::npos) return std::nullopt;
    out.emplace_back(s.substr(i + 1, end - i - 1));
    i = end + 1;
    skip();
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::optional<std::vector<CausalRelation>> parse_json_relations(const std::string& response) {
  const auto open = response.find('[');
  const auto close = response.rfind(']');
  if (open == std::string::npos || close == std::string::npos || close < open) return std::nullopt;
  const auto doc = nlohmann::json::parse(response.substr(open, close - open + 1), nullptr, false);
  if (doc.is_discarded() || !doc.is_array()) return std::nullopt;
  std::vector<CausalRelation> out;
  for (const auto& item : doc) {
    if (!item.is_object() || !item.contains("action") || !item["action"].is_string()) return std::nullopt;
    CausalRelation r;
    r.action = item["action"].get<std::string>();
    for (const char* key : {"causes", "effects"}) {
      if (!item.contains(key)) continue;
      if (!item[key].is_array()) return std::nullopt;
      for (const auto& v : item[key]) {
        if (!v.is_string()) return std::nullopt;
        (std::string_view(key) == "causes" ? r.causes : r.effects).push_back(v.get<std::string>());
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

CausalParseError::CausalParseError(int line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

std::string format_relation(const CausalRelation& r) {
  return std::string(kAction) + r.action + "; Cause: " + format_list(r.causes) + "; Effect " + format_list(r.effects);
}

std::optional<CausalRelation> parse_relation_line(std::string_view line) {
  line = trim(line);
  if (line.substr(0, kAction.size()) != kAction) return std::nullopt;
  const auto cause = line.rfind(kCause);
  if (cause == std::string_view::npos || cause < kAction.size()) return std::nullopt;
  const auto effect = line.find(kEffect, cause + kCause.size());
  if (effect == std::string_view::npos || line.back() != ']') return std::nullopt;
  CausalRelation r;
  r.action = std::string(trim(line.substr(kAction.size(), cause - kAction.size())));
  auto causes = parse_list(line.substr(cause + kCause.size(), effect - cause - kCause.size()));
  const auto effects_start = effect + kEffect.size();
  auto effects = parse_list(line.substr(effects_start, line.size() - 1 - effects_start));
  if (r.action.empty() || !causes || !effects) return std::nullopt;
  r.causes = std::move(*causes);
  r.effects = std::move(*effects);
  return r;
}

bool CausalGraph::add(CausalRelation r) {
  if (contains(r.action)) return false;
  index_.emplace(r.action, relations_.size());
  relations_.push_back(std::move(r));
  return true;
}

std::size_t CausalGraph::merge(const CausalGraph& other) {
  std::size_t added = 0;
  for (const auto& r : other.relations()) added += add(r) ? 1 : 0;
  return added;
}

std::string CausalGraph::serialize() const {
  std::string out;
  for (const auto& r : relations_) out += format_relation(r) + "\n";
  return out;
}

CausalGraph CausalGraph::parse(std::string_view text) {
  CausalGraph g;
  std::istringstream in{std::string(text)};
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (trim(line).empty()) continue;
    auto r = parse_relation_line(line);
    if (!r) throw CausalParseError(n, "expected `Action: ...; Cause: [...]; Effect [...]`");
    g.add(std::move(*r));
  }
  return g;
}

CausalGraph graph_union(const CausalGraph& a, const CausalGraph& b) {
  CausalGraph out = a;
  out.merge(b);
  return out;
}

bool is_single_call(std::string_view action) {
  auto parsed = actionlang::parse_source(action);
  const auto* p = std::get_if<actionlang::Program>(&parsed);
  return p && p->body.size() == 1 && std::holds_alternative<actionlang::Call>(p->body[0].node);
}

std::optional<std::vector<CausalRelation>> parse_model_relations(const std::string& response) {
  std::optional<std::vector<CausalRelation>> found = parse_json_relations(response);
  if (!found) {
    std::vector<CausalRelation> lines;
    std::istringstream in(response);
    std::string line;
    while (std::getline(in, line)) {
      if (auto r = parse_relation_line(line)) lines.push_back(std::move(*r));
    }
    if (lines.empty()) return std::nullopt;
    found = std::move(lines);
  }
  std::vector<CausalRelation> out;
  for (auto& r : *found) {
    if (is_single_call(r.action)) out.push_back(std::move(r));
  }
  return out;
}

void add_primitive_stubs(CausalGraph& g, const actionlang::PrimitiveTable& table) {
  for (const auto* spec : table.specs()) {
    if (spec->builtin) continue;
    const std::string prefix = spec->name + "(";
    bool covered = false;
    for (const auto& r : g.relations()) {
      if (r.action.compare(0, prefix.size(), prefix) == 0) {
        covered = true;
        break;
      }
    }
    if (!covered) g.add(CausalRelation{spec->name + "()", {}, {}});
  }
}

}  // namespace teamcraft::agents
