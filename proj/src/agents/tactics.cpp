#include "teamcraft/agents/tactics.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace teamcraft::agents {

namespace {

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

// Drops "1.", "2)", "-", "*" prefixes.
std::string strip_marker(std::string line) {
  std::size_t i = 0;
  while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
  if (i > 0 && i < line.size() && (line[i] == '.' || line[i] == ')' || line[i] == ':')) return trim(line.substr(i + 1));
  if (!line.empty() && (line[0] == '-' || line[0] == '*')) return trim(line.substr(1));
  return line;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

std::string Tactics::render() const {
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) out += "\n";
    out += std::to_string(i + 1) + ". " + lines[i];
  }
  return out;
}

TacticsParse parse_tactics(const std::string& response) {
  TacticsParse out;
  const std::string low = lower(response);
  const auto open = low.find("<tactics>");
  const auto close = open == std::string::npos ? std::string::npos : low.find("</tactics>", open);
  if (open == std::string::npos || close == std::string::npos) {
    out.error = "response has no <tactics> ... </tactics> section";
    return out;
  }
  const auto start = open + std::string_view("<tactics>").size();
  std::istringstream in(response.substr(start, close - start));
  Tactics t;
  std::string line;
  while (std::getline(in, line)) {
    line = strip_marker(trim(line));
    if (!line.empty()) t.lines.push_back(line);
  }
  if (t.lines.empty()) {
    out.error = "tactics section is empty";
    return out;
  }
  if (t.lines.size() > kMaxTacticsLines) {
    t.lines.resize(kMaxTacticsLines);
    out.truncated = true;
  }
  out.tactics = std::move(t);
  return out;
}

std::optional<OpponentTactics> parse_opponent_tactics(const std::string& response) {
  auto parsed = parse_tactics(response);
  if (parsed.tactics) {
    if (parsed.tactics->lines.size() == 1 && lower(parsed.tactics->lines[0]) == "unknown") return OpponentTactics{};
    return OpponentTactics{std::move(parsed.tactics)};
  }
  auto t = lower(trim(response));
  while (!t.empty() && (t.back() == '.' || t.back() == '!')) t.pop_back();
  if (t == "unknown") return OpponentTactics{};
  return std::nullopt;
}

}  // namespace teamcraft::agents
