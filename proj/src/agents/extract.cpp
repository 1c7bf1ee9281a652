#include "teamcraft/agents/extract.hpp"

#include <regex>

namespace teamcraft::agents {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::optional<std::string> extract_program(const std::string& response) {
  std::string body;
  const auto open = response.find("```");
  if (open != std::string::npos) {
    const auto line_end = response.find('\n', open);
    if (line_end == std::string::npos) return std::nullopt;
    const auto close = response.find("```", line_end + 1);
    body = response.substr(line_end + 1, close == std::string::npos ? std::string::npos : close - line_end - 1);
  } else {
    body = response;
  }
  body = trim(body);
  if (body.empty()) return std::nullopt;
  return body + "\n";
}

std::map<std::string, std::string> extract_tagged_programs(const std::string& response) {
  static const std::regex tag(R"re(<program\s+agent\s*=\s*"([^"]*)"\s*>([\s\S]*?)</program>)re",
                              std::regex::icase);
  std::map<std::string, std::string> out;
  for (auto it = std::sregex_iterator(response.begin(), response.end(), tag); it != std::sregex_iterator(); ++it) {
    const std::string name = (*it)[1].str();
    if (out.count(name)) continue;
    if (auto body = extract_program((*it)[2].str())) out.emplace(name, *body);
  }
  return out;
}

}  // namespace teamcraft::agents
