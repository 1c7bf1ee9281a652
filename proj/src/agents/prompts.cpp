#include "teamcraft/agents/prompts.hpp"

#include "teamcraft/assets.hpp"

namespace teamcraft::agents {

namespace {

constexpr std::string_view kNames[] = {"p_a", "p_b", "p_c", "p_d", "p_e", "p_f", "p_g", "p_h"};

}  // namespace

Templates Templates::builtin() {
  Templates t;
  for (auto name : kNames) {
    auto text = assets::find("prompts/" + std::string(name) + ".txt");
    if (!text) throw TemplateError("missing prompt template " + std::string(name));
    t.set(std::string(name), std::string(*text));
  }
  return t;
}

const std::string& Templates::text(std::string_view name) const {
  auto it = texts_.find(name);
  if (it == texts_.end()) throw TemplateError("unknown template " + std::string(name));
  return it->second;
}

std::string Templates::fill(std::string_view name, const std::map<std::string, std::string>& slots) const {
  return fill_text(text(name), slots);
}

std::vector<std::string> slot_names(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while ((i = text.find("{{", i)) != std::string_view::npos) {
    const auto close = text.find("}}", i + 2);
    if (close == std::string_view::npos) break;
    out.emplace_back(text.substr(i + 2, close - i - 2));
    i = close + 2;
  }
  return out;
}

std::string fill_text(std::string_view text, const std::map<std::string, std::string>& slots) {
  std::string out;
  std::size_t i = 0;
  while (true) {
    const auto open = text.find("{{", i);
    if (open == std::string_view::npos) break;
    const auto close = text.find("}}", open + 2);
    if (close == std::string_view::npos) throw TemplateError("unterminated slot in template");
    const std::string key(text.substr(open + 2, close - open - 2));
    auto it = slots.find(key);
    if (it == slots.end()) throw TemplateError("unfilled template slot " + key);
    out.append(text.substr(i, open - i));
    out += it->second;
    i = close + 2;
  }
  out.append(text.substr(i));
  return out;
}

}  // namespace teamcraft::agents
