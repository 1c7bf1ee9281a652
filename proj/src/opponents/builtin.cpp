#include <json.hpp>

#include "teamcraft/assets.hpp"
#include "teamcraft/opponents/opponents.hpp"
#include "teamcraft/scenarios/config.hpp"

namespace teamcraft::opponents {

namespace {

constexpr std::string_view kIdle = "loop {\n  wait(20);\n}\n";
constexpr std::string_view kFallbackIdle = "wait(40);\n";

std::string read_asset(const std::string& path) {
  auto text = assets::find(path);
  if (!text) throw OpponentError("missing opponent asset " + path);
  return std::string(*text);
}

}  // namespace

std::string substitute(std::string_view text, const std::map<std::string, std::string>& constants) {
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto open = text.find("{{", i);
    if (open == std::string_view::npos) {
      out.append(text.substr(i));
      break;
    }
    const auto close = text.find("}}", open + 2);
    if (close == std::string_view::npos) throw OpponentError("unterminated placeholder in opponent script");
    out.append(text.substr(i, open - i));
    const std::string key(text.substr(open + 2, close - open - 2));
    auto it = constants.find(key);
    if (it == constants.end()) throw OpponentError("unknown layout constant " + key);
    out += it->second;
    i = close + 2;
  }
  return out;
}

std::vector<std::string> builtin_names(std::string_view scenario) {
  return scenarios::parse_scenario(scenarios::scenario_document(scenario)).opponents;
}

OpponentSpec do_nothing(std::size_t agents) {
  OpponentSpec spec{std::string(kDoNothing), "", {}, {}};
  for (std::size_t i = 0; i < agents; ++i) spec.agents.push_back(RoleScript{"waits", "", std::string(kIdle), std::string(kIdle)});
  return spec;
}

OpponentSpec builtin(std::string_view name, std::string_view scenario, const std::map<std::string, std::string>& constants) {
  const auto names = builtin_names(scenario);
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    throw OpponentError("unknown opponent " + std::string(name) + " for " + std::string(scenario));
  }
  if (name == kDoNothing) {
    auto spec = do_nothing();
    spec.scenario = std::string(scenario);
    return spec;
  }
  const std::string dir = "opponents/" + std::string(scenario) + "/";
  const auto doc = nlohmann::json::parse(read_asset(dir + std::string(name) + ".json"));
  OpponentSpec spec;
  spec.name = doc.at("name").get<std::string>();
  spec.scenario = doc.at("scenario").get<std::string>();
  const auto& sab = doc.at("sabotage");
  spec.sabotage.destroy = sab.value("destroy", false);
  spec.sabotage.place = sab.value("place", false);
  if (sab.contains("transforms")) {
    for (const auto& t : sab["transforms"]) spec.sabotage.transforms.emplace_back(t.at(0).get<std::string>(), t.at(1).get<std::string>());
  }
  auto load = [&](const nlohmann::json& agent, const char* key) -> std::string {
    if (!agent.contains(key)) return {};
    const auto text = read_asset(dir + agent[key].get<std::string>());
    return constants.empty() ? text : substitute(text, constants);
  };
  for (const auto& a : doc.at("agents")) {
    spec.agents.push_back(RoleScript{a.value("role", ""), load(a, "opening"), load(a, "main"), load(a, "fallback")});
  }
  return spec;
}

BuiltinTeam::BuiltinTeam(std::string name) : name_(std::move(name)) {}

void BuiltinTeam::pre_game(const api::PreGameInfo& info) {
  spec_ = builtin(name_, info.scenario.name, info.scenario.constants);
  if (spec_.agents.size() < info.agents.size()) throw OpponentError("opponent " + name_ + " has too few role scripts");
  stage_.assign(spec_.agents.size(), Stage::Opening);
}

api::ProgramChoice BuiltinTeam::next_program(const api::AgentTurn& turn) {
  if (turn.slot >= spec_.agents.size()) return {std::string(kIdle), 0};
  const auto& role = spec_.agents[turn.slot];
  auto& stage = stage_[turn.slot];
  const bool error = turn.last_end && turn.last_end->error;
  if (turn.iteration <= 1) {
    stage = role.opening.empty() ? Stage::Main : Stage::Opening;
  } else {
    switch (stage) {
      case Stage::Opening:
      case Stage::Idle:
        stage = Stage::Main;
        break;
      case Stage::Main:
        stage = error && !role.fallback.empty() ? Stage::Fallback : Stage::Main;
        break;
      case Stage::Fallback:
        stage = error ? Stage::Idle : Stage::Main;
        break;
    }
  }
  switch (stage) {
    case Stage::Opening:
      return {role.opening, 0};
    case Stage::Main:
      return {role.main, 0};
    case Stage::Fallback:
      return {role.fallback, 0};
    case Stage::Idle:
      break;
  }
  return {std::string(kFallbackIdle), 0};
}

}  // namespace teamcraft::opponents
