#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "teamcraft/agents/model.hpp"
#include "teamcraft/agents/prompts.hpp"
#include "teamcraft/agents/tacticrafter.hpp"
#include "teamcraft/api/team.hpp"

namespace teamcraft::agents {

// Programs for every agent from one prompt; agents without a usable program get
// the wait loop.
std::map<std::string, std::string> cot_baseline(ModelCaller& model, const Templates& templates,
                                                const GameDescription& d,
                                                const std::map<std::string, world::Observation>& observations,
                                                const std::string& last_code, const std::string& last_error,
                                                const std::string& chat_log);

// One program per agent per episode, written before the game starts.
class CotTeam : public api::TeamSystem {
 public:
  CotTeam(std::shared_ptr<ChatClient> client, Templates templates = Templates::builtin(), std::string model = {});

  std::string name() const override { return "cot"; }
  void pre_game(const api::PreGameInfo& info) override;
  api::ProgramChoice next_program(const api::AgentTurn& turn) override;
  void post_game(const api::PostGameInfo& info) override;
  api::TeamStats take_stats() override;

  const std::map<std::string, std::string>& programs() const { return programs_; }

 private:
  ModelCaller model_;
  Templates templates_;
  std::vector<std::string> agents_;
  std::map<std::string, std::string> programs_;
  std::map<std::string, std::string> errors_;
  std::string last_code_;
  std::string last_error_;
  std::string chat_log_;
  std::vector<int> iterations_;
};

}  // namespace teamcraft::agents
