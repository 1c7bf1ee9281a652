#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "teamcraft/actionlang/primitives.hpp"
#include "teamcraft/agents/causal.hpp"
#include "teamcraft/agents/model.hpp"
#include "teamcraft/agents/prompts.hpp"
#include "teamcraft/agents/tactics.hpp"
#include "teamcraft/api/team.hpp"

namespace teamcraft::agents {

using api::Event;

struct GameDescription {
  std::string scenario;
  std::string team;
  std::string objective;
  std::string description;
  std::vector<std::string> agents;
  std::vector<std::string> primitives;
  std::string reference;
  std::map<std::string, std::string> constants;
  std::string opponent_team;
  std::string opponent_objective;
  std::vector<std::string> opponent_agents;

  static GameDescription from(const api::PreGameInfo& info);
  std::string agents_text() const;
  std::string constants_text() const;
  // Context every request carries for logging and the mock client.
  std::map<std::string, std::string> meta() const;
};

struct History {
  // Deduplicated log of the base agent with the longest log.
  std::vector<Event> log;
  // Every event the team saw, deduplicated.
  std::vector<Event> team_events;
  Tactics tactics;
  OpponentTactics opponent_tactics;
  int own_score = 0;
  int opponent_score = 0;
};

// Builds History from the per-agent logs of one episode.
History make_history(const std::vector<std::vector<Event>>& agent_logs, const std::vector<Event>& team_events,
                     const Tactics& tactics, const OpponentTactics& opponent, int own_score, int opponent_score);

Tactics tactics_init(ModelCaller& model, const Templates& templates, const GameDescription& d,
                     const CausalGraph& g);
Tactics tactics_update(ModelCaller& model, const Templates& templates, const GameDescription& d, const History& h,
                       const CausalGraph& g, const OpponentTactics& o);
CausalGraph causal_init(ModelCaller& model, const Templates& templates, const GameDescription& d);
CausalGraph causal_update(ModelCaller& model, const Templates& templates, const GameDescription& d,
                          const History& h, const CausalGraph& g);
OpponentTactics opponent_update(ModelCaller& model, const Templates& templates, const GameDescription& d,
                                const History& h, const CausalGraph& g, const OpponentTactics& previous);

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Checkpoint {
  static constexpr int kVersion = 1;

  std::string scenario;
  int episodes = 0;
  Tactics tactics;
  CausalGraph graph;
  OpponentTactics opponent;

  nlohmann::json to_json() const;
  static Checkpoint from_json(const nlohmann::json& j);
  std::string dump() const;
  static Checkpoint load(const std::string& text);
  bool operator==(const Checkpoint&) const = default;
};

inline constexpr std::string_view kWaitLoop = "loop {\n  wait(20);\n}\n";
inline constexpr int kMaxParseFailures = 3;

class TactiCrafter : public api::TeamSystem {
 public:
  TactiCrafter(std::shared_ptr<ChatClient> client, Templates templates = Templates::builtin(),
               std::string model = {});

  std::string name() const override { return "tacticrafter"; }
  void pre_game(const api::PreGameInfo& info) override;
  api::ProgramChoice next_program(const api::AgentTurn& turn) override;
  void post_game(const api::PostGameInfo& info) override;
  api::TeamStats take_stats() override;

  Checkpoint checkpoint() const;
  void restore(const Checkpoint& cp);

  const Tactics& tactics() const { return tactics_; }
  const CausalGraph& graph() const { return graph_; }
  const OpponentTactics& opponent() const { return opponent_; }
  int episodes() const { return episodes_; }
  // True once the agent has fallen back to the wait loop for this episode.
  bool waiting(std::size_t slot) const { return slot < agents_.size() && agents_[slot].waiting; }

 private:
  struct AgentState {
    std::string name;
    std::vector<Event> log;
    std::string critique;
    std::optional<std::string> first_program;
    world::Observation observation;
    int iterations = 0;
    bool waiting = false;
  };

  // Asks for a program until one parses and validates; returns the program and
  // the summed latency of the action calls.
  std::pair<std::string, double> generate(AgentState& agent, std::size_t slot, const std::string& last_program,
                                          const std::string& last_error);
  std::string critique(AgentState& agent, std::size_t slot, const std::string& last_program,
                       const std::string& last_error);

  ModelCaller model_;
  Templates templates_;
  actionlang::PrimitiveTable table_;
  GameDescription desc_;
  std::string scenario_;
  int episodes_ = 0;
  Tactics tactics_;
  CausalGraph graph_;
  OpponentTactics opponent_;
  std::vector<AgentState> agents_;
  std::vector<int> stat_iterations_;
  world::Tick stat_idle_ = 0;
};

}  // namespace teamcraft::agents
