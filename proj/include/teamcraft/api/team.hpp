#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "teamcraft/world/event.hpp"

namespace teamcraft::api {

using world::Event;
using world::Observation;
using world::Team;
using world::Tick;

// Scenario metadata a team may read. Everything here is a copy; a team system
// never holds a reference into the running world.
struct ScenarioInfo {
  std::string name;
  std::string title;
  std::string description;
  std::string objective;
  std::string opponent_objective;
  Tick duration_ticks = 0;
  double report_scale = 1.0;
  std::vector<std::string> primitives;
  // ActScript and primitive documentation for prompts.
  std::string reference;
  // Layout constants resolved for this team.
  std::map<std::string, std::string> constants;
};

struct PreGameInfo {
  ScenarioInfo scenario;
  Team team = Team::Neutral;
  std::vector<std::string> agents;
  std::vector<std::string> opponent_agents;
  std::string server;
  std::map<std::string, Observation> observations;
  int episode = 0;
};

struct ProgramEndInfo {
  bool error = false;
  std::string message;
  Tick tick = 0;
};

// Request for the next program of one agent during the game phase.
struct AgentTurn {
  std::size_t slot = 0;
  std::string agent;
  Tick tick = 0;
  Tick duration = 0;
  std::optional<ProgramEndInfo> last_end;
  std::string last_program;
  // Visible events since this agent's previous turn.
  std::vector<Event> new_events;
  Observation observation;
  // Programs requested so far this episode, including this one.
  int iteration = 1;
};

struct ProgramChoice {
  std::string source;
  // Simulated generation time charged before the program starts.
  Tick idle_ticks = 0;
};

struct PostGameInfo {
  Team team = Team::Neutral;
  int episode = 0;
  int own_score = 0;
  int opponent_score = 0;
  // Chat from everyone plus this team's own observations.
  std::vector<Event> events;
};

struct LlmCallRecord {
  std::string purpose;
  std::string agent;
  double latency_s = 0.0;
  int output_tokens = 0;
  bool operator==(const LlmCallRecord&) const = default;
};

struct TeamStats {
  std::vector<LlmCallRecord> calls;
  // Roll-out iterations per agent slot.
  std::vector<int> iterations;
  Tick idle_ticks = 0;
};

// The three-phase interface a competing team implements. Systems persist across
// the episodes of a matchup.
class TeamSystem {
 public:
  virtual ~TeamSystem() = default;

  virtual std::string name() const = 0;
  virtual void pre_game(const PreGameInfo& info) = 0;
  virtual ProgramChoice next_program(const AgentTurn& turn) = 0;
  virtual void post_game(const PostGameInfo& info) = 0;
  // Returns and clears the statistics gathered since the last call.
  virtual TeamStats take_stats() { return {}; }
};

}  // namespace teamcraft::api
