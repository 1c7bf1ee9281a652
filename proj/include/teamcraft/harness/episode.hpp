#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "teamcraft/api/team.hpp"
#include "teamcraft/scenarios/game.hpp"

namespace teamcraft::harness {

using world::Team;
using world::Tick;

enum class Winner : std::uint8_t { Red, Blue, Draw };

std::string_view to_string(Winner w);
Winner winner_of(int red, int blue);

struct AgentSummary {
  std::string agent;
  Team team = Team::Neutral;
  int iterations = 0;
  int primitives = 0;
  int errors = 0;
  // Set when the team system threw; the agent then waited out the episode.
  std::string failure;
};

struct EpisodeResult {
  std::string scenario;
  std::string red_system;
  std::string blue_system;
  int episode = 0;
  std::uint64_t seed = 0;
  int red_score = 0;
  int blue_score = 0;
  Winner winner = Winner::Draw;
  Tick duration = 0;
  std::vector<std::pair<Tick, int>> red_timeline;
  std::vector<std::pair<Tick, int>> blue_timeline;
  std::vector<world::Event> events;
  std::vector<scenarios::ScoreEvent> audit;
  api::TeamStats red_stats;
  api::TeamStats blue_stats;
  std::vector<AgentSummary> agents;
  double wall_seconds = 0.0;

  // Digest of the event log and scores; equal for replays of one episode.
  std::uint64_t digest() const;
};

nlohmann::json to_json(const EpisodeResult& r, bool with_events = true);
EpisodeResult episode_from_json(const nlohmann::json& j);

struct EpisodeOptions {
  int episode = 0;
  // Called once per tick after agents acted and before the clock advances.
  std::function<void(const scenarios::Game&)> on_tick;
};

// Pre-game, game and post-game phases of one episode.
EpisodeResult run_episode(const scenarios::ScenarioConfig& config, api::TeamSystem& red, api::TeamSystem& blue,
                          std::uint64_t seed, const EpisodeOptions& options = {});

// Metadata and constants one team sees in the pre-game phase.
api::ScenarioInfo scenario_info(const scenarios::ScenarioConfig& config, Team team);

// Events a team may read: every chat plus its own agents' observations.
bool visible_to(const world::Event& e, const world::World& w, Team team);

}  // namespace teamcraft::harness
