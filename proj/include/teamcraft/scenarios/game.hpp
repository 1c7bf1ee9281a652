#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "teamcraft/scenarios/config.hpp"
#include "teamcraft/world/world.hpp"

namespace teamcraft::scenarios {

using world::Position;

struct ScoreEvent {
  Tick tick = 0;
  Team team = Team::Neutral;
  std::string agent;
  std::string item;
  int count = 0;
  int points = 0;
  std::string source;
};

struct TeamScore {
  Team team = Team::Neutral;
  int points = 0;
  // Food types locked in by hand-ins, in submission order.
  std::vector<std::string> submitted_types;
  // (tick, cumulative points) at every change, starting with (0, 0).
  std::vector<std::pair<Tick, int>> timeline{{0, 0}};

  std::optional<Tick> first_point_tick() const;
};

// Points a hand-in of `count` x `item` earns under the unique-type rule, and
// records the award in `score` (without touching the timeline).
int score_hand_in(TeamScore& score, std::string_view item, int count, const FoodPointsTable& table, int max_types = 3);

int mushroom_yield(world::Rng& rng);

// Slime blocks that count against an area: original slime cells plus slime
// the opposing team placed inside it.
int counted_slime(const world::World& w, Team team);
bool mushroom_regrow_eligible(const world::World& w, Team team, int threshold = 7);

bool is_hoe(std::string_view item);

struct TransformResult {
  int converted = 0;
  std::string error;
  bool ok() const { return error.empty(); }
};

// Owns the world of one episode together with its scoring state.
class Game {
 public:
  Game(ScenarioConfig config, std::uint64_t seed);
  Game(const Game&) = delete;
  Game& operator=(const Game&) = delete;

  world::World& world() { return world_; }
  const world::World& world() const { return world_; }
  const ScenarioConfig& config() const { return config_; }
  Tick duration() const { return config_.duration_ticks; }
  bool finished() const { return world_.tick() >= config_.duration_ticks; }

  TeamScore& score(Team team);
  const TeamScore& score(Team team) const;
  const std::vector<ScoreEvent>& audit() const { return audit_; }

  // Rule bookkeeping after an agent removed the block at `cell`.
  void on_block_removed(const Position& cell);
  void reconcile_mushrooms(Team team);
  bool mushroom_timer_invariant_holds() const;

  void drop_on_ground(std::string_view item, int count, const Position& at);
  // Points for `count` mushrooms picked up from `origin` by an agent of `collector`.
  int score_mushroom(Team collector, std::string_view agent, Team origin, int count);
  // Points for a hand-in that already moved items into `server`'s inventory.
  int hand_in(std::string_view agent, std::string_view server, std::string_view item, int count);

  // Schedules the next growth stage for a crop cell below maturity.
  void start_crop_growth(const Position& cell);
  // Destroys the crop at `cell` (drops to the ground) and plants `target` at stage 0.
  std::string convert_cell(const Position& cell, const CropSpec& target, const world::AgentBody& agent);
  std::vector<Position> convertible_cells(const CropSpec& source, Team agent_team) const;
  TransformResult sabotage_transform(std::string_view source, std::string_view target, std::string_view agent);

  bool is_mushroom_item(std::string_view item) const;

  // Resolves ground pickups and area bookkeeping after all agents acted.
  void end_tick();
  // Advances the world clock by one tick.
  std::vector<world::Event> advance();

 private:
  void record(Team team, std::string_view agent, std::string_view item, int count, int points, std::string source);
  void resolve_pickups();

  ScenarioConfig config_;
  world::World world_;
  TeamScore red_;
  TeamScore blue_;
  std::vector<ScoreEvent> audit_;
};

world::WorldRules world_rules_for(const ScenarioConfig& config);

}  // namespace teamcraft::scenarios
