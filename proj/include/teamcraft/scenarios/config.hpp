#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "teamcraft/world/layout.hpp"
#include "teamcraft/world/rng.hpp"
#include "teamcraft/world/types.hpp"

namespace teamcraft::scenarios {

using world::DelayDistribution;
using world::Team;
using world::Tick;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DropSpec {
  std::string item;
  int min = 1;
  int max = 1;
  bool operator==(const DropSpec&) const = default;
};

struct BlockRule {
  std::vector<DropSpec> drops;
  // Drops land on the ground instead of entering the miner's inventory.
  bool drops_to_ground = false;
  // Counts toward mushroom scoring when picked up.
  bool mushroom = false;
  std::optional<DelayDistribution> regrow;
};

struct CropSpec {
  std::string block;
  std::vector<std::string> aliases;
  int max_stage = 7;
  // Item consumed when planting.
  std::string seed;
  std::vector<DropSpec> harvest_drops;
  // Stage a perennial returns to after harvest; -1 means the plant is consumed
  // and the cell reverts to farmland.
  int reset_stage = -1;
  bool needs_farmland = true;
};

struct Recipe {
  std::string output;
  int output_count = 1;
  std::map<std::string, int> inputs;
  bool needs_table = false;
  bool needs_furnace = false;
  std::map<std::string, int> returns;
  bool operator==(const Recipe&) const = default;
};

using RecipeTable = std::map<std::string, Recipe, std::less<>>;
using FoodPointsTable = std::map<std::string, int, std::less<>>;

struct Costs {
  Tick travel_per_cell = 1;
  Tick mine = 20;
  Tick craft = 10;
  Tick place = 10;
  Tick give = 5;
  Tick chest = 10;
  Tick kill = 40;
  Tick kill_poll = 20;
  Tick farm = 15;
  Tick smelt = 10;
  Tick milk = 10;
  Tick say = 1;
  Tick smelt_per_item = 200;
};

enum class ScoringMode : std::uint8_t { Mushroom, HandIn };

struct ScenarioConfig {
  std::string name;
  std::string title;
  std::string description;
  // `{team}` is replaced by the team name.
  std::string objective;
  Tick duration_ticks = 2400;
  Tick wait_ticks = 80;
  double report_scale = 1.0;
  std::string layout_asset;
  world::Layout layout;
  int search_radius = 8;
  int observe_radius = 8;
  std::vector<std::string> primitives;
  Costs costs;
  ScoringMode scoring = ScoringMode::Mushroom;
  int mushroom_threshold = 7;
  int max_food_types = 3;
  std::map<std::string, BlockRule, std::less<>> blocks;
  std::vector<CropSpec> crops;
  DelayDistribution crop_advance = world::GeometricDelay{0.05};
  std::map<std::string, std::vector<DropSpec>, std::less<>> mob_drops;
  DelayDistribution mob_respawn = world::UniformDelay{200, 400};
  std::vector<std::string> placeable;
  RecipeTable recipes;
  FoodPointsTable points;
  std::vector<std::string> opponents;

  bool primitive_available(std::string_view name) const;
  const CropSpec* crop_by_block(std::string_view block) const;
  // Resolves a block kind, seed, or produce name to its crop.
  const CropSpec* resolve_crop(std::string_view name) const;
  std::string objective_for(Team team) const;
};

// Built-in scenario names, in canonical order.
const std::vector<std::string>& scenario_names();

// Loads an embedded scenario document and applies an optional JSON merge
// patch on top of it.
ScenarioConfig load_scenario(std::string_view name, const nlohmann::json& overrides = nlohmann::json::object());
ScenarioConfig parse_scenario(const nlohmann::json& doc);
nlohmann::json scenario_document(std::string_view name);

DelayDistribution parse_delay(const nlohmann::json& j);
nlohmann::json delay_to_json(const DelayDistribution& d);

const Recipe* recipe_lookup(const RecipeTable& table, std::string_view item);

}  // namespace teamcraft::scenarios
