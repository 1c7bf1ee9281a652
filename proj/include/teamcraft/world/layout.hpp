#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "teamcraft/world/types.hpp"

namespace teamcraft::world {

// Thrown for malformed layouts. `cell` names the offending cell when one exists.
class LayoutError : public std::runtime_error {
 public:
  LayoutError(const std::string& message, std::optional<Position> cell = std::nullopt);
  const std::optional<Position>& cell() const { return cell_; }

 private:
  std::optional<Position> cell_;
};

struct AreaRect {
  Team team = Team::Neutral;
  int x0 = 0;
  int z0 = 0;
  int x1 = 0;
  int z1 = 0;

  bool contains(const Position& p) const { return p.x >= x0 && p.x <= x1 && p.z >= z0 && p.z <= z1; }
};

struct AgentSpawn {
  std::string name;
  Team team = Team::Neutral;
  Position position;
  bool server = false;
};

struct MobSpawn {
  std::string kind;
  Position position;
};

struct ChestSpec {
  Position position;
  std::string label;
  Inventory items;
};

// A scenario map. Row z of `rows` is a string of legend characters, one per x.
struct Layout {
  int schema_version = 1;
  std::string name;
  int width = 0;
  int depth = 0;
  std::map<char, std::string> legend;
  std::vector<std::string> rows;
  std::vector<AreaRect> areas;
  std::vector<AgentSpawn> agents;
  std::vector<MobSpawn> mobs;
  std::vector<ChestSpec> chests;
  // Named values substituted into opponent scripts, per team.
  std::map<std::string, std::map<Team, std::string>> constants;

  bool in_bounds(const Position& p) const { return p.x >= 0 && p.x < width && p.z >= 0 && p.z < depth && p.y == 0; }
  std::string kind_at(const Position& p) const;
  Team area_of(const Position& p) const;
  const AreaRect* area(Team team) const;
};

inline constexpr int kLayoutSchemaVersion = 1;

// Parses and validates a layout document (JSON).
Layout parse_layout(std::string_view text);
// Loads an embedded layout asset, e.g. "layouts/mushroom_war.json".
Layout load_layout_asset(std::string_view path);
void validate_layout(const Layout& layout);

}  // namespace teamcraft::world
