#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "teamcraft/world/types.hpp"

namespace teamcraft::world {

inline constexpr std::string_view kEnvironmentSender = "environment";

struct BlockSighting {
  std::string kind;
  Position position;
  int growth_stage = 0;
  bool operator==(const BlockSighting&) const = default;
};

struct MobSighting {
  std::string kind;
  Position position;
  double distance = 0.0;
  bool operator==(const MobSighting&) const = default;
};

struct PlayerSighting {
  std::string name;
  Team team = Team::Neutral;
  Position position;
  double distance = 0.0;
  bool operator==(const PlayerSighting&) const = default;
};

struct ItemSighting {
  std::string item;
  int count = 0;
  Position position;
  bool operator==(const ItemSighting&) const = default;
};

struct SelfStatus {
  int health = 20;
  int hunger = 20;
  Position position;
  Position velocity;
  std::string direction = "north";
  std::string equipment;
  std::string biome = "plains";
  Tick time = 0;
  int inventory_slots_used = 0;
  double elapsed_seconds = 0.0;
  bool operator==(const SelfStatus&) const = default;
};

struct Observation {
  std::string agent;
  std::vector<BlockSighting> nearby_blocks;
  std::vector<MobSighting> nearby_mobs;
  std::vector<PlayerSighting> nearby_players;
  std::vector<ItemSighting> nearby_items;
  std::map<Position, Inventory> chest_contents;
  Inventory inventory;
  SelfStatus self_status;
  bool operator==(const Observation&) const = default;
};

enum class EventKind : std::uint8_t { Chat, Observe };

struct Event {
  EventKind kind = EventKind::Chat;
  Tick tick = 0;
  std::string sender;
  std::string text;
  std::optional<Observation> observation;
  bool operator==(const Event&) const = default;

  bool from_environment() const { return sender == kEnvironmentSender; }
};

Event chat_event(Tick tick, std::string sender, std::string text);
Event observe_event(Tick tick, Observation obs);

void to_json(nlohmann::json& j, const Position& p);
void from_json(const nlohmann::json& j, Position& p);
void to_json(nlohmann::json& j, const Inventory& inv);
void from_json(const nlohmann::json& j, Inventory& inv);
void to_json(nlohmann::json& j, const Observation& obs);
void from_json(const nlohmann::json& j, Observation& obs);
void to_json(nlohmann::json& j, const Event& e);
void from_json(const nlohmann::json& j, Event& e);

}  // namespace teamcraft::world
