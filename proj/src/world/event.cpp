#include "teamcraft/world/event.hpp"

namespace teamcraft::world {

using nlohmann::json;

Event chat_event(Tick tick, std::string sender, std::string text) {
  return Event{EventKind::Chat, tick, std::move(sender), std::move(text), std::nullopt};
}

Event observe_event(Tick tick, Observation obs) {
  std::string sender = obs.agent;
  return Event{EventKind::Observe, tick, std::move(sender), "", std::move(obs)};
}

void to_json(json& j, const Position& p) { j = json::array({p.x, p.y, p.z}); }

void from_json(const json& j, Position& p) {
  p.x = j.at(0).get<int>();
  p.y = j.at(1).get<int>();
  p.z = j.at(2).get<int>();
}

void to_json(json& j, const Inventory& inv) {
  j = json::object();
  for (const auto& [item, n] : inv.stacks()) j[item] = n;
}

void from_json(const json& j, Inventory& inv) {
  inv = Inventory{};
  for (const auto& [item, n] : j.items()) inv.add(item, n.get<int>());
}

void to_json(json& j, const Observation& obs) {
  json blocks = json::array();
  for (const auto& b : obs.nearby_blocks) blocks.push_back({{"kind", b.kind}, {"pos", b.position}, {"stage", b.growth_stage}});
  json mobs = json::array();
  for (const auto& m : obs.nearby_mobs) mobs.push_back({{"kind", m.kind}, {"pos", m.position}, {"distance", m.distance}});
  json players = json::array();
  for (const auto& p : obs.nearby_players) {
    players.push_back({{"name", p.name}, {"team", to_string(p.team)}, {"pos", p.position}, {"distance", p.distance}});
  }
  json items = json::array();
  for (const auto& i : obs.nearby_items) items.push_back({{"item", i.item}, {"count", i.count}, {"pos", i.position}});
  json chests = json::array();
  for (const auto& [pos, inv] : obs.chest_contents) chests.push_back({{"pos", pos}, {"items", inv}});
  const auto& s = obs.self_status;
  j = json{{"agent", obs.agent},
           {"nearby_blocks", blocks},
           {"nearby_mobs", mobs},
           {"nearby_players", players},
           {"nearby_items", items},
           {"chests", chests},
           {"inventory", obs.inventory},
           {"status",
            {{"health", s.health},
             {"hunger", s.hunger},
             {"position", s.position},
             {"velocity", s.velocity},
             {"direction", s.direction},
             {"equipment", s.equipment},
             {"biome", s.biome},
             {"time", s.time},
             {"inventory_used", s.inventory_slots_used},
             {"elapsed", s.elapsed_seconds}}}};
}

void from_json(const json& j, Observation& obs) {
  obs = Observation{};
  obs.agent = j.at("agent").get<std::string>();
  for (const auto& b : j.at("nearby_blocks")) {
    obs.nearby_blocks.push_back({b.at("kind").get<std::string>(), b.at("pos").get<Position>(), b.at("stage").get<int>()});
  }
  for (const auto& m : j.at("nearby_mobs")) {
    obs.nearby_mobs.push_back({m.at("kind").get<std::string>(), m.at("pos").get<Position>(), m.at("distance").get<double>()});
  }
  for (const auto& p : j.at("nearby_players")) {
    obs.nearby_players.push_back({p.at("name").get<std::string>(), team_from_string(p.at("team").get<std::string>()),
                                  p.at("pos").get<Position>(), p.at("distance").get<double>()});
  }
  for (const auto& i : j.at("nearby_items")) {
    obs.nearby_items.push_back({i.at("item").get<std::string>(), i.at("count").get<int>(), i.at("pos").get<Position>()});
  }
  for (const auto& c : j.at("chests")) obs.chest_contents[c.at("pos").get<Position>()] = c.at("items").get<Inventory>();
  obs.inventory = j.at("inventory").get<Inventory>();
  const auto& s = j.at("status");
  auto& out = obs.self_status;
  out.health = s.at("health").get<int>();
  out.hunger = s.at("hunger").get<int>();
  out.position = s.at("position").get<Position>();
  out.velocity = s.at("velocity").get<Position>();
  out.direction = s.at("direction").get<std::string>();
  out.equipment = s.at("equipment").get<std::string>();
  out.biome = s.at("biome").get<std::string>();
  out.time = s.at("time").get<Tick>();
  out.inventory_slots_used = s.at("inventory_used").get<int>();
  out.elapsed_seconds = s.at("elapsed").get<double>();
}

void to_json(json& j, const Event& e) {
  j = json{{"kind", e.kind == EventKind::Chat ? "chat" : "observe"}, {"tick", e.tick}, {"sender", e.sender}};
  if (e.kind == EventKind::Chat) j["text"] = e.text;
  if (e.observation) j["observation"] = *e.observation;
}

void from_json(const json& j, Event& e) {
  e = Event{};
  e.kind = j.at("kind").get<std::string>() == "chat" ? EventKind::Chat : EventKind::Observe;
  e.tick = j.at("tick").get<Tick>();
  e.sender = j.at("sender").get<std::string>();
  e.text = j.value("text", "");
  if (j.contains("observation")) e.observation = j.at("observation").get<Observation>();
}

}  // namespace teamcraft::world
