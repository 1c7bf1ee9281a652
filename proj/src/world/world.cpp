#include "teamcraft/world/world.hpp"

#include <algorithm>

namespace teamcraft::world {

using nlohmann::json;

std::string_view to_string(TimerEffect effect) {
  switch (effect) {
    case TimerEffect::RegrowBlock:
      return "regrow-block";
    case TimerEffect::CropAdvance:
      return "crop-advance";
    case TimerEffect::SmeltComplete:
      return "smelt-complete";
    case TimerEffect::MobRespawn:
      return "mob-respawn";
  }
  return "unknown";
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

World::World(const Layout& layout, std::uint64_t seed, WorldRules rules)
    : layout_(layout), rules_(std::move(rules)), rng_(seed) {
  validate_layout(layout_);
  cells_.resize(static_cast<std::size_t>(layout_.width) * static_cast<std::size_t>(layout_.depth));
  for (int z = 0; z < layout_.depth; ++z) {
    for (int x = 0; x < layout_.width; ++x) {
      const Position p{x, 0, z};
      auto& c = cells_[index_of(p)];
      c.kind = layout_.kind_at(p);
      c.home_kind = c.kind;
      c.owner_area = layout_.area_of(p);
      c.growth_stage = crop_max_stage(c.kind);
      if (c.kind == "chest") chests_[p];
      if (c.kind == "furnace") furnaces_.push_back(Furnace{p, "", "", 0, 0, 0});
    }
  }
  for (const auto& c : layout_.chests) chests_[c.position] = c.items;
  for (const auto& a : layout_.agents) {
    AgentBody body;
    body.name = a.name;
    body.team = a.team;
    body.position = a.position;
    body.is_server = a.server;
    agents_.push_back(std::move(body));
  }
  int id = 0;
  for (const auto& m : layout_.mobs) mobs_.push_back(Mob{id++, m.kind, m.position, m.position, true});
}

std::size_t World::index_of(const Position& p) const {
  if (!in_bounds(p)) throw ReferenceError("cell " + to_string(p) + " is outside the world");
  return static_cast<std::size_t>(p.z) * static_cast<std::size_t>(layout_.width) + static_cast<std::size_t>(p.x);
}

const BlockCell& World::cell(const Position& p) const { return cells_[index_of(p)]; }
BlockCell& World::cell(const Position& p) { return cells_[index_of(p)]; }

void World::set_block(const Position& p, std::string kind, int stage, std::optional<Team> placed_by) {
  auto& c = cell(p);
  c.kind = std::move(kind);
  c.growth_stage = is_crop(c.kind) ? std::clamp(stage, 0, crop_max_stage(c.kind)) : 0;
  c.placed_by = placed_by;
  dirty_.push_back(p);
}

bool World::is_crop(std::string_view kind) const { return rules_.crop_max_stage.find(kind) != rules_.crop_max_stage.end(); }

int World::crop_max_stage(std::string_view kind) const {
  auto it = rules_.crop_max_stage.find(kind);
  return it == rules_.crop_max_stage.end() ? 0 : it->second;
}

AgentBody* World::find_agent(std::string_view name) {
  for (auto& a : agents_) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

const AgentBody* World::find_agent(std::string_view name) const {
  for (const auto& a : agents_) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

int World::agent_index(std::string_view name) const {
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    if (agents_[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

AgentBody& World::agent(std::string_view name) {
  if (auto* a = find_agent(name)) return *a;
  throw ReferenceError("unknown agent " + std::string(name));
}

const AgentBody& World::agent(std::string_view name) const {
  if (const auto* a = find_agent(name)) return *a;
  throw ReferenceError("unknown agent " + std::string(name));
}

void World::post(Event event) { log_.push_back(std::move(event)); }

void World::validate_target(TimerEffect effect, const ScheduledEvent& target) const {
  switch (effect) {
    case TimerEffect::RegrowBlock:
    case TimerEffect::CropAdvance:
      if (!in_bounds(target.cell)) throw ReferenceError("timer target " + to_string(target.cell) + " is outside the world");
      break;
    case TimerEffect::SmeltComplete:
      if (target.index < 0 || target.index >= static_cast<int>(furnaces_.size())) {
        throw ReferenceError("no furnace with index " + std::to_string(target.index));
      }
      break;
    case TimerEffect::MobRespawn:
      if (target.index < 0 || target.index >= static_cast<int>(mobs_.size())) {
        throw ReferenceError("no mob with index " + std::to_string(target.index));
      }
      break;
  }
}

TimerHandle World::schedule(TimerEffect effect, const ScheduledEvent& target, const DelayDistribution& dist) {
  validate_target(effect, target);
  const auto delay = std::max<std::int64_t>(1, sample_delay(dist, rng_));
  return schedule_at(effect, target, tick_ + delay);
}

TimerHandle World::schedule_at(TimerEffect effect, const ScheduledEvent& target, Tick fire_tick) {
  validate_target(effect, target);
  if (fire_tick <= tick_) throw ReferenceError("timers must fire after the current tick");
  ScheduledEvent ev = target;
  ev.effect = effect;
  ev.fire_tick = fire_tick;
  ev.created_tick = tick_;
  ev.seq = next_seq_++;
  TimerHandle handle{fire_tick, ev.seq};
  timers_.emplace(handle, std::move(ev));
  return handle;
}

bool World::cancel(TimerHandle handle) { return timers_.erase(handle) > 0; }

std::size_t World::cancel_if(const std::function<bool(const ScheduledEvent&)>& pred) {
  return std::erase_if(timers_, [&](const auto& kv) { return pred(kv.second); });
}

bool World::has_timer(TimerEffect effect, const Position& cell) const {
  return std::any_of(timers_.begin(), timers_.end(),
                     [&](const auto& kv) { return kv.second.effect == effect && kv.second.cell == cell; });
}

std::vector<ScheduledEvent> World::timers() const {
  std::vector<ScheduledEvent> out;
  out.reserve(timers_.size());
  for (const auto& [_, ev] : timers_) out.push_back(ev);
  return out;
}

std::vector<Event> World::step_tick() {
  ++tick_;
  std::vector<Event> out;
  // Re-query the head each time: hooks may cancel or add timers.
  while (!timers_.empty() && timers_.begin()->first.fire_tick <= tick_) {
    auto node = timers_.extract(timers_.begin());
    apply(node.mapped(), out);
    if (hook_) hook_(*this, node.mapped(), out);
  }
  for (const auto& e : out) log_.push_back(e);
  return out;
}

void World::apply(const ScheduledEvent& ev, std::vector<Event>& out) {
  switch (ev.effect) {
    case TimerEffect::RegrowBlock: {
      if (cell(ev.cell).kind == kAir) set_block(ev.cell, ev.kind, crop_max_stage(ev.kind));
      break;
    }
    case TimerEffect::CropAdvance: {
      auto& c = cell(ev.cell);
      if (!is_crop(c.kind) || c.kind != ev.kind) break;
      const int max = crop_max_stage(c.kind);
      if (c.growth_stage < max) {
        ++c.growth_stage;
        dirty_.push_back(ev.cell);
      }
      if (c.growth_stage < max) {
        ScheduledEvent next;
        next.cell = ev.cell;
        next.kind = ev.kind;
        schedule(TimerEffect::CropAdvance, next, rules_.crop_advance);
      }
      break;
    }
    case TimerEffect::SmeltComplete: {
      auto& f = furnaces_[static_cast<std::size_t>(ev.index)];
      if (f.remaining <= 0) break;
      if (auto* owner = find_agent(f.owner)) owner->inventory.add(f.output, 1);
      --f.remaining;
      out.push_back(chat_event(tick_, std::string(kEnvironmentSender),
                               f.owner + "'s furnace " + rules_.smelt_message + " 1 " + f.output));
      if (f.remaining > 0) {
        f.next_complete = tick_ + rules_.smelt_ticks;
        ScheduledEvent next;
        next.index = ev.index;
        schedule_at(TimerEffect::SmeltComplete, next, f.next_complete);
      } else {
        f.owner.clear();
        f.output.clear();
      }
      break;
    }
    case TimerEffect::MobRespawn: {
      auto& m = mobs_[static_cast<std::size_t>(ev.index)];
      m.alive = true;
      m.position = m.spawn;
      break;
    }
  }
}

std::vector<Position> World::drain_dirty() {
  std::vector<Position> out;
  out.swap(dirty_);
  return out;
}

Observation World::observe(std::string_view name, int radius) const {
  const auto& self = agent(name);
  Observation obs;
  obs.agent = self.name;
  const auto& p = self.position;
  for (int z = std::max(0, p.z - radius); z <= std::min(layout_.depth - 1, p.z + radius); ++z) {
    for (int x = std::max(0, p.x - radius); x <= std::min(layout_.width - 1, p.x + radius); ++x) {
      const Position q{x, 0, z};
      const auto& c = cells_[index_of(q)];
      if (c.kind != kAir) obs.nearby_blocks.push_back({c.kind, q, c.growth_stage});
    }
  }
  for (const auto& m : mobs_) {
    if (m.alive && chebyshev(m.position, p) <= radius) obs.nearby_mobs.push_back({m.kind, m.position, euclidean(m.position, p)});
  }
  std::stable_sort(obs.nearby_mobs.begin(), obs.nearby_mobs.end(),
                   [](const auto& a, const auto& b) { return a.distance < b.distance; });
  for (const auto& a : agents_) {
    if (a.name != self.name && chebyshev(a.position, p) <= radius) {
      obs.nearby_players.push_back({a.name, a.team, a.position, euclidean(a.position, p)});
    }
  }
  for (const auto& g : ground_items_) {
    if (chebyshev(g.position, p) <= radius) obs.nearby_items.push_back({g.item, g.count, g.position});
  }
  for (const auto& pos : self.interacted_chests) {
    if (auto it = chests_.find(pos); it != chests_.end()) obs.chest_contents[pos] = it->second;
  }
  obs.inventory = self.inventory;
  auto& s = obs.self_status;
  s.health = self.health;
  s.hunger = self.hunger;
  s.position = self.position;
  s.direction = self.direction;
  s.equipment = self.equipment;
  s.time = tick_;
  s.inventory_slots_used = self.inventory.slots_used();
  s.elapsed_seconds = static_cast<double>(tick_) / static_cast<double>(kTicksPerSecond);
  return obs;
}

json World::to_json() const {
  json cells = json::array();
  for (const auto& c : cells_) {
    cells.push_back({c.kind, c.growth_stage, c.placed_by ? std::string(world::to_string(*c.placed_by)) : ""});
  }
  json agents = json::array();
  for (const auto& a : agents_) {
    agents.push_back({{"name", a.name},
                      {"team", world::to_string(a.team)},
                      {"pos", a.position},
                      {"health", a.health},
                      {"hunger", a.hunger},
                      {"inventory", a.inventory},
                      {"equipment", a.equipment},
                      {"busy_until", a.busy_until ? json(*a.busy_until) : json(nullptr)},
                      {"signals", a.pending_signals},
                      {"chests", a.interacted_chests}});
  }
  json mobs = json::array();
  for (const auto& m : mobs_) mobs.push_back({m.id, m.kind, m.position, m.alive});
  json chests = json::array();
  for (const auto& [pos, inv] : chests_) chests.push_back({pos, inv});
  json furnaces = json::array();
  for (const auto& f : furnaces_) furnaces.push_back({f.position, f.owner, f.output, f.remaining, f.next_complete});
  json ground = json::array();
  for (const auto& g : ground_items_) ground.push_back({g.item, g.count, g.position, world::to_string(g.origin_area)});
  json timers = json::array();
  for (const auto& [_, t] : timers_) {
    timers.push_back({t.fire_tick, t.created_tick, world::to_string(t.effect), t.cell, t.index, t.kind, t.seq});
  }
  return json{{"tick", tick_},     {"cells", cells},   {"agents", agents},   {"mobs", mobs},
              {"chests", chests},  {"furnaces", furnaces}, {"ground", ground}, {"timers", timers},
              {"rng", rng_.state()}, {"log", log_}};
}

std::uint64_t World::hash() const { return fnv1a(to_json().dump()); }

}  // namespace teamcraft::world
