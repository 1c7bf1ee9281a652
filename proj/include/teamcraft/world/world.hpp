#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "teamcraft/world/event.hpp"
#include "teamcraft/world/layout.hpp"
#include "teamcraft/world/rng.hpp"
#include "teamcraft/world/types.hpp"

namespace teamcraft::world {

inline constexpr std::string_view kAir = "air";

class ReferenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BlockCell {
  std::string kind{kAir};
  int growth_stage = 0;
  Team owner_area = Team::Neutral;
  // Kind the layout put here; regrowth restores it.
  std::string home_kind{kAir};
  // Team that placed this block, when an agent placed it.
  std::optional<Team> placed_by;

  bool operator==(const BlockCell&) const = default;
};

struct AgentBody {
  std::string name;
  Team team = Team::Neutral;
  Position position;
  int health = 20;
  int hunger = 20;
  Inventory inventory;
  std::string equipment;
  std::optional<Tick> busy_until;
  bool is_server = false;
  std::string direction = "north";
  // Senders of signals not yet consumed by waitSignal, oldest first.
  std::vector<std::string> pending_signals;
  // Chests whose contents this agent has seen.
  std::vector<Position> interacted_chests;

  bool busy(Tick now) const { return busy_until && *busy_until > now; }
  bool operator==(const AgentBody&) const = default;
};

struct Mob {
  int id = 0;
  std::string kind;
  Position position;
  Position spawn;
  bool alive = true;
  bool operator==(const Mob&) const = default;
};

struct Furnace {
  Position position;
  std::string owner;
  std::string output;
  int remaining = 0;
  Tick queued_at = 0;
  Tick next_complete = 0;

  bool idle() const { return remaining == 0; }
  bool operator==(const Furnace&) const = default;
};

struct GroundItem {
  std::string item;
  int count = 0;
  Position position;
  Team origin_area = Team::Neutral;
  bool operator==(const GroundItem&) const = default;
};

enum class TimerEffect : std::uint8_t { RegrowBlock, CropAdvance, SmeltComplete, MobRespawn };

std::string_view to_string(TimerEffect effect);

struct ScheduledEvent {
  Tick fire_tick = 0;
  Tick created_tick = 0;
  TimerEffect effect = TimerEffect::RegrowBlock;
  // Cell targets use `cell`; furnace and mob targets use `index`.
  Position cell;
  int index = -1;
  // Block kind restored by RegrowBlock.
  std::string kind;
  std::uint64_t seq = 0;
  bool operator==(const ScheduledEvent&) const = default;
};

struct TimerHandle {
  Tick fire_tick = 0;
  std::uint64_t seq = 0;
  auto operator<=>(const TimerHandle&) const = default;
};

struct WorldRules {
  // Highest growth stage per crop block kind; kinds absent here are not crops.
  std::map<std::string, int, std::less<>> crop_max_stage;
  DelayDistribution crop_advance = GeometricDelay{0.05};
  Tick smelt_ticks = 200;
  std::string smelt_message = "finished smelting";
};

class World {
 public:
  using TimerHook = std::function<void(World&, const ScheduledEvent&, std::vector<Event>&)>;

  World(const Layout& layout, std::uint64_t seed, WorldRules rules = {});

  Tick tick() const { return tick_; }
  const Layout& layout() const { return layout_; }
  const WorldRules& rules() const { return rules_; }
  int width() const { return layout_.width; }
  int depth() const { return layout_.depth; }
  bool in_bounds(const Position& p) const { return layout_.in_bounds(p); }

  const BlockCell& cell(const Position& p) const;
  BlockCell& cell(const Position& p);
  // Sets kind and stage and marks the cell dirty for rule bookkeeping.
  void set_block(const Position& p, std::string kind, int stage = 0, std::optional<Team> placed_by = std::nullopt);
  bool is_crop(std::string_view kind) const;
  int crop_max_stage(std::string_view kind) const;

  std::vector<AgentBody>& agents() { return agents_; }
  const std::vector<AgentBody>& agents() const { return agents_; }
  AgentBody* find_agent(std::string_view name);
  const AgentBody* find_agent(std::string_view name) const;
  int agent_index(std::string_view name) const;
  AgentBody& agent(std::string_view name);
  const AgentBody& agent(std::string_view name) const;

  std::vector<Mob>& mobs() { return mobs_; }
  const std::vector<Mob>& mobs() const { return mobs_; }
  std::map<Position, Inventory>& chests() { return chests_; }
  const std::map<Position, Inventory>& chests() const { return chests_; }
  std::vector<Furnace>& furnaces() { return furnaces_; }
  const std::vector<Furnace>& furnaces() const { return furnaces_; }
  std::vector<GroundItem>& ground_items() { return ground_items_; }
  const std::vector<GroundItem>& ground_items() const { return ground_items_; }

  Rng& rng() { return rng_; }
  const Rng& rng() const { return rng_; }

  const std::vector<Event>& chat_log() const { return log_; }
  void post(Event event);

  // Enqueues an effect `sample(dist)` ticks from now.
  TimerHandle schedule(TimerEffect effect, const ScheduledEvent& target, const DelayDistribution& dist);
  // Enqueues an effect at an absolute tick, which must lie in the future.
  TimerHandle schedule_at(TimerEffect effect, const ScheduledEvent& target, Tick fire_tick);
  bool cancel(TimerHandle handle);
  std::size_t cancel_if(const std::function<bool(const ScheduledEvent&)>& pred);
  bool has_timer(TimerEffect effect, const Position& cell) const;
  std::vector<ScheduledEvent> timers() const;
  std::size_t timer_count() const { return timers_.size(); }

  // Advances one tick and applies every timer due at the new tick, in
  // insertion order. Returns the events those effects produced.
  std::vector<Event> step_tick();
  // Called after each applied timer so scenario rules can react.
  void set_timer_hook(TimerHook hook) { hook_ = std::move(hook); }

  // Cells whose block changed since the last drain.
  std::vector<Position> drain_dirty();

  Observation observe(std::string_view agent, int radius) const;

  nlohmann::json to_json() const;
  std::uint64_t hash() const;

 private:
  std::size_t index_of(const Position& p) const;
  void apply(const ScheduledEvent& ev, std::vector<Event>& out);
  void validate_target(TimerEffect effect, const ScheduledEvent& target) const;

  Layout layout_;
  WorldRules rules_;
  Tick tick_ = 0;
  std::vector<BlockCell> cells_;
  std::vector<AgentBody> agents_;
  std::vector<Mob> mobs_;
  std::map<Position, Inventory> chests_;
  std::vector<Furnace> furnaces_;
  std::vector<GroundItem> ground_items_;
  std::map<TimerHandle, ScheduledEvent> timers_;
  std::uint64_t next_seq_ = 0;
  Rng rng_;
  std::vector<Event> log_;
  std::vector<Position> dirty_;
  TimerHook hook_;
};

std::uint64_t fnv1a(std::string_view bytes);

}  // namespace teamcraft::world
