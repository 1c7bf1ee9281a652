#include <algorithm>
#include <functional>
#include <limits>

#include "teamcraft/actionlang/runtime.hpp"

namespace teamcraft::actionlang {

namespace {

using scenarios::CropSpec;
using scenarios::Game;
using world::AgentBody;
using world::Position;
using world::World;

constexpr std::string_view kFarmland = "farmland";
constexpr std::string_view kDirt = "dirt";

std::string arg_str(const Call& c, std::size_t i, std::string fallback = {}) {
  return i < c.args.size() && c.args[i].is_string() ? c.args[i].str() : fallback;
}

std::int64_t arg_int(const Call& c, std::size_t i, std::int64_t fallback) {
  return i < c.args.size() && c.args[i].is_int() ? c.args[i].integer() : fallback;
}

int clamp_count(std::int64_t v) { return static_cast<int>(std::clamp<std::int64_t>(v, -1, 1'000'000)); }

int sign(int v) { return (v > 0) - (v < 0); }

// Cell next to `target` on the side facing `from`; travel is Chebyshev.
Position stand_near(const Position& from, const Position& target) {
  return Position{target.x + sign(from.x - target.x), 0, target.z + sign(from.z - target.z)};
}

std::string facing(const Position& from, const Position& to) {
  const int dx = to.x - from.x;
  const int dz = to.z - from.z;
  if (std::abs(dx) >= std::abs(dz) && dx != 0) return dx > 0 ? "east" : "west";
  if (dz != 0) return dz > 0 ? "south" : "north";
  return "";
}

int roll(World& w, const scenarios::DropSpec& d) { return static_cast<int>(w.rng().uniform_int(d.min, d.max)); }

bool holds_hoe(const AgentBody& a) {
  return std::any_of(a.inventory.stacks().begin(), a.inventory.stacks().end(),
                     [](const auto& kv) { return scenarios::is_hoe(kv.first); });
}

// Nearest cell within the search radius satisfying `pred`; ties resolve in
// row-major order.
std::optional<Position> nearest_cell(const Game& g, const AgentBody& self,
                                     const std::function<bool(const Position&, const world::BlockCell&)>& pred) {
  const auto& w = g.world();
  const int r = g.config().search_radius;
  const auto& p = self.position;
  std::optional<Position> best;
  int best_d = std::numeric_limits<int>::max();
  for (int z = std::max(0, p.z - r); z <= std::min(w.depth() - 1, p.z + r); ++z) {
    for (int x = std::max(0, p.x - r); x <= std::min(w.width() - 1, p.x + r); ++x) {
      const Position q{x, 0, z};
      const int d = world::chebyshev(q, p);
      if (d < best_d && pred(q, w.cell(q))) {
        best = q;
        best_d = d;
      }
    }
  }
  return best;
}

std::string plural(int n, std::string_view item) { return std::to_string(n) + " " + std::string(item); }

// Base for primitives that walk somewhere and then work for a fixed time.
class StagedTask : public Task {
 protected:
  enum class Phase : std::uint8_t { Seek, Walk, Work };

  // Starts walking to `dest`. Returns true when the agent is now busy walking.
  bool begin_walk(Game& g, AgentBody& self, const Position& dest) {
    dest_ = dest;
    phase_ = Phase::Walk;
    const auto ticks = static_cast<Tick>(world::chebyshev(self.position, dest)) * g.config().costs.travel_per_cell;
    if (ticks <= 0) return false;
    self.busy_until = g.world().tick() + ticks;
    return true;
  }

  void arrive(AgentBody& self, const Position& look_at) {
    const auto dir = facing(dest_, look_at);
    self.position = dest_;
    if (!dir.empty()) self.direction = dir;
  }

  void begin_work(Game& g, AgentBody& self, Tick cost) {
    phase_ = Phase::Work;
    self.busy_until = g.world().tick() + std::max<Tick>(1, cost);
  }

  Phase phase_ = Phase::Seek;
  Position dest_;
};

// mineBlock(kind, count)
class MineTask : public StagedTask {
 public:
  MineTask(std::string kind, int count) : kind_(std::move(kind)), count_(std::max(1, count)) {}

  std::optional<Outcome> resume(Game& g, AgentBody& self) override {
    while (true) {
      switch (phase_) {
        case Phase::Seek: {
          if (!resolved_) resolve(g);
          if (!error_.empty()) return Outcome{false, error_};
          auto t = nearest_cell(g, self, [&](const Position&, const world::BlockCell& c) { return matches(g, c); });
          if (!t) {
            if (mined_ == 0 && attempts_ == 0) return Outcome{false, "No " + kind_ + " nearby"};
            return Outcome{true, "Mined " + plural(mined_, kind_)};
          }
          target_ = *t;
          if (begin_walk(g, self, stand_near(self.position, target_))) return std::nullopt;
          break;
        }
        case Phase::Walk:
          arrive(self, target_);
          begin_work(g, self, g.config().costs.mine);
          return std::nullopt;
        case Phase::Work: {
          ++attempts_;
          if (matches(g, g.world().cell(target_))) {
            complete(g, self);
            ++mined_;
          }
          if (mined_ >= count_ || attempts_ >= count_ * 4) return Outcome{true, "Mined " + plural(mined_, kind_)};
          phase_ = Phase::Seek;
          break;
        }
      }
    }
  }

 private:
  void resolve(const Game& g) {
    resolved_ = true;
    const auto& cfg = g.config();
    if (cfg.blocks.count(kind_)) {
      block_ = kind_;
      return;
    }
    if (const auto* crop = cfg.resolve_crop(kind_)) {
      crop_ = crop;
      return;
    }
    const auto& legend = g.world().layout().legend;
    const bool exists = std::any_of(legend.begin(), legend.end(), [&](const auto& kv) { return kv.second == kind_; });
    if (exists && kind_ != world::kAir) error_ = "Cannot mine " + kind_;
  }

  bool matches(const Game& g, const world::BlockCell& c) const {
    if (!block_.empty()) return c.kind == block_;
    if (crop_) return c.kind == crop_->block && c.growth_stage >= crop_->max_stage;
    (void)g;
    return false;
  }

  void complete(Game& g, AgentBody& self) {
    auto& w = g.world();
    if (crop_) {
      for (const auto& d : crop_->harvest_drops) self.inventory.add(d.item, roll(w, d));
      if (crop_->reset_stage >= 0) {
        w.set_block(target_, crop_->block, crop_->reset_stage);
      } else {
        w.set_block(target_, std::string(kFarmland));
      }
      g.start_crop_growth(target_);
      return;
    }
    const auto& rule = g.config().blocks.at(block_);
    for (const auto& d : rule.drops) {
      const int n = rule.mushroom ? scenarios::mushroom_yield(w.rng()) : roll(w, d);
      if (rule.drops_to_ground) {
        g.drop_on_ground(d.item, n, target_);
      } else {
        self.inventory.add(d.item, n);
      }
    }
    w.set_block(target_, std::string(world::kAir));
    g.on_block_removed(target_);
  }

  std::string kind_;
  int count_;
  bool resolved_ = false;
  std::string block_;
  const CropSpec* crop_ = nullptr;
  std::string error_;
  Position target_;
  int mined_ = 0;
  int attempts_ = 0;
};

std::string missing_text(const scenarios::Recipe& r, const world::Inventory& inv, int crafts) {
  std::string out;
  for (const auto& [item, need] : r.inputs) {
    const int short_by = need * crafts - inv.count(item);
    if (short_by <= 0) continue;
    if (!out.empty()) out += ", ";
    out += std::to_string(short_by) + " more " + item;
  }
  return out;
}

int possible_crafts(const scenarios::Recipe& r, const world::Inventory& inv) {
  int n = std::numeric_limits<int>::max();
  for (const auto& [item, need] : r.inputs) n = std::min(n, inv.count(item) / need);
  return n;
}

// craftItem(item, count)
class CraftTask : public StagedTask {
 public:
  CraftTask(std::string item, int count) : item_(std::move(item)), count_(std::max(1, count)) {}

  std::optional<Outcome> resume(Game& g, AgentBody& self) override {
    switch (phase_) {
      case Phase::Seek: {
        recipe_ = scenarios::recipe_lookup(g.config().recipes, item_);
        if (!recipe_) return Outcome{false, "There is no recipe for " + item_};
        if (recipe_->needs_furnace) return Outcome{false, item_ + " must be smelted in a furnace, not crafted"};
        const int n = std::min(count_, possible_crafts(*recipe_, self.inventory));
        if (n <= 0) return shortfall(self);
        if (recipe_->needs_table) {
          auto t = nearest_cell(g, self, [](const Position&, const world::BlockCell& c) { return c.kind == "crafting_table"; });
          if (!t) return Outcome{false, "I cannot make " + item_ + " because there is no crafting table nearby"};
          table_ = *t;
          if (begin_walk(g, self, stand_near(self.position, table_))) return std::nullopt;
        }
        [[fallthrough]];
      }
      case Phase::Walk: {
        if (recipe_->needs_table) arrive(self, table_);
        const int n = std::min(count_, possible_crafts(*recipe_, self.inventory));
        if (n <= 0) return shortfall(self);
        begin_work(g, self, g.config().costs.craft * n);
        return std::nullopt;
      }
      case Phase::Work: {
        const int n = std::min(count_, possible_crafts(*recipe_, self.inventory));
        if (n <= 0) return shortfall(self);
        for (const auto& [item, need] : recipe_->inputs) self.inventory.remove(item, need * n);
        self.inventory.add(item_, recipe_->output_count * n);
        for (const auto& [item, k] : recipe_->returns) self.inventory.add(item, k * n);
        std::string msg = "Crafted " + plural(recipe_->output_count * n, item_);
        if (n < count_) msg += ". I cannot make more " + item_ + " because I need: " + missing_text(*recipe_, self.inventory, count_ - n);
        return Outcome{true, msg};
      }
    }
    return Outcome{false, "craftItem failed"};
  }

 private:
  Outcome shortfall(const AgentBody& self) const {
    return Outcome{false, "I cannot make " + item_ + " because I need: " + missing_text(*recipe_, self.inventory, count_)};
  }

  std::string item_;
  int count_;
  const scenarios::Recipe* recipe_ = nullptr;
  Position table_;
};

// placeItem(item, x, z)
class PlaceTask : public StagedTask {
 public:
  PlaceTask(std::string item, int x, int z) : item_(std::move(item)), at_{x, 0, z} {}

  std::optional<Outcome> resume(Game& g, AgentBody& self) override {
    switch (phase_) {
      case Phase::Seek: {
        if (self.inventory.count(item_) < 1) return Outcome{false, "I have no " + item_ + " to place"};
        const auto& placeable = g.config().placeable;
        if (std::find(placeable.begin(), placeable.end(), item_) == placeable.end()) {
          return Outcome{false, item_ + " cannot be placed"};
        }
        if (!g.world().in_bounds(at_)) return Outcome{false, "Cannot place " + item_ + " outside the arena"};
        if (begin_walk(g, self, stand_near(self.position, at_))) return std::nullopt;
        [[fallthrough]];
      }
      case Phase::Walk:
        arrive(self, at_);
        begin_work(g, self, g.config().costs.place);
        return std::nullopt;
      case Phase::Work: {
        auto& w = g.world();
        if (w.cell(at_).kind != world::kAir) {
          return Outcome{false, "Cannot place " + item_ + " at " + world::to_string(at_) + ": the cell is occupied"};
        }
        if (self.inventory.remove(item_, 1) != 1) return Outcome{false, "I have no " + item_ + " to place"};
        w.set_block(at_, item_, 0, self.team);
        return Outcome{true, "Placed " + item_ + " at " + world::to_string(at_)};
      }
    }
    return Outcome{false, "placeItem failed"};
  }

 private:
  std::string item_;
  Position at_;
};

bool is_teammate(const World& w, const AgentBody& self, std::string_view peer) {
  const auto* other = w.find_agent(peer);
  return other && other->name != self.name && other->team == self.team && !other->is_server;
}

// sendSignal(peer)
class SendSignalTask : public Task {
 public:
  explicit SendSignalTask(std::string peer) : peer_(std::move(peer)) {}

  std::optional<Outcome> resume(Game& g, AgentBody& self) override {
    auto& w = g.world();
    if (!is_teammate(w, self, peer_)) return Outcome{false, peer_ + " is not a teammate"};
    w.agent(peer_).pending_signals.push_back(self.name);
    return Outcome{true, "Sent signal to " + peer_};
  }

 private:
  std::string peer_;
};

// waitSignal(peer, timeout)
class WaitSignalTask : public Task {
 public:
  WaitSignalTask(std::string peer, Tick timeout) : peer_(std::move(peer)), timeout_(std::max<Tick>(1, timeout)) {}

  std::optional<Outcome> resume(Game& g, AgentBody& self) override {
    const Tick now = g.world().tick();
    if (!start_) {
      start_ = now;
      if (!any() && !is_teammate(g.world(), self, peer_)) return Outcome{false, peer_ + " is not a teammate"};
    }
    if (auto got = take(self)) return got;
    if (now - *start_ >= timeout_ || now + 1 >= g.duration()) return Outcome{true, "Timed out waiting for a signal"};
    self.busy_until = now + 1;
    return std::nullopt;
  }

  std::optional<Outcome> poll_signal(Game&, AgentBody& self) override { return start_ ? take(self) : std::nullopt; }

 private:
  bool any() const { return peer_.empty() || peer_ == "any" || peer_ == "null"; }

  std::optional<Outcome> take(AgentBody& self) {
    auto& q = self.pending_signals;
    auto it = any() ? q.begin() : std::find(q.begin(), q.end(), peer_);
    if (it == q.end()) return std::nullopt;
    std::string from = *it;
    q.erase(it);
    return Outcome{true, "Received signal from " + from};
  }

  std::string peer_;
  Tick timeout_;
  std::optional<Tick> start_;
};

// farm(mode, crop, target)
class FarmTask : public StagedTask {
 public:
  FarmTask(std::string mode, std::string crop, std::string target)
      : mode_(std::move(mode)), crop_name_(std::move(crop)), target_name_(std::move(target)) {}

  std::optional<Outcome> resume(Game& g, AgentBody& self) override {
    while (true) {
      switch (phase_) {
        case Phase::Seek: {
          if (!started_) {
            if (auto err = setup(g, self)) return Outcome{false, *err};
            started_ = true;
          }
          if (done_ >= limit_) return finish();
          auto t = nearest_cell(g, self, [&](const Position& p, const world::BlockCell& c) { return eligible(g, self, p, c); });
          if (!t) return finish();
          cell_ = *t;
          if (begin_walk(g, self, stand_near(self.position, cell_))) return std::nullopt;
          break;
        }
        case Phase::Walk:
          arrive(self, cell_);
          begin_work(g, self, g.config().costs.farm);
          return std::nullopt;
        case Phase::Work: {
          ++attempts_;
          if (eligible(g, self, cell_, g.world().cell(cell_))) {
            if (auto err = apply(g, self)) {
              if (done_ == 0) return Outcome{false, *err};
              return Outcome{true, verb() + " " + plural(done_, crop_->block) + ". " + *err};
            }
            ++done_;
          }
          if (attempts_ >= limit_ * 4) return finish();
          phase_ = Phase::Seek;
          break;
        }
      }
    }
  }

 private:
  std::optional<std::string> setup(Game& g, AgentBody& self) {
    const auto& cfg = g.config();
    crop_ = cfg.resolve_crop(crop_name_);
    if (!crop_) return "Unknown crop " + crop_name_;
    int eligible_now = 0;
    const auto& w = g.world();
    for (int z = 0; z < w.depth(); ++z) {
      for (int x = 0; x < w.width(); ++x) {
        const Position p{x, 0, z};
        if (world::chebyshev(p, self.position) <= cfg.search_radius && eligible(g, self, p, w.cell(p))) ++eligible_now;
      }
    }
    if (mode_ == "convert") {
      target_ = cfg.resolve_crop(target_name_);
      if (!target_) return target_name_.empty() ? std::string("convert needs a target crop") : "Unknown crop " + target_name_;
      if (target_ == crop_) return "Cannot convert " + crop_->block + " into itself";
    }
    if (mode_ == "plant") {
      const int seeds = self.inventory.count(crop_->seed);
      if (seeds == 0) return "I have no " + crop_->seed + " to plant " + crop_->block;
      if (eligible_now == 0) return "No farmland nearby to plant " + crop_->block;
      limit_ = std::min(seeds, eligible_now);
      return std::nullopt;
    }
    if (eligible_now == 0) {
      if (mode_ == "harvest") return "No mature " + crop_->block + " to harvest nearby";
      if (mode_ == "destroy") return "No " + crop_->block + " nearby to destroy";
      return "No " + crop_->block + " to convert";
    }
    limit_ = eligible_now;
    return std::nullopt;
  }

  bool eligible(const Game& g, const AgentBody& self, const Position& p, const world::BlockCell& c) const {
    if (mode_ == "harvest") return c.kind == crop_->block && c.growth_stage >= crop_->max_stage;
    if (mode_ == "destroy") return c.kind == crop_->block;
    if (mode_ == "convert") return c.kind == crop_->block && c.owner_area != self.team;
    (void)p;
    (void)g;
    if (c.kind == kFarmland) return true;
    if (c.kind == kDirt) return !crop_->needs_farmland || holds_hoe(self);
    return false;
  }

  std::optional<std::string> apply(Game& g, AgentBody& self) {
    auto& w = g.world();
    if (mode_ == "harvest") {
      for (const auto& d : crop_->harvest_drops) self.inventory.add(d.item, roll(w, d));
      if (crop_->reset_stage >= 0) {
        w.set_block(cell_, crop_->block, crop_->reset_stage);
      } else if (self.inventory.remove(crop_->seed, 1) == 1) {
        w.set_block(cell_, crop_->block, 0);
      } else {
        w.set_block(cell_, std::string(kFarmland));
      }
      g.start_crop_growth(cell_);
      return std::nullopt;
    }
    if (mode_ == "destroy") {
      if (w.cell(cell_).growth_stage >= crop_->max_stage) {
        for (const auto& d : crop_->harvest_drops) self.inventory.add(d.item, roll(w, d));
      } else {
        self.inventory.add(crop_->seed, 1);
      }
      w.set_block(cell_, std::string(kDirt));
      return std::nullopt;
    }
    if (mode_ == "convert") {
      auto err = g.convert_cell(cell_, *target_, self);
      if (!err.empty()) return err;
      return std::nullopt;
    }
    if (self.inventory.remove(crop_->seed, 1) != 1) return "I ran out of " + crop_->seed;
    w.set_block(cell_, crop_->block, 0);
    g.start_crop_growth(cell_);
    return std::nullopt;
  }

  std::string verb() const {
    if (mode_ == "harvest") return "Harvested";
    if (mode_ == "destroy") return "Destroyed";
    if (mode_ == "convert") return "Converted";
    return "Planted";
  }

  Outcome finish() const {
    std::string msg = verb() + " " + plural(done_, crop_->block);
    if (mode_ == "convert") msg += " into " + target_->block;
    return Outcome{true, msg};
  }

  std::string mode_;
  std::string crop_name_;
  std::string target_name_;
  const CropSpec* crop_ = nullptr;
  const CropSpec* target_ = nullptr;
  bool started_ = false;
  int limit_ = 0;
  int done_ = 0;
  int attempts_ = 0;
  Position cell_;
};

// smeltItem(item, fuel, count)
class SmeltTask : public StagedTask {
 public:
  SmeltTask(std::string item, int count) : item_(std::move(item)), count_(std::max(0, count)) {}

  std::optional<Outcome> resume(Game& g, AgentBody& self) override {
    auto& w = g.world();
    switch (phase_) {
      case Phase::Seek: {
        for (const auto& [out, r] : g.config().recipes) {
          if (r.needs_furnace && r.inputs.begin()->first == item_) recipe_ = &r;
        }
        if (!recipe_) return Outcome{false, "Cannot smelt " + item_};
        if (count_ == 0) return Outcome{true, "Smelted 0 " + item_};
        if (self.inventory.count(item_) == 0) return Outcome{false, "I have no " + item_ + " to smelt"};
        if (w.furnaces().empty()) return Outcome{false, "No furnace nearby"};
        const auto f = free_furnace(g, self);
        if (!f) {
          const bool any_near = std::any_of(w.furnaces().begin(), w.furnaces().end(), [&](const auto& fu) {
            return world::chebyshev(fu.position, self.position) <= g.config().search_radius;
          });
          return Outcome{false, any_near ? "furnaces busy" : "No furnace nearby"};
        }
        furnace_ = *f;
        if (begin_walk(g, self, stand_near(self.position, w.furnaces()[furnace_].position))) return std::nullopt;
        [[fallthrough]];
      }
      case Phase::Walk:
        arrive(self, w.furnaces()[furnace_].position);
        begin_work(g, self, g.config().costs.smelt);
        return std::nullopt;
      case Phase::Work: {
        auto& f = w.furnaces()[furnace_];
        if (!f.idle()) return Outcome{false, "furnaces busy"};
        const int per = recipe_->inputs.begin()->second;
        const int n = std::min(count_, self.inventory.count(item_) / per);
        if (n == 0) return Outcome{false, "I have no " + item_ + " to smelt"};
        self.inventory.remove(item_, n * per);
        f.owner = self.name;
        f.output = recipe_->output;
        f.remaining = n;
        f.queued_at = w.tick();
        f.next_complete = w.tick() + g.config().costs.smelt_per_item;
        world::ScheduledEvent target;
        target.index = static_cast<int>(furnace_);
        w.schedule_at(world::TimerEffect::SmeltComplete, target, f.next_complete);
        return Outcome{true, "Queued " + plural(n, item_) + " in the furnace at " + world::to_string(f.position)};
      }
    }
    return Outcome{false, "smeltItem failed"};
  }

 private:
  std::optional<std::size_t> free_furnace(const Game& g, const AgentBody& self) const {
    const auto& fs = g.world().furnaces();
    std::optional<std::size_t> best;
    int best_d = std::numeric_limits<int>::max();
    for (std::size_t i = 0; i < fs.size(); ++i) {
      const int d = world::chebyshev(fs[i].position, self.position);
      if (fs[i].idle() && d <= g.config().search_radius && d < best_d) {
        best = i;
        best_d = d;
      }
    }
    return best;
  }

  std::string item_;
  int count_;
  const scenarios::Recipe* recipe_ = nullptr;
  std::size_t furnace_ = 0;
};

// killMob(kind, timeout, count)
class KillTask : public StagedTask {
 public:
  KillTask(std::string kind, Tick timeout, int count) : kind_(std::move(kind)), timeout_(std::max<Tick>(0, timeout)), count_(std::max(1, count)) {}

  std::optional<Outcome> resume(Game& g, AgentBody& self) override {
    auto& w = g.world();
    while (true) {
      switch (phase_) {
        case Phase::Seek: {
          if (!start_) start_ = w.tick();
          mob_ = nearest_mob(g, self);
          if (mob_ < 0) {
            if (w.tick() - *start_ >= timeout_ || w.tick() + g.config().costs.kill_poll >= g.duration()) {
              if (killed_ == 0) return Outcome{false, "No " + kind_ + " nearby"};
              return Outcome{true, "Killed " + plural(killed_, kind_)};
            }
            self.busy_until = w.tick() + std::max<Tick>(1, g.config().costs.kill_poll);
            return std::nullopt;
          }
          if (begin_walk(g, self, stand_near(self.position, mob_pos(g)))) return std::nullopt;
          break;
        }
        case Phase::Walk:
          arrive(self, mob_pos(g));
          begin_work(g, self, g.config().costs.kill);
          return std::nullopt;
        case Phase::Work: {
          auto& m = w.mobs()[static_cast<std::size_t>(mob_)];
          if (m.alive) {
            m.alive = false;
            auto drops = g.config().mob_drops.find(m.kind);
            if (drops != g.config().mob_drops.end()) {
              for (const auto& d : drops->second) self.inventory.add(d.item, roll(w, d));
            }
            world::ScheduledEvent target;
            target.index = mob_;
            w.schedule(world::TimerEffect::MobRespawn, target, g.config().mob_respawn);
            ++killed_;
          }
          if (killed_ >= count_) return Outcome{true, "Killed " + plural(killed_, kind_)};
          phase_ = Phase::Seek;
          break;
        }
      }
    }
  }

 private:
  int nearest_mob(const Game& g, const AgentBody& self) const {
    int best = -1;
    int best_d = std::numeric_limits<int>::max();
    const auto& mobs = g.world().mobs();
    for (std::size_t i = 0; i < mobs.size(); ++i) {
      const auto& m = mobs[i];
      const int d = world::chebyshev(m.position, self.position);
      if (m.alive && m.kind == kind_ && d <= g.config().search_radius && d < best_d) {
        best = static_cast<int>(i);
        best_d = d;
      }
    }
    return best;
  }

  Position mob_pos(const Game& g) const { return g.world().mobs()[static_cast<std::size_t>(mob_)].position; }

  std::string kind_;
  Tick timeout_;
  int count_;
  std::optional<Tick> start_;
  int mob_ = -1;
  int killed_ = 0;
};

// giveToPlayer(item, player, count)
class GiveTask : public StagedTask {
 public:
  GiveTask(std::string item, std::string player, int count) : item_(std::move(item)), player_(std::move(player)), count_(count) {}

  std::optional<Outcome> resume(Game& g, AgentBody& self) override {
    auto& w = g.world();
    switch (phase_) {
      case Phase::Seek: {
        const auto* to = w.find_agent(player_);
        if (!to) return Outcome{false, "There is no player named " + player_};
        if (to->name == self.name) return Outcome{false, "I cannot give items to myself"};
        if (count_ == 0) return Outcome{true, "Gave 0 " + item_ + " to " + player_};
        if (self.inventory.count(item_) == 0) return Outcome{false, "I have no " + item_ + " to give"};
        if (begin_walk(g, self, stand_near(self.position, to->position))) return std::nullopt;
        [[fallthrough]];
      }
      case Phase::Walk:
        arrive(self, w.agent(player_).position);
        begin_work(g, self, g.config().costs.give);
        return std::nullopt;
      case Phase::Work: {
        const int held = self.inventory.count(item_);
        const int n = count_ < 0 ? held : std::min(count_, held);
        if (n == 0) return Outcome{false, "I have no " + item_ + " to give"};
        auto& to = w.agent(player_);
        self.inventory.remove(item_, n);
        to.inventory.add(item_, n);
        std::string msg = "Gave " + plural(n, item_) + " to " + player_;
        if (to.is_server) {
          const int pts = g.hand_in(self.name, to.name, item_, n);
          msg += pts > 0 ? " for " + std::to_string(pts) + " points" : " for 0 points";
        }
        return Outcome{true, msg};
      }
    }
    return Outcome{false, "giveToPlayer failed"};
  }

 private:
  std::string item_;
  std::string player_;
  int count_;
};

std::string describe(const world::Inventory& inv) {
  if (inv.empty()) return "nothing";
  std::string out;
  for (const auto& [item, n] : inv.stacks()) {
    if (!out.empty()) out += ", ";
    out += std::to_string(n) + " " + item;
  }
  return out;
}

// useChest(mode, x, z, item, count)
class ChestTask : public StagedTask {
 public:
  ChestTask(std::string mode, int x, int z, std::string item, std::optional<int> count)
      : mode_(std::move(mode)), at_{x, 0, z}, item_(std::move(item)), count_(count) {}

  std::optional<Outcome> resume(Game& g, AgentBody& self) override {
    auto& w = g.world();
    switch (phase_) {
      case Phase::Seek:
        if (!w.in_bounds(at_) || !w.chests().count(at_)) return Outcome{false, "There is no chest at " + world::to_string(at_)};
        if (mode_ == "deposit" && (item_.empty() ? self.inventory.empty() : self.inventory.count(item_) == 0)) {
          return Outcome{false, "I have no " + (item_.empty() ? std::string("items") : item_) + " to deposit"};
        }
        if (begin_walk(g, self, stand_near(self.position, at_))) return std::nullopt;
        [[fallthrough]];
      case Phase::Walk:
        arrive(self, at_);
        begin_work(g, self, g.config().costs.chest);
        return std::nullopt;
      case Phase::Work: {
        auto& chest = w.chests().at(at_);
        if (std::find(self.interacted_chests.begin(), self.interacted_chests.end(), at_) == self.interacted_chests.end()) {
          self.interacted_chests.push_back(at_);
        }
        if (mode_ == "check") return Outcome{true, "Chest at " + world::to_string(at_) + " contains " + describe(chest)};
        auto& from = mode_ == "get" ? chest : self.inventory;
        auto& to = mode_ == "get" ? self.inventory : chest;
        std::vector<std::pair<std::string, int>> plan;
        if (item_.empty()) {
          for (const auto& [item, n] : from.stacks()) plan.emplace_back(item, n);
        } else {
          const int want = count_ && *count_ >= 0 ? *count_ : from.count(item_);
          plan.emplace_back(item_, std::min(want, from.count(item_)));
        }
        world::Inventory moved;
        for (const auto& [item, n] : plan) {
          const int k = from.remove(item, n);
          to.add(item, k);
          moved.add(item, k);
        }
        if (moved.empty()) {
          if (mode_ == "get") return Outcome{false, "The chest at " + world::to_string(at_) + " has no " + (item_.empty() ? "items" : item_)};
          return Outcome{false, "I have no " + (item_.empty() ? std::string("items") : item_) + " to deposit"};
        }
        return Outcome{true, std::string(mode_ == "get" ? "Took " : "Deposited ") + describe(moved) +
                                 (mode_ == "get" ? " from" : " into") + " the chest at " + world::to_string(at_)};
      }
    }
    return Outcome{false, "useChest failed"};
  }

 private:
  std::string mode_;
  Position at_;
  std::string item_;
  std::optional<int> count_;
};

// moveTo(x, z)
class MoveTask : public StagedTask {
 public:
  MoveTask(int x, int z) : at_{x, 0, z} {}

  std::optional<Outcome> resume(Game& g, AgentBody& self) override {
    if (phase_ == Phase::Seek) {
      const auto& w = g.world();
      at_.x = std::clamp(at_.x, 0, w.width() - 1);
      at_.z = std::clamp(at_.z, 0, w.depth() - 1);
      if (begin_walk(g, self, at_)) return std::nullopt;
    }
    const auto dir = facing(self.position, at_);
    self.position = at_;
    if (!dir.empty()) self.direction = dir;
    return Outcome{true, "Moved to " + world::to_string(at_)};
  }

 private:
  Position at_;
};

// milkCow()
class MilkTask : public StagedTask {
 public:
  std::optional<Outcome> resume(Game& g, AgentBody& self) override {
    auto& w = g.world();
    switch (phase_) {
      case Phase::Seek: {
        if (self.inventory.count("bucket") == 0) return Outcome{false, "I need a bucket to milk a cow"};
        int best_d = std::numeric_limits<int>::max();
        for (std::size_t i = 0; i < w.mobs().size(); ++i) {
          const auto& m = w.mobs()[i];
          const int d = world::chebyshev(m.position, self.position);
          if (m.alive && m.kind == "cow" && d <= g.config().search_radius && d < best_d) {
            cow_ = static_cast<int>(i);
            best_d = d;
          }
        }
        if (cow_ < 0) return Outcome{false, "No cow nearby"};
        if (begin_walk(g, self, stand_near(self.position, cow_pos(g)))) return std::nullopt;
        [[fallthrough]];
      }
      case Phase::Walk:
        arrive(self, cow_pos(g));
        begin_work(g, self, g.config().costs.milk);
        return std::nullopt;
      case Phase::Work:
        if (!w.mobs()[static_cast<std::size_t>(cow_)].alive) return Outcome{false, "The cow is gone"};
        if (self.inventory.remove("bucket", 1) != 1) return Outcome{false, "I need a bucket to milk a cow"};
        self.inventory.add("milk_bucket", 1);
        return Outcome{true, "Milked a cow: 1 milk_bucket"};
    }
    return Outcome{false, "milkCow failed"};
  }

 private:
  Position cow_pos(const Game& g) const { return g.world().mobs()[static_cast<std::size_t>(cow_)].position; }
  int cow_ = -1;
};

}  // namespace

std::unique_ptr<Task> make_task(const Call& c) {
  const auto& n = c.name;
  if (n == "mineBlock") return std::make_unique<MineTask>(arg_str(c, 0), clamp_count(arg_int(c, 1, 1)));
  if (n == "craftItem") return std::make_unique<CraftTask>(arg_str(c, 0), clamp_count(arg_int(c, 1, 1)));
  if (n == "placeItem") {
    return std::make_unique<PlaceTask>(arg_str(c, 0), clamp_count(arg_int(c, 1, 0)), clamp_count(arg_int(c, 2, 0)));
  }
  if (n == "sendSignal") return std::make_unique<SendSignalTask>(arg_str(c, 0));
  if (n == "waitSignal") return std::make_unique<WaitSignalTask>(arg_str(c, 0, "any"), arg_int(c, 1, 600));
  if (n == "farm") return std::make_unique<FarmTask>(arg_str(c, 0), arg_str(c, 1), arg_str(c, 2));
  if (n == "smeltItem") return std::make_unique<SmeltTask>(arg_str(c, 0), clamp_count(arg_int(c, 2, 1)));
  if (n == "killMob") return std::make_unique<KillTask>(arg_str(c, 0), arg_int(c, 1, 300), clamp_count(arg_int(c, 2, 1)));
  if (n == "giveToPlayer") return std::make_unique<GiveTask>(arg_str(c, 0), arg_str(c, 1), clamp_count(arg_int(c, 2, -1)));
  if (n == "useChest") {
    std::optional<int> count;
    if (c.args.size() > 4 && c.args[4].is_int()) count = clamp_count(c.args[4].integer());
    return std::make_unique<ChestTask>(arg_str(c, 0), clamp_count(arg_int(c, 1, 0)), clamp_count(arg_int(c, 2, 0)),
                                       arg_str(c, 3), count);
  }
  if (n == "moveTo") return std::make_unique<MoveTask>(clamp_count(arg_int(c, 0, 0)), clamp_count(arg_int(c, 1, 0)));
  if (n == "milkCow") return std::make_unique<MilkTask>();
  return nullptr;
}

PrimitiveTable primitive_table(const scenarios::ScenarioConfig& config) { return PrimitiveTable(config.primitives); }

}  // namespace teamcraft::actionlang
