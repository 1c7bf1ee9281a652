#include "teamcraft/scenarios/game.hpp"

#include <algorithm>
#include <limits>

namespace teamcraft::scenarios {

using world::AgentBody;
using world::BlockCell;
using world::ScheduledEvent;
using world::TimerEffect;

namespace {

constexpr std::string_view kSlime = "slime_block";

bool is_home_slime(const BlockCell& c) { return c.home_kind == kSlime; }

int roll(world::Rng& rng, const DropSpec& d) { return static_cast<int>(rng.uniform_int(d.min, d.max)); }

}  // namespace

std::optional<Tick> TeamScore::first_point_tick() const {
  for (const auto& [tick, pts] : timeline) {
    if (pts > 0) return tick;
  }
  return std::nullopt;
}

int score_hand_in(TeamScore& score, std::string_view item, int count, const FoodPointsTable& table, int max_types) {
  if (count < 1) return 0;
  auto it = table.find(item);
  if (it == table.end()) return 0;
  auto& types = score.submitted_types;
  const bool known = std::find(types.begin(), types.end(), item) != types.end();
  if (!known) {
    if (static_cast<int>(types.size()) >= max_types) return 0;
    types.emplace_back(item);
  }
  const int points = count * it->second;
  score.points += points;
  return points;
}

int mushroom_yield(world::Rng& rng) { return static_cast<int>(rng.uniform_int(0, 2)); }

int counted_slime(const world::World& w, Team team) {
  const auto* area = w.layout().area(team);
  if (!area) return 0;
  int n = 0;
  for (int z = area->z0; z <= area->z1; ++z) {
    for (int x = area->x0; x <= area->x1; ++x) {
      const auto& c = w.cell({x, 0, z});
      if (c.kind != kSlime) continue;
      if (is_home_slime(c) || (c.placed_by && *c.placed_by != team)) ++n;
    }
  }
  return n;
}

bool mushroom_regrow_eligible(const world::World& w, Team team, int threshold) {
  return counted_slime(w, team) <= threshold;
}

bool is_hoe(std::string_view item) {
  return item == "hoe" || (item.size() > 4 && item.substr(item.size() - 4) == "_hoe");
}

world::WorldRules world_rules_for(const ScenarioConfig& config) {
  world::WorldRules rules;
  for (const auto& c : config.crops) rules.crop_max_stage[c.block] = c.max_stage;
  rules.crop_advance = config.crop_advance;
  rules.smelt_ticks = config.costs.smelt_per_item;
  return rules;
}

Game::Game(ScenarioConfig config, std::uint64_t seed)
    : config_(std::move(config)), world_(config_.layout, seed, world_rules_for(config_)) {
  red_.team = Team::Red;
  blue_.team = Team::Blue;
  world_.set_timer_hook([this](world::World& w, const ScheduledEvent& ev, std::vector<world::Event>&) {
    if (ev.effect == TimerEffect::RegrowBlock && w.in_bounds(ev.cell)) {
      const Team owner = w.cell(ev.cell).owner_area;
      if (owner != Team::Neutral) reconcile_mushrooms(owner);
    }
  });
}

TeamScore& Game::score(Team team) { return team == Team::Blue ? blue_ : red_; }
const TeamScore& Game::score(Team team) const { return team == Team::Blue ? blue_ : red_; }

bool Game::is_mushroom_item(std::string_view item) const {
  for (const auto& [_, rule] : config_.blocks) {
    if (!rule.mushroom) continue;
    for (const auto& d : rule.drops) {
      if (d.item == item) return true;
    }
  }
  return false;
}

void Game::record(Team team, std::string_view agent, std::string_view item, int count, int points, std::string source) {
  if (points <= 0) return;
  auto& s = score(team);
  s.timeline.emplace_back(world_.tick(), s.points);
  audit_.push_back(ScoreEvent{world_.tick(), team, std::string(agent), std::string(item), count, points, std::move(source)});
}

void Game::on_block_removed(const Position& cell) {
  const auto& c = world_.cell(cell);
  auto rule = config_.blocks.find(c.home_kind);
  if (rule != config_.blocks.end() && rule->second.regrow && !rule->second.mushroom && c.kind == world::kAir) {
    ScheduledEvent target;
    target.cell = cell;
    target.kind = c.home_kind;
    world_.schedule(TimerEffect::RegrowBlock, target, *rule->second.regrow);
  }
  if (c.owner_area != Team::Neutral) reconcile_mushrooms(c.owner_area);
}

void Game::reconcile_mushrooms(Team team) {
  const auto* area = world_.layout().area(team);
  if (!area) return;
  const bool eligible = mushroom_regrow_eligible(world_, team, config_.mushroom_threshold);
  if (!eligible) {
    world_.cancel_if([&](const ScheduledEvent& ev) {
      if (ev.effect != TimerEffect::RegrowBlock || !area->contains(ev.cell)) return false;
      auto rule = config_.blocks.find(ev.kind);
      return rule != config_.blocks.end() && rule->second.mushroom;
    });
    return;
  }
  for (int z = area->z0; z <= area->z1; ++z) {
    for (int x = area->x0; x <= area->x1; ++x) {
      const Position p{x, 0, z};
      const auto& c = world_.cell(p);
      auto rule = config_.blocks.find(c.home_kind);
      if (rule == config_.blocks.end() || !rule->second.mushroom || !rule->second.regrow) continue;
      if (c.kind != world::kAir || world_.has_timer(TimerEffect::RegrowBlock, p)) continue;
      ScheduledEvent target;
      target.cell = p;
      target.kind = c.home_kind;
      world_.schedule(TimerEffect::RegrowBlock, target, *rule->second.regrow);
    }
  }
}

bool Game::mushroom_timer_invariant_holds() const {
  for (Team team : {Team::Red, Team::Blue}) {
    if (mushroom_regrow_eligible(world_, team, config_.mushroom_threshold)) continue;
    const auto* area = world_.layout().area(team);
    for (const auto& ev : world_.timers()) {
      if (ev.effect != TimerEffect::RegrowBlock || !area->contains(ev.cell)) continue;
      auto rule = config_.blocks.find(ev.kind);
      if (rule != config_.blocks.end() && rule->second.mushroom) return false;
    }
  }
  return true;
}

void Game::drop_on_ground(std::string_view item, int count, const Position& at) {
  if (count <= 0) return;
  world_.ground_items().push_back(world::GroundItem{std::string(item), count, at, world_.layout().area_of(at)});
}

int Game::score_mushroom(Team collector, std::string_view agent, Team origin, int count) {
  if (count <= 0 || collector != origin || collector == Team::Neutral) return 0;
  score(collector).points += count;
  record(collector, agent, "red_mushroom", count, count, "mushroom");
  return count;
}

int Game::hand_in(std::string_view agent, std::string_view server, std::string_view item, int count) {
  const auto* srv = world_.find_agent(server);
  const auto* giver = world_.find_agent(agent);
  if (!srv || !srv->is_server || !giver || srv->team != giver->team) return 0;
  const int points = score_hand_in(score(srv->team), item, count, config_.points, config_.max_food_types);
  record(srv->team, agent, item, count, points, "hand-in");
  return points;
}

void Game::start_crop_growth(const Position& cell) {
  const auto& c = world_.cell(cell);
  if (!world_.is_crop(c.kind) || c.growth_stage >= world_.crop_max_stage(c.kind)) return;
  if (world_.has_timer(TimerEffect::CropAdvance, cell)) return;
  ScheduledEvent target;
  target.cell = cell;
  target.kind = c.kind;
  world_.schedule(TimerEffect::CropAdvance, target, config_.crop_advance);
}

std::vector<Position> Game::convertible_cells(const CropSpec& source, Team agent_team) const {
  std::vector<Position> out;
  for (int z = 0; z < world_.depth(); ++z) {
    for (int x = 0; x < world_.width(); ++x) {
      const Position p{x, 0, z};
      const auto& c = world_.cell(p);
      if (c.kind == source.block && c.owner_area != agent_team) out.push_back(p);
    }
  }
  return out;
}

std::string Game::convert_cell(const Position& cell, const CropSpec& target, const AgentBody& agent) {
  const auto& c = world_.cell(cell);
  const auto* source = config_.crop_by_block(c.kind);
  if (!source) return "No crop to convert at " + world::to_string(cell);
  if (target.needs_farmland && !source->needs_farmland) {
    const bool has_hoe = std::any_of(agent.inventory.stacks().begin(), agent.inventory.stacks().end(),
                                     [](const auto& kv) { return is_hoe(kv.first); });
    if (!has_hoe) return "I need a hoe to till the soil for " + target.block;
  }
  auto& rng = world_.rng();
  if (c.growth_stage >= source->max_stage) {
    for (const auto& d : source->harvest_drops) drop_on_ground(d.item, roll(rng, d), cell);
  } else {
    drop_on_ground(source->seed, 1, cell);
  }
  world_.set_block(cell, target.block, 0);
  start_crop_growth(cell);
  return {};
}

TransformResult Game::sabotage_transform(std::string_view source, std::string_view target, std::string_view agent) {
  const auto* src = config_.resolve_crop(source);
  const auto* dst = config_.resolve_crop(target);
  const auto& body = world_.agent(agent);
  if (!src) return {0, "Unknown crop " + std::string(source)};
  if (!dst) return {0, "Unknown crop " + std::string(target)};
  const auto cells = convertible_cells(*src, body.team);
  if (cells.empty()) return {0, "No " + src->block + " to convert"};
  TransformResult result;
  for (const auto& p : cells) {
    auto err = convert_cell(p, *dst, body);
    if (!err.empty()) {
      result.error = err;
      break;
    }
    ++result.converted;
  }
  return result;
}

void Game::resolve_pickups() {
  auto& items = world_.ground_items();
  if (items.empty()) return;
  std::vector<world::GroundItem> left;
  for (auto& g : items) {
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> closest;
    const auto& agents = world_.agents();
    for (std::size_t i = 0; i < agents.size(); ++i) {
      if (agents[i].is_server || world::chebyshev(agents[i].position, g.position) > 1) continue;
      const double d = world::euclidean(agents[i].position, g.position);
      if (d < best) {
        best = d;
        closest.assign(1, i);
      } else if (d == best) {
        closest.push_back(i);
      }
    }
    if (closest.empty()) {
      left.push_back(std::move(g));
      continue;
    }
    const auto pick = closest.size() == 1 ? closest.front()
                                          : closest[static_cast<std::size_t>(
                                                world_.rng().uniform_int(0, static_cast<std::int64_t>(closest.size()) - 1))];
    auto& who = world_.agents()[pick];
    who.inventory.add(g.item, g.count);
    if (config_.scoring == ScoringMode::Mushroom && is_mushroom_item(g.item)) {
      score_mushroom(who.team, who.name, g.origin_area, g.count);
    }
  }
  items = std::move(left);
}

void Game::end_tick() {
  resolve_pickups();
  for (const auto& p : world_.drain_dirty()) {
    const auto& c = world_.cell(p);
    if (world_.is_crop(c.kind)) start_crop_growth(p);
  }
  if (config_.scoring == ScoringMode::Mushroom) {
    reconcile_mushrooms(Team::Red);
    reconcile_mushrooms(Team::Blue);
  }
}

std::vector<world::Event> Game::advance() { return world_.step_tick(); }

}  // namespace teamcraft::scenarios
