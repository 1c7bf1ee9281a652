#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "teamcraft/actionlang/runtime.hpp"
#include "teamcraft/scenarios/config.hpp"
#include "teamcraft/scenarios/game.hpp"

using namespace teamcraft;
using scenarios::Game;
using world::Position;
using world::Team;
using world::TimerEffect;

namespace {

std::vector<Position> cells_of(const world::World& w, Team team, std::string_view kind) {
  std::vector<Position> out;
  for (int z = 0; z < w.depth(); ++z) {
    for (int x = 0; x < w.width(); ++x) {
      const Position p{x, 0, z};
      if (w.cell(p).owner_area == team && w.cell(p).kind == kind) out.push_back(p);
    }
  }
  return out;
}

void remove_block(Game& g, const Position& p) {
  g.world().set_block(p, std::string(world::kAir));
  g.on_block_removed(p);
}

int mushroom_timers(const Game& g, Team team) {
  const auto* area = g.world().layout().area(team);
  int n = 0;
  for (const auto& ev : g.world().timers()) {
    if (ev.effect == TimerEffect::RegrowBlock && area->contains(ev.cell) && ev.kind == "red_mushroom_block") ++n;
  }
  return n;
}

int slime_timers(const Game& g, Team team) {
  const auto* area = g.world().layout().area(team);
  int n = 0;
  for (const auto& ev : g.world().timers()) {
    if (ev.effect == TimerEffect::RegrowBlock && area->contains(ev.cell) && ev.kind == "slime_block") ++n;
  }
  return n;
}

}  // namespace

TEST(Config, DefaultsMatchScenarioTables) {
  const auto mw = scenarios::load_scenario("mushroom_war");
  const auto dd = scenarios::load_scenario("dash_and_dine");
  EXPECT_EQ(mw.duration_ticks, 2400);
  EXPECT_EQ(mw.wait_ticks, 80);
  EXPECT_DOUBLE_EQ(mw.report_scale, 1.0);
  EXPECT_DOUBLE_EQ(dd.report_scale, 0.1);
  for (const char* p : {"craftItem", "farm", "smeltItem", "useChest"}) {
    EXPECT_FALSE(mw.primitive_available(p)) << p;
    EXPECT_TRUE(dd.primitive_available(p)) << p;
  }
  EXPECT_GT(dd.points.at("pumpkin_pie"), dd.points.at("sweet_berries"));
  for (const auto& [item, pts] : dd.points) EXPECT_GE(pts, 1) << item;
  for (const auto& [name, r] : dd.recipes) {
    EXPECT_FALSE(r.inputs.empty()) << name;
    if (r.needs_furnace) {
      EXPECT_EQ(r.inputs.size(), 1U) << name;
    }
  }
}

TEST(Config, OverridesAreMergedAndValidated) {
  const auto cfg = scenarios::load_scenario("dash_and_dine", {{"points", {{"cookie", 3}}}, {"duration_ticks", 600}});
  EXPECT_EQ(cfg.points.at("cookie"), 3);
  EXPECT_EQ(cfg.duration_ticks, 600);
  EXPECT_THROW(scenarios::load_scenario("dash_and_dine", {{"report_scale", 0}}), scenarios::ConfigError);
  EXPECT_THROW(scenarios::load_scenario("dash_and_dine", {{"duration_ticks", 0}}), scenarios::ConfigError);
  EXPECT_THROW(scenarios::load_scenario("no_such_scenario"), std::exception);
}

TEST(RegrowEligibility, SevenEightZero) {
  Game g(scenarios::load_scenario("mushroom_war"), 1);
  auto slime = cells_of(g.world(), Team::Red, "slime_block");
  ASSERT_EQ(slime.size(), 12U);
  for (int i = 0; i < 4; ++i) g.world().set_block(slime[static_cast<std::size_t>(i)], std::string(world::kAir));
  EXPECT_EQ(scenarios::counted_slime(g.world(), Team::Red), 8);
  EXPECT_FALSE(scenarios::mushroom_regrow_eligible(g.world(), Team::Red));
  g.world().set_block(slime[4], std::string(world::kAir));
  EXPECT_TRUE(scenarios::mushroom_regrow_eligible(g.world(), Team::Red));
  for (const auto& p : slime) g.world().set_block(p, std::string(world::kAir));
  EXPECT_TRUE(scenarios::mushroom_regrow_eligible(g.world(), Team::Red));
}

TEST(RegrowEligibility, OnlyOpponentPlacedSlimeCounts) {
  Game g(scenarios::load_scenario("mushroom_war"), 1);
  auto slime = cells_of(g.world(), Team::Red, "slime_block");
  for (std::size_t i = 0; i < 5; ++i) g.world().set_block(slime[i], std::string(world::kAir));
  ASSERT_EQ(scenarios::counted_slime(g.world(), Team::Red), 7);
  g.world().set_block({4, 0, 8}, "slime_block", 0, Team::Red);
  EXPECT_EQ(scenarios::counted_slime(g.world(), Team::Red), 7);
  g.world().set_block({3, 0, 8}, "slime_block", 0, Team::Blue);
  EXPECT_EQ(scenarios::counted_slime(g.world(), Team::Red), 8);
}

// Oracle for the eligibility transition: once the eighth slime goes, every
// missing mushroom cell gets exactly one regrow timer.
TEST(OnBlockRemoved, EligibilityTransitionSchedulesAllMissingMushrooms) {
  Game g(scenarios::load_scenario("mushroom_war"), 5);
  auto slime = cells_of(g.world(), Team::Red, "slime_block");
  auto mush = cells_of(g.world(), Team::Red, "red_mushroom_block");
  for (std::size_t i = 0; i < 4; ++i) remove_block(g, slime[i]);
  EXPECT_EQ(slime_timers(g, Team::Red), 4);
  for (std::size_t i = 0; i < 5; ++i) remove_block(g, mush[i]);
  EXPECT_EQ(mushroom_timers(g, Team::Red), 0);

  remove_block(g, slime[4]);
  EXPECT_EQ(slime_timers(g, Team::Red), 5);
  EXPECT_EQ(mushroom_timers(g, Team::Red), 5);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_TRUE(g.world().has_timer(TimerEffect::RegrowBlock, mush[i]));

  remove_block(g, slime[5]);
  EXPECT_EQ(slime_timers(g, Team::Red), 6);
  EXPECT_EQ(mushroom_timers(g, Team::Red), 5);
  EXPECT_TRUE(g.mushroom_timer_invariant_holds());
}

TEST(OnBlockRemoved, MushroomWithNineSlimeGetsNoTimer) {
  Game g(scenarios::load_scenario("mushroom_war"), 5);
  auto slime = cells_of(g.world(), Team::Red, "slime_block");
  auto mush = cells_of(g.world(), Team::Red, "red_mushroom_block");
  for (std::size_t i = 0; i < 3; ++i) g.world().set_block(slime[i], std::string(world::kAir));
  remove_block(g, mush[0]);
  EXPECT_EQ(mushroom_timers(g, Team::Red), 0);
}

TEST(OnBlockRemoved, SlimeRegrowthCancelsMushroomTimers) {
  Game g(scenarios::load_scenario("mushroom_war"), 5);
  auto slime = cells_of(g.world(), Team::Red, "slime_block");
  auto mush = cells_of(g.world(), Team::Red, "red_mushroom_block");
  remove_block(g, mush[0]);
  for (std::size_t i = 0; i < 5; ++i) remove_block(g, slime[i]);
  ASSERT_EQ(mushroom_timers(g, Team::Red), 1);
  g.world().set_block(slime[0], "slime_block");
  g.reconcile_mushrooms(Team::Red);
  EXPECT_EQ(mushroom_timers(g, Team::Red), 0);
  EXPECT_TRUE(g.mushroom_timer_invariant_holds());
}

TEST(MushroomYield, MeanAndSupport) {
  world::Rng rng(2025);
  constexpr int kDraws = 10000;
  long sum = 0;
  std::set<int> seen;
  for (int i = 0; i < kDraws; ++i) {
    const int y = scenarios::mushroom_yield(rng);
    ASSERT_GE(y, 0);
    ASSERT_LE(y, 2);
    seen.insert(y);
    sum += y;
  }
  EXPECT_NEAR(static_cast<double>(sum) / kDraws, 1.0, 0.05);
  EXPECT_EQ(seen.size(), 3U);
}

TEST(MushroomYield, SameSeedSameSequence) {
  world::Rng a(9);
  world::Rng b(9);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(scenarios::mushroom_yield(a), scenarios::mushroom_yield(b));
}

TEST(ScoreMushroom, OwnAreaOnly) {
  Game g(scenarios::load_scenario("mushroom_war"), 1);
  EXPECT_EQ(g.score_mushroom(Team::Red, "Ryn", Team::Red, 2), 2);
  EXPECT_EQ(g.score_mushroom(Team::Red, "Ryn", Team::Blue, 2), 0);
  EXPECT_EQ(g.score_mushroom(Team::Red, "Ryn", Team::Red, 0), 0);
  EXPECT_EQ(g.score(Team::Red).points, 2);
  EXPECT_EQ(g.score(Team::Blue).points, 0);
  ASSERT_EQ(g.audit().size(), 1U);
  EXPECT_EQ(g.audit()[0].points, 2);
}

TEST(ScoreMushroom, GroundPickupFromOpponentAreaKeepsItemsButScoresNothing) {
  Game g(scenarios::load_scenario("mushroom_war"), 1);
  auto& ryn = g.world().agent("Ryn");
  ryn.position = {24, 0, 4};
  g.drop_on_ground("red_mushroom", 2, {24, 0, 4});
  g.end_tick();
  EXPECT_EQ(ryn.inventory.count("red_mushroom"), 2);
  EXPECT_EQ(g.score(Team::Red).points, 0);
}

TEST(ScoreHandIn, UniqueThreeRule) {
  const auto dd = scenarios::load_scenario("dash_and_dine");
  scenarios::TeamScore s;
  EXPECT_EQ(scenarios::score_hand_in(s, "pumpkin_pie", 2, dd.points), 20);
  EXPECT_EQ(scenarios::score_hand_in(s, "bread", 1, dd.points), 6);
  EXPECT_EQ(scenarios::score_hand_in(s, "sweet_berries", 3, dd.points), 3);
  EXPECT_EQ(scenarios::score_hand_in(s, "cake", 1, dd.points), 0);
  EXPECT_EQ(scenarios::score_hand_in(s, "bread", 2, dd.points), 12);
  EXPECT_EQ(scenarios::score_hand_in(s, "dirt", 5, dd.points), 0);
  EXPECT_EQ(s.points, 41);
  EXPECT_EQ(s.submitted_types, (std::vector<std::string>{"pumpkin_pie", "bread", "sweet_berries"}));
}

// Rule oracle over random hand-in sequences.
TEST(ScoreHandIn, MatchesRuleOracle) {
  const auto dd = scenarios::load_scenario("dash_and_dine");
  std::vector<std::string> items;
  for (const auto& [k, _] : dd.points) items.push_back(k);
  items.push_back("dirt");
  world::Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    scenarios::TeamScore s;
    std::vector<std::string> locked;
    int expected = 0;
    for (int i = 0; i < 12; ++i) {
      const auto& item = items[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(items.size()) - 1))];
      const int count = static_cast<int>(rng.uniform_int(1, 4));
      int award = 0;
      if (dd.points.count(item)) {
        const bool known = std::find(locked.begin(), locked.end(), item) != locked.end();
        if (known || locked.size() < 3) {
          if (!known) locked.push_back(item);
          award = count * dd.points.at(item);
        }
      }
      expected += award;
      ASSERT_EQ(scenarios::score_hand_in(s, item, count, dd.points), award);
      ASSERT_LE(s.submitted_types.size(), 3U);
    }
    EXPECT_EQ(s.points, expected);
  }
}

TEST(HandIn, OnlyOwnServerAwards) {
  Game g(scenarios::load_scenario("dash_and_dine"), 1);
  EXPECT_EQ(g.hand_in("Ryn", "Red_Server", "bread", 1), 6);
  EXPECT_EQ(g.hand_in("Ryn", "Blue_Server", "bread", 1), 0);
  EXPECT_EQ(g.hand_in("Ryn", "Raze", "bread", 1), 0);
  EXPECT_EQ(g.score(Team::Red).points, 6);
  EXPECT_EQ(g.score(Team::Red).timeline.back(), (std::pair<world::Tick, int>{0, 6}));
}

TEST(Recipes, LookupExamples) {
  const auto dd = scenarios::load_scenario("dash_and_dine");
  const auto* pie = scenarios::recipe_lookup(dd.recipes, "pumpkin_pie");
  ASSERT_NE(pie, nullptr);
  EXPECT_EQ(pie->inputs, (std::map<std::string, int>{{"pumpkin", 1}, {"sugar", 1}, {"egg", 1}}));
  const auto* cake = scenarios::recipe_lookup(dd.recipes, "cake");
  ASSERT_NE(cake, nullptr);
  for (const char* in : {"milk_bucket", "sugar", "wheat", "egg"}) EXPECT_TRUE(cake->inputs.count(in)) << in;
  EXPECT_GT(cake->returns.at("bucket"), 0);
  const auto* soup = scenarios::recipe_lookup(dd.recipes, "beetroot_soup");
  ASSERT_NE(soup, nullptr);
  EXPECT_TRUE(soup->inputs.count("beetroot"));
  EXPECT_TRUE(soup->inputs.count("bowl"));
  EXPECT_EQ(soup->inputs.size(), 2U);
  EXPECT_EQ(scenarios::recipe_lookup(dd.recipes, "diamond_sword"), nullptr);
  const auto* sugar = scenarios::recipe_lookup(dd.recipes, "sugar");
  ASSERT_NE(sugar, nullptr);
  EXPECT_EQ(sugar->inputs, (std::map<std::string, int>{{"sugar_cane", 1}}));
}

TEST(Sabotage, PotatoesBecomeBerryBushes) {
  Game g(scenarios::load_scenario("dash_and_dine"), 3);
  const auto before = cells_of(g.world(), Team::Neutral, "potatoes");
  ASSERT_FALSE(before.empty());
  const auto r = g.sabotage_transform("potato", "sweet_berry_bush", "Byte");
  ASSERT_TRUE(r.ok()) << r.error;
  EXPECT_EQ(r.converted, static_cast<int>(before.size()));
  for (const auto& p : before) {
    EXPECT_EQ(g.world().cell(p).kind, "sweet_berry_bush");
    EXPECT_EQ(g.world().cell(p).growth_stage, 0);
  }
  EXPECT_FALSE(g.world().ground_items().empty());
}

TEST(Sabotage, BerryToPotatoNeedsHoe) {
  Game g(scenarios::load_scenario("dash_and_dine"), 3);
  const auto bushes = cells_of(g.world(), Team::Neutral, "sweet_berry_bush");
  auto r = g.sabotage_transform("sweet_berry_bush", "potatoes", "Ryn");
  EXPECT_FALSE(r.ok());
  EXPECT_NE(r.error.find("hoe"), std::string::npos);
  EXPECT_EQ(g.world().cell(bushes.front()).kind, "sweet_berry_bush");
  g.world().agent("Ryn").inventory.add("wooden_hoe", 1);
  r = g.sabotage_transform("sweet_berry_bush", "potatoes", "Ryn");
  ASSERT_TRUE(r.ok()) << r.error;
  EXPECT_EQ(r.converted, static_cast<int>(bushes.size()));
}

TEST(Sabotage, MelonStemsBecomeBeetroots) {
  Game g(scenarios::load_scenario("dash_and_dine"), 3);
  const auto stems = cells_of(g.world(), Team::Neutral, "melon_stem");
  const auto r = g.sabotage_transform("melon_stem", "beetroots", "Ryn");
  ASSERT_TRUE(r.ok()) << r.error;
  EXPECT_EQ(r.converted, static_cast<int>(stems.size()));
  for (const auto& p : stems) EXPECT_EQ(g.world().cell(p).kind, "beetroots");
}

TEST(Sabotage, NoSourceCellsIsFeedback) {
  Game g(scenarios::load_scenario("dash_and_dine"), 3);
  ASSERT_TRUE(g.sabotage_transform("potatoes", "beetroots", "Ryn").ok());
  const auto r = g.sabotage_transform("potatoes", "beetroots", "Ryn");
  EXPECT_FALSE(r.ok());
  EXPECT_EQ(r.converted, 0);
}

TEST(Smelting, EachItemCompletesTwoHundredTicksAfterItsPredecessor) {
  Game g(scenarios::load_scenario("dash_and_dine"), 1);
  auto& ryn = g.world().agent("Ryn");
  ryn.position = {16, 0, 13};
  ryn.inventory.add("potato", 2);
  const auto end = actionlang::execute_blocking(g, "Ryn", R"(smeltItem("potato", "coal", 2);)");
  ASSERT_FALSE(end.error) << end.message;
  const world::Furnace* used = nullptr;
  for (const auto& f : g.world().furnaces()) {
    if (f.remaining > 0) used = &f;
  }
  ASSERT_NE(used, nullptr);
  const auto queued = used->queued_at;
  std::vector<world::Tick> done;
  while (g.world().tick() < queued + 450) {
    const auto before = ryn.inventory.count("baked_potato");
    g.end_tick();
    g.advance();
    if (ryn.inventory.count("baked_potato") > before) done.push_back(g.world().tick());
  }
  EXPECT_EQ(done, (std::vector<world::Tick>{queued + 200, queued + 400}));
  EXPECT_EQ(ryn.inventory.count("potato"), 0);
}

TEST(Smelting, AllFurnacesBusyIsFeedback) {
  Game g(scenarios::load_scenario("dash_and_dine"), 1);
  for (auto& f : g.world().furnaces()) {
    f.remaining = 1;
    f.owner = "Byte";
    f.output = "baked_potato";
  }
  auto& ryn = g.world().agent("Ryn");
  ryn.position = {16, 0, 13};
  ryn.inventory.add("potato", 1);
  const auto end = actionlang::execute_blocking(g, "Ryn", R"(smeltItem("potato", "coal", 1);)");
  EXPECT_TRUE(end.error);
  EXPECT_EQ(end.message, "furnaces busy");
}

TEST(Timeline, NonDecreasingAndEndsAtPoints) {
  Game g(scenarios::load_scenario("dash_and_dine"), 1);
  world::Rng rng(17);
  const std::vector<std::string> foods{"bread", "cake", "cookie", "sweet_berries", "pumpkin_pie"};
  for (int i = 0; i < 50; ++i) {
    g.hand_in("Ryn", "Red_Server", foods[static_cast<std::size_t>(rng.uniform_int(0, 4))],
              static_cast<int>(rng.uniform_int(1, 3)));
    g.end_tick();
    g.advance();
  }
  const auto& s = g.score(Team::Red);
  for (std::size_t i = 1; i < s.timeline.size(); ++i) {
    EXPECT_GE(s.timeline[i].first, s.timeline[i - 1].first);
    EXPECT_GE(s.timeline[i].second, s.timeline[i - 1].second);
  }
  EXPECT_EQ(s.timeline.back().second, s.points);
  int audited = 0;
  for (const auto& e : g.audit()) audited += e.points;
  EXPECT_EQ(audited, s.points);
}
