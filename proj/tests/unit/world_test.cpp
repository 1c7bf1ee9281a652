#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "teamcraft/world/layout.hpp"
#include "teamcraft/world/world.hpp"

using namespace teamcraft::world;

namespace {

nlohmann::json tiny_layout_doc() {
  return nlohmann::json::parse(R"({
    "schema_version": 1,
    "name": "tiny",
    "width": 10,
    "depth": 4,
    "legend": {".": "air", "S": "slime_block", "M": "red_mushroom_block", "C": "chest"},
    "rows": ["SS...M...C",
             "..........",
             "..........",
             "M........."],
    "areas": [{"team": "red", "x0": 0, "z0": 0, "x1": 4, "z1": 3},
              {"team": "blue", "x0": 5, "z0": 0, "x1": 9, "z1": 3}],
    "agents": [{"name": "A", "team": "red", "x": 1, "z": 1},
               {"name": "B", "team": "blue", "x": 8, "z": 1}],
    "mobs": [{"kind": "pig", "x": 7, "z": 3}]
  })");
}

Layout tiny_layout() { return parse_layout(tiny_layout_doc().dump()); }

ScheduledEvent cell_target(Position p, std::string kind = "slime_block") {
  ScheduledEvent t;
  t.cell = p;
  t.kind = std::move(kind);
  return t;
}

int count_kind(const World& w, Team team, std::string_view kind) {
  int n = 0;
  for (int z = 0; z < w.depth(); ++z) {
    for (int x = 0; x < w.width(); ++x) {
      const Position p{x, 0, z};
      if (w.layout().area_of(p) == team && w.cell(p).kind == kind) ++n;
    }
  }
  return n;
}

}  // namespace

TEST(NewWorld, MushroomWarAreasHoldTwelveOfEach) {
  const World w(load_layout_asset("layouts/mushroom_war.json"), 7);
  for (Team t : {Team::Red, Team::Blue}) {
    EXPECT_EQ(count_kind(w, t, "slime_block"), 12);
    EXPECT_EQ(count_kind(w, t, "red_mushroom_block"), 12);
  }
  EXPECT_EQ(w.tick(), 0);
  EXPECT_TRUE(w.chat_log().empty());
  for (const auto& spawn : w.layout().agents) EXPECT_EQ(w.agent(spawn.name).position, spawn.position);
}

TEST(NewWorld, SameSeedGivesIdenticalState) {
  const auto layout = load_layout_asset("layouts/dash_and_dine.json");
  const World a(layout, 42);
  const World b(layout, 42);
  EXPECT_EQ(a.to_json(), b.to_json());
  EXPECT_EQ(a.hash(), b.hash());
}

TEST(NewWorld, AgentOutOfBoundsIsLayoutError) {
  auto doc = tiny_layout_doc();
  doc["agents"][1]["x"] = 10;
  try {
    parse_layout(doc.dump());
    FAIL() << "expected LayoutError";
  } catch (const LayoutError& e) {
    ASSERT_TRUE(e.cell().has_value());
    EXPECT_EQ(*e.cell(), (Position{10, 0, 1}));
  }
}

TEST(NewWorld, OverlappingAreasAndMissingTeamAreRejected) {
  auto overlap = tiny_layout_doc();
  overlap["areas"][1]["x0"] = 4;
  EXPECT_THROW(parse_layout(overlap.dump()), LayoutError);

  auto one_team = tiny_layout_doc();
  one_team["areas"].erase(1);
  EXPECT_THROW(parse_layout(one_team.dump()), LayoutError);

  auto no_version = tiny_layout_doc();
  no_version.erase("schema_version");
  EXPECT_THROW(parse_layout(no_version.dump()), LayoutError);

  auto bad_char = tiny_layout_doc();
  bad_char["rows"][2] = "....?.....";
  try {
    parse_layout(bad_char.dump());
    FAIL();
  } catch (const LayoutError& e) {
    ASSERT_TRUE(e.cell());
    EXPECT_EQ(*e.cell(), (Position{4, 0, 2}));
  }
}

TEST(StepTick, DueRegrowTimerRestoresBlock) {
  World w(tiny_layout(), 1);
  const Position c{0, 0, 0};
  w.set_block(c, std::string(kAir));
  for (int i = 0; i < 99; ++i) w.step_tick();
  w.schedule_at(TimerEffect::RegrowBlock, cell_target(c), 100);
  EXPECT_EQ(w.cell(c).kind, kAir);
  w.step_tick();
  EXPECT_EQ(w.tick(), 100);
  EXPECT_EQ(w.cell(c).kind, "slime_block");
}

TEST(StepTick, NoTimersOnlyAdvancesClock) {
  World w(tiny_layout(), 1);
  auto before = w.to_json();
  w.step_tick();
  auto after = w.to_json();
  EXPECT_EQ(w.tick(), 1);
  before.erase("tick");
  after.erase("tick");
  EXPECT_EQ(before, after);
}

// Naive oracle: every tick, scan all pending timers and apply the due ones
// sorted by insertion sequence.
TEST(StepTick, MatchesNaiveRescanOracle) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    World w(tiny_layout(), seed);
    Rng pick(seed ^ 0xabcdefULL);
    std::vector<Position> cells;
    for (int x = 0; x < 9; ++x) cells.push_back({x, 0, 2});
    struct Pending {
      Tick fire;
      std::uint64_t order;
      Position cell;
      std::string kind;
    };
    std::vector<Pending> oracle;
    std::uint64_t order = 0;
    for (int i = 0; i < 60; ++i) {
      const auto cell = cells[static_cast<std::size_t>(pick.uniform_int(0, 8))];
      const std::string kind = pick.uniform_int(0, 1) ? "slime_block" : "red_mushroom_block";
      const Tick fire = pick.uniform_int(1, 30);
      w.schedule_at(TimerEffect::RegrowBlock, cell_target(cell, kind), fire);
      oracle.push_back({fire, order++, cell, kind});
    }
    std::map<Position, std::string> expected;
    for (const auto& c : cells) expected[c] = std::string(kAir);
    for (Tick t = 1; t <= 30; ++t) {
      // Clear row 2 so every timer of this tick finds air only if no earlier
      // timer of the same tick filled it.
      std::vector<Pending> due;
      for (const auto& p : oracle) {
        if (p.fire == t) due.push_back(p);
      }
      std::sort(due.begin(), due.end(), [](const auto& a, const auto& b) { return a.order < b.order; });
      for (const auto& p : due) {
        if (expected[p.cell] == kAir) expected[p.cell] = p.kind;
      }
      w.step_tick();
      for (const auto& c : cells) ASSERT_EQ(w.cell(c).kind, expected[c]) << "seed " << seed << " tick " << t;
      for (const auto& c : cells) {
        w.set_block(c, std::string(kAir));
        expected[c] = std::string(kAir);
      }
    }
    EXPECT_EQ(w.timer_count(), 0U);
  }
}

TEST(StepTick, SameTickTimersApplyInInsertionOrder) {
  World w(tiny_layout(), 3);
  const Position c{3, 0, 2};
  w.schedule_at(TimerEffect::RegrowBlock, cell_target(c, "red_mushroom_block"), 5);
  w.schedule_at(TimerEffect::RegrowBlock, cell_target(c, "slime_block"), 5);
  for (int i = 0; i < 5; ++i) w.step_tick();
  EXPECT_EQ(w.cell(c).kind, "red_mushroom_block");
}

TEST(Schedule, UniformDelayStaysInBoundsAndIsUniform) {
  World w(tiny_layout(), 11);
  const UniformDelay dist{40, 120};
  constexpr int kDraws = 10000;
  std::vector<int> hist(81, 0);
  for (int i = 0; i < kDraws; ++i) {
    const auto h = w.schedule(TimerEffect::RegrowBlock, cell_target({2, 0, 2}), dist);
    ASSERT_GE(h.fire_tick, w.tick() + 40);
    ASSERT_LE(h.fire_tick, w.tick() + 120);
    ++hist[static_cast<std::size_t>(h.fire_tick - w.tick() - 40)];
  }
  const double expected = kDraws / 81.0;
  double chi2 = 0.0;
  for (int n : hist) chi2 += (n - expected) * (n - expected) / expected;
  // 80 degrees of freedom; the 0.999 quantile is about 124.8.
  EXPECT_LT(chi2, 124.8);
}

TEST(Schedule, DegenerateDistributionIsExact) {
  World w(tiny_layout(), 5);
  for (int i = 0; i < 17; ++i) w.step_tick();
  const auto h = w.schedule(TimerEffect::RegrowBlock, cell_target({2, 0, 2}), UniformDelay{9, 9});
  EXPECT_EQ(h.fire_tick, 26);
}

TEST(Schedule, SameSeedSameFireTicks) {
  World a(tiny_layout(), 99);
  World b(tiny_layout(), 99);
  for (int i = 0; i < 100; ++i) {
    const auto ha = a.schedule(TimerEffect::RegrowBlock, cell_target({2, 0, 2}), UniformDelay{1, 500});
    const auto hb = b.schedule(TimerEffect::RegrowBlock, cell_target({2, 0, 2}), UniformDelay{1, 500});
    EXPECT_EQ(ha, hb);
  }
}

TEST(Schedule, InvalidTargetIsReferenceError) {
  World w(tiny_layout(), 1);
  EXPECT_THROW(w.schedule(TimerEffect::RegrowBlock, cell_target({50, 0, 0}), UniformDelay{1, 2}), ReferenceError);
  ScheduledEvent furnace;
  furnace.index = 3;
  EXPECT_THROW(w.schedule(TimerEffect::SmeltComplete, furnace, UniformDelay{1, 2}), ReferenceError);
  ScheduledEvent mob;
  mob.index = 7;
  EXPECT_THROW(w.schedule(TimerEffect::MobRespawn, mob, UniformDelay{1, 2}), ReferenceError);
}

TEST(Schedule, NeverFiresBeforeCreationPlusOne) {
  World w(tiny_layout(), 8);
  Rng r(8);
  for (int t = 0; t < 200; ++t) {
    if (r.uniform_int(0, 2) == 0) {
      w.schedule(TimerEffect::RegrowBlock, cell_target({static_cast<int>(r.uniform_int(0, 8)), 0, 2}),
                 GeometricDelay{0.3});
    }
    for (const auto& ev : w.timers()) ASSERT_GE(ev.fire_tick, ev.created_tick + 1);
    w.step_tick();
  }
}

TEST(Observe, AdjacentSlimeBlocksAreListed) {
  const World w(tiny_layout(), 1);
  const auto obs = w.observe("A", 8);
  int slime = 0;
  for (const auto& b : obs.nearby_blocks) {
    if (b.kind == "slime_block") {
      ++slime;
      EXPECT_TRUE(b.position == (Position{0, 0, 0}) || b.position == (Position{1, 0, 0}));
    }
  }
  EXPECT_EQ(slime, 2);
}

TEST(Observe, NoMobsInRadiusGivesEmptyList) {
  const World w(tiny_layout(), 1);
  EXPECT_TRUE(w.observe("A", 2).nearby_mobs.empty());
  const auto far = w.observe("B", 8);
  ASSERT_EQ(far.nearby_mobs.size(), 1U);
  EXPECT_GE(far.nearby_mobs[0].distance, 0.0);
}

TEST(Observe, ElapsedSecondsAtTick600) {
  World w(tiny_layout(), 1);
  for (int i = 0; i < 600; ++i) w.step_tick();
  EXPECT_DOUBLE_EQ(w.observe("A", 8).self_status.elapsed_seconds, 30.0);
}

TEST(Observe, UnknownAgentThrows) {
  const World w(tiny_layout(), 1);
  EXPECT_THROW(w.observe("nobody", 8), ReferenceError);
}

TEST(Observe, DoesNotMutateWorld) {
  const auto layout = load_layout_asset("layouts/dash_and_dine.json");
  World w(layout, 12);
  for (int i = 0; i < 37; ++i) w.step_tick();
  for (const auto& a : w.agents()) {
    const auto before = w.hash();
    const auto json_before = w.to_json();
    (void)w.observe(a.name, 8);
    (void)w.observe(a.name, 100);
    EXPECT_EQ(before, w.hash());
    EXPECT_EQ(json_before, w.to_json());
  }
}

TEST(Inventory, ZeroCountsDisappearAndRemoveIsCapped) {
  Inventory inv;
  inv.add("bowl", 3);
  EXPECT_EQ(inv.remove("bowl", 5), 3);
  EXPECT_TRUE(inv.empty());
  EXPECT_EQ(inv.stacks().count("bowl"), 0U);
  inv.add("egg", 0);
  EXPECT_TRUE(inv.empty());
}

TEST(Rng, SamplersRespectRanges) {
  Rng r(2024);
  for (int i = 0; i < 10000; ++i) {
    const auto v = r.uniform_int(-3, 3);
    ASSERT_GE(v, -3);
    ASSERT_LE(v, 3);
    const double u = r.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_GE(r.geometric(0.05), 1);
  }
}

TEST(Event, JsonRoundTrip) {
  const World w(tiny_layout(), 1);
  const auto e = observe_event(12, w.observe("A", 8));
  nlohmann::json j = e;
  EXPECT_EQ(j.get<Event>(), e);
  const auto c = chat_event(3, "A", "Mined 1 slime_block");
  nlohmann::json jc = c;
  EXPECT_EQ(jc.get<Event>(), c);
}
