#include <gtest/gtest.h>

#include <set>
#include <string>
#include <vector>

#include "teamcraft/actionlang/parser.hpp"
#include "teamcraft/actionlang/runtime.hpp"
#include "teamcraft/harness/episode.hpp"
#include "teamcraft/opponents/opponents.hpp"

using namespace teamcraft;
using opponents::BuiltinTeam;
using world::Team;

namespace {

std::map<std::string, std::string> constants_for(const std::string& scenario, Team team) {
  return harness::scenario_info(scenarios::load_scenario(scenario), team).constants;
}

api::Observation only_slime_observation() {
  api::Observation obs;
  obs.agent = "Ryn";
  obs.nearby_blocks.push_back({"slime_block", {4, 0, 1}, 0});
  obs.nearby_blocks.push_back({"slime_block", {5, 0, 1}, 0});
  return obs;
}

bool in_area(const world::World& w, Team team, const world::Position& p) {
  const auto* a = w.layout().area(team);
  return a && a->contains(p);
}

int area_count(const world::World& w, Team team, std::string_view kind) {
  const auto* a = w.layout().area(team);
  int n = 0;
  for (int z = a->z0; z <= a->z1; ++z)
    for (int x = a->x0; x <= a->x1; ++x) n += w.cell({x, 0, z}).kind == kind;
  return n;
}

}  // namespace

TEST(Builtin, NamesPerScenario) {
  EXPECT_EQ(opponents::builtin_names("mushroom_war"),
            (std::vector<std::string>{"do_nothing", "aggressive", "balanced", "passive", "slimy"}));
  EXPECT_EQ(opponents::builtin_names("dash_and_dine"),
            (std::vector<std::string>{"do_nothing", "berries", "cake_beetroot", "melon_pumpkin", "potato_cookie"}));
}

TEST(Builtin, MushroomWarSabotageFlags) {
  struct Row {
    const char* name;
    bool destroy;
    bool place;
  };
  for (const Row& r : {Row{"aggressive", true, true}, Row{"balanced", true, false}, Row{"passive", false, false},
                       Row{"slimy", false, true}}) {
    const auto spec = opponents::builtin(r.name, "mushroom_war", constants_for("mushroom_war", Team::Blue));
    EXPECT_EQ(spec.sabotage.destroy, r.destroy) << r.name;
    EXPECT_EQ(spec.sabotage.place, r.place) << r.name;
    EXPECT_EQ(spec.agents.size(), 2U) << r.name;
  }
}

TEST(Builtin, DashAndDineTransforms) {
  const auto c = constants_for("dash_and_dine", Team::Blue);
  EXPECT_TRUE(opponents::builtin("melon_pumpkin", "dash_and_dine", c).sabotage.transforms.empty());
  const auto berries = opponents::builtin("berries", "dash_and_dine", c).sabotage.transforms;
  EXPECT_EQ(berries, (std::vector<std::pair<std::string, std::string>>{{"potatoes", "sweet_berry_bush"},
                                                                        {"beetroots", "sweet_berry_bush"}}));
  const auto cake = opponents::builtin("cake_beetroot", "dash_and_dine", c).sabotage.transforms;
  EXPECT_EQ(cake, (std::vector<std::pair<std::string, std::string>>{{"melon_stem", "beetroots"},
                                                                     {"pumpkin_stem", "beetroots"}}));
}

TEST(Builtin, UnknownNameIsError) {
  EXPECT_THROW(opponents::builtin("berries", "mushroom_war"), opponents::OpponentError);
  EXPECT_THROW(opponents::builtin("nobody", "dash_and_dine"), opponents::OpponentError);
}

TEST(Builtin, ScriptsParseAndValidateAfterSubstitution) {
  for (const std::string scenario : {"mushroom_war", "dash_and_dine"}) {
    const auto table = actionlang::primitive_table(scenarios::load_scenario(scenario));
    for (Team team : {Team::Red, Team::Blue}) {
      for (const auto& name : opponents::builtin_names(scenario)) {
        const auto spec = opponents::builtin(name, scenario, constants_for(scenario, team));
        for (const auto& role : spec.agents) {
          for (const auto* src : {&role.opening, &role.main, &role.fallback}) {
            if (src->empty()) continue;
            SCOPED_TRACE(scenario + "/" + name + ": " + *src);
            EXPECT_EQ(src->find("{{"), std::string::npos);
            auto parsed = actionlang::parse_source(*src);
            ASSERT_TRUE(std::holds_alternative<actionlang::Program>(parsed));
            EXPECT_TRUE(actionlang::validate(std::get<actionlang::Program>(parsed), table).empty());
          }
        }
      }
    }
  }
}

TEST(Builtin, SubstituteReplacesPlaceholders) {
  EXPECT_EQ(opponents::substitute("moveTo({{X}}, {{Z}});", {{"X", "4"}, {"Z", "7"}}), "moveTo(4, 7);");
}

TEST(DoNothing, BothAgentsWaitInALoop) {
  const auto spec = opponents::do_nothing();
  ASSERT_EQ(spec.agents.size(), 2U);
  for (const auto& r : spec.agents) {
    auto p = actionlang::parse_source(r.main);
    ASSERT_TRUE(std::holds_alternative<actionlang::Program>(p));
    EXPECT_EQ(std::get<actionlang::Program>(p), std::get<actionlang::Program>(actionlang::parse_source("loop { wait(20) }")));
  }
}

TEST(DoNothing, VersusItselfIsScorelessAndSilent) {
  for (const std::string scenario : {"mushroom_war", "dash_and_dine"}) {
    BuiltinTeam red("do_nothing");
    BuiltinTeam blue("do_nothing");
    const auto r = harness::run_episode(scenarios::load_scenario(scenario), red, blue, 3);
    EXPECT_EQ(r.red_score, 0);
    EXPECT_EQ(r.blue_score, 0);
    EXPECT_EQ(r.winner, harness::Winner::Draw);
    for (const auto& e : r.events) {
      if (e.kind != world::EventKind::Chat) continue;
      EXPECT_TRUE(e.from_environment()) << e.sender << ": " << e.text;
    }
  }
}

TEST(Builtin, EveryOpponentOutscoresDoNothing) {
  for (const std::string scenario : {"mushroom_war", "dash_and_dine"}) {
    const auto cfg = scenarios::load_scenario(scenario);
    for (const auto& name : opponents::builtin_names(scenario)) {
      if (name == "do_nothing") continue;
      long total = 0;
      for (std::uint64_t seed = 0; seed < 20; ++seed) {
        BuiltinTeam red("do_nothing");
        BuiltinTeam blue(name);
        total += harness::run_episode(cfg, red, blue, 1000 + seed).blue_score;
      }
      EXPECT_GT(total, 0) << scenario << "/" << name;
    }
  }
}

TEST(Builtin, PassiveNeverActsInsideOpponentArea) {
  const auto cfg = scenarios::load_scenario("mushroom_war");
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    BuiltinTeam red("passive");
    BuiltinTeam blue("aggressive");
    harness::EpisodeOptions opts;
    int violations = 0;
    opts.on_tick = [&](const scenarios::Game& g) {
      for (const auto& a : g.world().agents()) {
        if (a.team == Team::Red && in_area(g.world(), Team::Blue, a.position)) ++violations;
      }
    };
    const auto r = harness::run_episode(cfg, red, blue, seed, opts);
    EXPECT_EQ(violations, 0);
    for (const auto& e : r.audit) EXPECT_FALSE(e.team == Team::Red && e.source != "mushroom");
  }
}

TEST(Builtin, SlimyNeverMinesOpponentMushrooms) {
  const auto cfg = scenarios::load_scenario("mushroom_war");
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    BuiltinTeam red("slimy");
    BuiltinTeam blue("do_nothing");
    harness::EpisodeOptions opts;
    int lowest = 12;
    opts.on_tick = [&](const scenarios::Game& g) {
      lowest = std::min(lowest, area_count(g.world(), Team::Blue, "red_mushroom_block"));
    };
    harness::run_episode(cfg, red, blue, seed, opts);
    EXPECT_EQ(lowest, 12);
  }
}

TEST(Random, MineTargetsOnlyNearbyBlocks) {
  const auto table = actionlang::primitive_table(scenarios::load_scenario("mushroom_war"));
  opponents::RandomPolicyState st;
  st.rng = world::Rng(77);
  const auto obs = only_slime_observation();
  int mines = 0;
  for (int i = 0; i < 500; ++i) {
    const auto src = opponents::random_program(st, obs, table);
    auto p = actionlang::parse_source(src);
    ASSERT_TRUE(std::holds_alternative<actionlang::Program>(p)) << src;
    for (const auto* c : actionlang::calls(std::get<actionlang::Program>(p))) {
      if (c->name != "mineBlock") continue;
      ++mines;
      EXPECT_EQ(c->args[0].str(), "slime_block");
    }
  }
  EXPECT_GT(mines, 0);
}

TEST(Random, EmptyPoolsFallBackToWait) {
  const auto table = actionlang::primitive_table(scenarios::load_scenario("mushroom_war"));
  opponents::RandomPolicyState st;
  const auto pools = opponents::random_pools(api::Observation{});
  EXPECT_TRUE(pools.blocks.empty() && pools.mobs.empty() && pools.items.empty() && pools.players.empty());
  for (int i = 0; i < 50; ++i) {
    const auto src = opponents::random_program(st, api::Observation{}, table);
    const auto p = std::get<actionlang::Program>(actionlang::parse_source(src));
    for (const auto* c : actionlang::calls(p)) {
      const bool no_pool_needed = c->name == "milkCow" || c->name == "waitSignal" || c->name == "wait";
      EXPECT_TRUE(no_pool_needed) << src;
    }
  }
}

TEST(Random, FixedSeedSameSequence) {
  const auto cfg = scenarios::load_scenario("dash_and_dine");
  const auto table = actionlang::primitive_table(cfg);
  scenarios::Game g(cfg, 1);
  const auto obs = g.world().observe("Ryn", cfg.observe_radius);
  opponents::RandomPolicyState a;
  opponents::RandomPolicyState b;
  a.rng = world::Rng(5);
  b.rng = world::Rng(5);
  for (int i = 0; i < 200; ++i) EXPECT_EQ(opponents::random_program(a, obs, table), opponents::random_program(b, obs, table));
  EXPECT_EQ(a.history, b.history);
  EXPECT_EQ(a.history.size(), 200U);
}

TEST(Random, EveryEmittedCallValidates) {
  for (const std::string scenario : {"mushroom_war", "dash_and_dine"}) {
    const auto cfg = scenarios::load_scenario(scenario);
    const auto table = actionlang::primitive_table(cfg);
    scenarios::Game g(cfg, 2);
    g.world().agent("Ryn").inventory.add("slime_block", 2);
    g.world().agent("Ryn").inventory.add("wheat", 3);
    const auto obs = g.world().observe("Ryn", cfg.observe_radius);
    opponents::RandomPolicyState st;
    st.rng = world::Rng(9);
    for (int i = 0; i < 2000; ++i) {
      const auto src = opponents::random_program(st, obs, table);
      auto p = actionlang::parse_source(src);
      ASSERT_TRUE(std::holds_alternative<actionlang::Program>(p)) << src;
      ASSERT_TRUE(actionlang::validate(std::get<actionlang::Program>(p), table).empty()) << scenario << ": " << src;
    }
  }
}

TEST(Random, TeamPlaysFullEpisodeWithValidCalls) {
  const auto cfg = scenarios::load_scenario("mushroom_war");
  opponents::RandomTeam red(11);
  BuiltinTeam blue("passive");
  const auto r = harness::run_episode(cfg, red, blue, 11);
  EXPECT_FALSE(red.state().history.empty());
  for (const auto& e : r.events) {
    if (e.kind != world::EventKind::Chat) continue;
    EXPECT_EQ(e.text.find("unavailable"), std::string::npos) << e.text;
  }
}
