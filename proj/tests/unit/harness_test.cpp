#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <type_traits>

#include "teamcraft/agents/llm.hpp"
#include "teamcraft/agents/tacticrafter.hpp"
#include "teamcraft/harness/benchmark.hpp"
#include "teamcraft/harness/calibration.hpp"
#include "teamcraft/harness/episode.hpp"
#include "teamcraft/harness/metrics.hpp"
#include "teamcraft/harness/protocols.hpp"
#include "teamcraft/harness/run_config.hpp"
#include "teamcraft/opponents/opponents.hpp"

using namespace teamcraft;
using namespace teamcraft::harness;
using opponents::BuiltinTeam;
using world::Team;

namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("teamcraft_harness_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t line_count(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  std::string line;
  while (std::getline(in, line)) n += !line.empty();
  return n;
}

// Brute-force reference for compute_metrics: written directly from the
// definitions, one quantity at a time.
struct Oracle {
  double P, D, W;
  std::optional<double> S;
};

Oracle oracle(const std::vector<int>& red, const std::vector<int>& blue, std::optional<double> sigma, double scale) {
  Oracle o{0, 0, 0, std::nullopt};
  const double n = static_cast<double>(red.size());
  double p = 0, d = 0, w = 0, b = 0;
  for (std::size_t i = 0; i < red.size(); ++i) p += red[i] * scale;
  for (std::size_t i = 0; i < red.size(); ++i) d += red[i] * scale - blue[i] * scale;
  for (std::size_t i = 0; i < red.size(); ++i) w += red[i] > blue[i] ? 1.0 : red[i] == blue[i] ? 0.5 : 0.0;
  for (std::size_t i = 0; i < red.size(); ++i) b += blue[i] * scale;
  o.P = p / n;
  o.D = d / n;
  o.W = w / n;
  if (sigma) o.S = *sigma * scale - b / n;
  return o;
}

RunConfig tiny_config(const fs::path& out) {
  RunConfig c;
  c.name = "tiny";
  c.scenarios = {"mushroom_war"};
  c.red = {"builtin:passive"};
  c.opponents = {"do_nothing", "aggressive"};
  c.episodes = 2;
  c.repeats = 1;
  c.seeds = {7};
  c.output = out.string();
  return c;
}

int area_count(const world::World& w, Team team, std::string_view kind, bool opponent_placed_only = false) {
  const auto* a = w.layout().area(team);
  int n = 0;
  for (int z = a->z0; z <= a->z1; ++z) {
    for (int x = a->x0; x <= a->x1; ++x) {
      const auto& c = w.cell({x, 0, z});
      if (c.kind != kind) continue;
      if (opponent_placed_only && c.placed_by != world::opponent_of(team)) continue;
      ++n;
    }
  }
  return n;
}

// Records everything the harness hands to it.
class SpyTeam : public api::TeamSystem {
 public:
  std::string name() const override { return "spy"; }
  void pre_game(const api::PreGameInfo& info) override { pre = info; }
  api::ProgramChoice next_program(const api::AgentTurn& turn) override {
    for (const auto& e : turn.new_events) seen.push_back(e);
    return {"loop { wait(20) }", 0};
  }
  void post_game(const api::PostGameInfo& info) override { post = info; }
  api::PreGameInfo pre;
  api::PostGameInfo post;
  std::vector<world::Event> seen;
};

}  // namespace

TEST(Metrics, WorkedExample) {
  const auto m = compute_metrics({10, 5}, {8, 5}, 9.0);
  EXPECT_EQ(m.P, 7.5);
  ASSERT_TRUE(m.S);
  EXPECT_EQ(*m.S, 2.5);
  EXPECT_EQ(m.D, 1.0);
  EXPECT_EQ(m.W, 0.75);
  EXPECT_EQ(m.episodes, 2);
}

TEST(Metrics, AllDrawsAndSymmetry) {
  EXPECT_EQ(compute_metrics({3, 0, 7}, {3, 0, 7}, std::nullopt).W, 0.5);
  EXPECT_EQ(compute_metrics({3, 0, 7}, {3, 0, 7}, std::nullopt).D, 0.0);
  EXPECT_FALSE(compute_metrics({1}, {0}, std::nullopt).S);
}

TEST(Metrics, ReportScaleDividesPoints) {
  const auto m = compute_metrics({100, 50}, {80, 50}, 90.0, 0.1);
  EXPECT_DOUBLE_EQ(m.P, 7.5);
  EXPECT_DOUBLE_EQ(*m.S, 2.5);
  EXPECT_DOUBLE_EQ(m.D, 1.0);
  EXPECT_EQ(m.W, 0.75);
}

TEST(Metrics, MatchesBruteForceOracle) {
  std::mt19937 gen(42);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 20)(gen);
    std::vector<int> red(static_cast<std::size_t>(n));
    std::vector<int> blue(static_cast<std::size_t>(n));
    for (auto& v : red) v = std::uniform_int_distribution<int>(0, 60)(gen);
    for (auto& v : blue) v = std::uniform_int_distribution<int>(0, 60)(gen);
    const double scale = trial % 2 ? 0.1 : 1.0;
    const std::optional<double> sigma = trial % 3 ? std::optional<double>(trial * 0.7) : std::nullopt;
    const auto m = compute_metrics(red, blue, sigma, scale);
    const auto o = oracle(red, blue, sigma, scale);
    EXPECT_DOUBLE_EQ(m.P, o.P);
    EXPECT_DOUBLE_EQ(m.D, o.D);
    EXPECT_DOUBLE_EQ(m.W, o.W);
    ASSERT_EQ(m.S.has_value(), o.S.has_value());
    if (o.S) {
      EXPECT_DOUBLE_EQ(*m.S, *o.S);
    }
    const auto mb = compute_metrics(blue, red, std::nullopt, scale);
    EXPECT_EQ(m.D, -mb.D);
    EXPECT_EQ(m.W + mb.W, 1.0);
  }
}

TEST(Latency, WorkedExample) {
  const auto s = latency_stats({{"action", "Ryn", 2.0, 100}, {"action", "Raze", 4.0, 100}}, {1, 1});
  EXPECT_EQ(s.n_llm, 2);
  EXPECT_EQ(*s.t_resp, 3.0);
  EXPECT_EQ(*s.n_out, 100.0);
  EXPECT_EQ(*s.r_tps, 37.5);
  EXPECT_EQ(*s.iterations, 1.0);
  EXPECT_EQ(*s.expected_idle_s, 0.0);
}

TEST(Latency, IdleGrowsWithIterations) {
  const auto s = latency_stats({{"action", "Ryn", 2.0, 50}}, {3, 5});
  EXPECT_EQ(*s.expected_idle_s, 2.0 * 3.0);
}

TEST(Latency, NoCallsMeansEveryStatAbsent) {
  const auto s = latency_stats({}, {4});
  EXPECT_EQ(s.n_llm, 0);
  EXPECT_FALSE(s.t_resp);
  EXPECT_FALSE(s.n_out);
  EXPECT_FALSE(s.r_tps);
  EXPECT_FALSE(s.iterations);
  EXPECT_FALSE(s.expected_idle_s);
}

TEST(Episode, SameSeedSameResult) {
  for (const std::string scenario : {"mushroom_war", "dash_and_dine"}) {
    const auto cfg = scenarios::load_scenario(scenario);
    const auto name = opponents::builtin_names(scenario)[1];
    BuiltinTeam r1(name), b1(opponents::builtin_names(scenario)[2]);
    BuiltinTeam r2(name), b2(opponents::builtin_names(scenario)[2]);
    const auto a = run_episode(cfg, r1, b1, 99);
    const auto b = run_episode(cfg, r2, b2, 99);
    EXPECT_EQ(a.events, b.events);
    EXPECT_EQ(a.red_score, b.red_score);
    EXPECT_EQ(a.blue_score, b.blue_score);
    EXPECT_EQ(a.digest(), b.digest());
    EXPECT_EQ(to_json(a, true), to_json(b, true));
  }
}

TEST(Episode, ScriptedOutcomes) {
  const auto cfg = scenarios::load_scenario("mushroom_war");
  BuiltinTeam idle_red("do_nothing"), idle_blue("do_nothing");
  const auto zero = run_episode(cfg, idle_red, idle_blue, 1);
  EXPECT_EQ(zero.red_score, 0);
  EXPECT_EQ(zero.blue_score, 0);
  EXPECT_EQ(zero.winner, Winner::Draw);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    BuiltinTeam red("passive"), blue("do_nothing");
    const auto r = run_episode(cfg, red, blue, seed);
    EXPECT_GT(r.red_score, 0) << seed;
    EXPECT_EQ(r.winner, Winner::Red);
    ASSERT_FALSE(r.red_timeline.empty());
    EXPECT_EQ(r.duration, cfg.duration_ticks);
    EXPECT_EQ(r.red_timeline.back().second, r.red_score);
  }
}

TEST(Episode, WinnerFollowsScores) {
  EXPECT_EQ(winner_of(3, 1), Winner::Red);
  EXPECT_EQ(winner_of(1, 3), Winner::Blue);
  EXPECT_EQ(winner_of(2, 2), Winner::Draw);
}

TEST(Episode, ThrowingSystemWaitsOutEpisode) {
  struct Broken : SpyTeam {
    api::ProgramChoice next_program(const api::AgentTurn&) override { throw std::runtime_error("boom"); }
  } broken;
  BuiltinTeam blue("passive");
  const auto r = run_episode(scenarios::load_scenario("mushroom_war"), broken, blue, 3);
  EXPECT_EQ(r.duration, 2400);
  EXPECT_EQ(r.red_score, 0);
  EXPECT_GT(r.blue_score, 0);
  bool failure_recorded = false;
  for (const auto& a : r.agents) failure_recorded |= a.team == Team::Red && !a.failure.empty();
  EXPECT_TRUE(failure_recorded);
}

TEST(Episode, JsonRoundTrip) {
  BuiltinTeam red("balanced"), blue("slimy");
  auto r = run_episode(scenarios::load_scenario("mushroom_war"), red, blue, 5);
  const auto j = to_json(r, true);
  EXPECT_EQ(to_json(episode_from_json(j), true), j);
}

TEST(MushroomWar, PerTickAreaBounds) {
  const auto cfg = scenarios::load_scenario("mushroom_war");
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    BuiltinTeam red("aggressive"), blue("slimy");
    EpisodeOptions opts;
    int violations = 0;
    opts.on_tick = [&](const scenarios::Game& g) {
      const auto& w = g.world();
      for (Team t : {Team::Red, Team::Blue}) {
        if (area_count(w, t, "red_mushroom_block") > 12) ++violations;
        if (area_count(w, t, "slime_block") > 12 + area_count(w, t, "slime_block", true)) ++violations;
      }
      if (!g.mushroom_timer_invariant_holds()) ++violations;
    };
    run_episode(cfg, red, blue, seed, opts);
    EXPECT_EQ(violations, 0) << seed;
  }
}

TEST(FairPlay, ApiSurfaceHoldsOnlyValues) {
  static_assert(std::is_copy_constructible_v<api::PreGameInfo>);
  static_assert(std::is_copy_constructible_v<api::AgentTurn>);
  static_assert(std::is_copy_constructible_v<api::PostGameInfo>);
  static_assert(std::is_same_v<decltype(&api::TeamSystem::pre_game), void (api::TeamSystem::*)(const api::PreGameInfo&)>);
  static_assert(std::is_same_v<decltype(&api::TeamSystem::next_program),
                               api::ProgramChoice (api::TeamSystem::*)(const api::AgentTurn&)>);
  static_assert(std::is_same_v<decltype(&api::TeamSystem::post_game), void (api::TeamSystem::*)(const api::PostGameInfo&)>);

  SpyTeam red;
  BuiltinTeam blue("aggressive");
  run_episode(scenarios::load_scenario("mushroom_war"), red, blue, 8);
  const std::set<std::string> own(red.pre.agents.begin(), red.pre.agents.end());
  EXPECT_EQ(own, (std::set<std::string>{"Ryn", "Raze"}));
  for (const auto& [agent, obs] : red.pre.observations) EXPECT_TRUE(own.count(agent));
  for (const auto* log : {&red.seen, &red.post.events}) {
    for (const auto& e : *log) {
      if (e.kind != world::EventKind::Observe) continue;
      EXPECT_TRUE(own.count(e.observation->agent)) << e.observation->agent;
    }
  }
  bool saw_opponent_chat = false;
  for (const auto& e : red.post.events) saw_opponent_chat |= e.kind == world::EventKind::Chat && !own.count(e.sender);
  EXPECT_TRUE(saw_opponent_chat);
}

TEST(Calibration, DoNothingIsZeroAndCacheHits) {
  const auto dir = fresh_dir("calibration");
  const auto cfg = scenarios::load_scenario("mushroom_war");
  const auto c = calibrate_sigma(cfg, "do_nothing");
  EXPECT_EQ(c.scores.size(), static_cast<std::size_t>(kCalibrationEpisodes));
  EXPECT_EQ(c.sigma, 0.0);
  {
    CalibrationTable table(dir / "cache.json");
    EXPECT_GT(table.sigma(cfg, "passive"), 0.0);
    EXPECT_EQ(table.simulated(), 1);
    table.sigma(cfg, "passive");
    EXPECT_EQ(table.simulated(), 1);
  }
  CalibrationTable reloaded(dir / "cache.json");
  EXPECT_TRUE(reloaded.find("mushroom_war", "passive"));
  reloaded.sigma(cfg, "passive");
  EXPECT_EQ(reloaded.simulated(), 0);
  fs::remove_all(dir);
}

TEST(Benchmark, EpisodeSeedsAreDistinctAndStable) {
  std::set<std::uint64_t> seen;
  for (int rep = 0; rep < 3; ++rep) {
    for (int e = 0; e < 5; ++e) seen.insert(episode_seed(1, "mushroom_war", "a vs b", rep, e));
  }
  EXPECT_EQ(seen.size(), 15U);
  EXPECT_EQ(episode_seed(1, "mushroom_war", "a vs b", 0, 0), episode_seed(1, "mushroom_war", "a vs b", 0, 0));
}

TEST(Benchmark, EpisodeCountFollowsConfig) {
  RunConfig c;
  EXPECT_EQ(c.episodes, 5);
  EXPECT_EQ(c.repeats, 3);
  std::size_t matchups = 0;
  for (const auto& s : c.scenarios) matchups += expand_opponents(c, s).size() * expand_red(c, s).size();
  EXPECT_EQ(matchups * static_cast<std::size_t>(c.episodes * c.repeats), 150U);
}

TEST(Benchmark, RunFolderIsComplete) {
  const auto dir = fresh_dir("bench");
  const auto result = run_benchmark(tiny_config(dir));
  EXPECT_EQ(result.failed, 0);
  EXPECT_EQ(result.episodes, 4);
  ASSERT_EQ(result.runs.size(), 2U);
  const auto& run_dir = result.run_dir;
  for (const char* f : {"config.json", "calibration.json", "results.jsonl", "matchup.csv", "timeline.csv", "metrics.json"}) {
    EXPECT_TRUE(fs::exists(run_dir / f)) << f;
  }
  EXPECT_EQ(line_count(run_dir / "results.jsonl"), 4U);
  EXPECT_EQ(line_count(run_dir / "matchup.csv"), 3U);
  EXPECT_EQ(line_count(run_dir / "timeline.csv"), 1U + 2U * 2400U);
  int episode_files = 0;
  for (const auto& e : fs::recursive_directory_iterator(run_dir / "episodes")) episode_files += e.is_regular_file();
  EXPECT_EQ(episode_files, 4);
  for (const auto& m : result.report.matchups) {
    EXPECT_EQ(m.red_metrics.D, -m.blue_metrics.D);
    EXPECT_EQ(m.red_metrics.W + m.blue_metrics.W, 1.0);
  }

  const auto matchup = slurp(run_dir / "matchup.csv");
  const auto timeline = slurp(run_dir / "timeline.csv");
  const auto metrics = slurp(run_dir / "metrics.json");
  export_run(run_dir);
  EXPECT_EQ(slurp(run_dir / "matchup.csv"), matchup);
  EXPECT_EQ(slurp(run_dir / "timeline.csv"), timeline);
  EXPECT_EQ(slurp(run_dir / "metrics.json"), metrics);
  export_run(run_dir, ExportFormat::PlotData);
  const auto plot = slurp(run_dir / "plot_data.json");
  export_run(run_dir, ExportFormat::PlotData);
  EXPECT_EQ(slurp(run_dir / "plot_data.json"), plot);

  const auto second = run_benchmark(tiny_config(dir));
  EXPECT_NE(second.run_dir, run_dir);
  EXPECT_EQ(slurp(second.run_dir / "matchup.csv"), matchup);
  fs::remove_all(dir);
}

TEST(Benchmark, ModelSystemsLeaveTranscripts) {
  const auto dir = fresh_dir("transcripts");
  auto c = tiny_config(dir);
  c.red = {"tacticrafter"};
  c.opponents = {"passive"};
  c.episodes = 1;
  const auto result = run_benchmark(c);
  EXPECT_EQ(result.failed, 0);
  bool transcript = false;
  for (const auto& e : fs::recursive_directory_iterator(result.run_dir)) {
    transcript |= e.path().extension() == ".jsonl" && e.path().filename() != "results.jsonl";
  }
  EXPECT_TRUE(transcript);
  fs::remove_all(dir);
}

TEST(RunConfig, LoaderIsStrict) {
  const auto dir = fresh_dir("config");
  {
    std::ofstream(dir / "base.json") << R"({"episodes": 2, "repeats": 1, "seeds": [4]})";
    std::ofstream(dir / "child.json") << R"({"extends": "base.json", "name": "child", "scenarios": ["mushroom_war"]})";
    std::ofstream(dir / "typo.json") << R"({"episode": 2})";
    std::ofstream(dir / "bad.json") << R"({"episodes": 0})";
    std::ofstream(dir / "seeds.json") << R"({"repeats": 3, "seeds": [1]})";
  }
  const auto c = load_run_config(dir / "child.json");
  EXPECT_EQ(c.episodes, 2);
  EXPECT_EQ(c.name, "child");
  EXPECT_EQ(c.seeds, std::vector<std::uint64_t>{4});
  EXPECT_THROW(load_run_config(dir / "typo.json"), RunConfigError);
  EXPECT_THROW(load_run_config(dir / "bad.json"), RunConfigError);
  EXPECT_THROW(load_run_config(dir / "seeds.json"), RunConfigError);
  EXPECT_THROW(load_run_config(dir / "missing.json"), RunConfigError);
  EXPECT_EQ(parse_run_config(to_json(c)).name, "child");
  const auto o = apply_overrides(to_json(c), {"episodes=4", "client/latency_s=2.5", "name=x y"});
  EXPECT_EQ(o["episodes"], 4);
  EXPECT_EQ(o["client"]["latency_s"], 2.5);
  EXPECT_EQ(o["name"], "x y");
  EXPECT_THROW(apply_overrides(to_json(c), {"novalue"}), RunConfigError);
  fs::remove_all(dir);
}

TEST(RunConfig, SelectorsExpand) {
  RunConfig c;
  c.red = {"builtin:*"};
  c.opponents = {"*"};
  EXPECT_EQ(expand_red(c, "dash_and_dine").size(), 5U);
  EXPECT_EQ(expand_opponents(c, "mushroom_war").size(), 5U);
  c.red = {"nonsense"};
  EXPECT_THROW(expand_red(c, "mushroom_war"), RunConfigError);
  EXPECT_TRUE(is_model_system("tacticrafter"));
  EXPECT_TRUE(is_model_system("cot"));
  EXPECT_FALSE(is_model_system("builtin:passive"));
}

TEST(Protocols, AdaptationShape) {
  const auto dir = fresh_dir("adapt");
  RunConfig c;
  c.scenarios = {"mushroom_war", "dash_and_dine"};
  c.repeats = 1;
  c.seeds = {3};
  c.output = dir.string();
  const auto report = adaptation_protocol(c, dir);
  EXPECT_EQ(report.evaluations.size(), 50U);
  std::map<std::string, int> per_scenario;
  for (const auto& e : report.evaluations) ++per_scenario[e.scenario];
  EXPECT_EQ(per_scenario["mushroom_war"], 25);
  EXPECT_EQ(per_scenario["dash_and_dine"], 25);
  std::vector<std::pair<std::string, std::string>> shape;
  for (const auto& r : report.rows) shape.emplace_back(r.scenario, r.kind);
  EXPECT_EQ(shape, (std::vector<std::pair<std::string, std::string>>{{"mushroom_war", "same"},
                                                                     {"mushroom_war", "different"},
                                                                     {"dash_and_dine", "same"},
                                                                     {"dash_and_dine", "different"},
                                                                     {"avg", "same"},
                                                                     {"avg", "different"}}));
  for (const auto& r : report.rows) EXPECT_GT(r.metrics.episodes, 0);
  int same = 0;
  for (const auto& e : report.evaluations) same += e.trained_against == e.opponent;
  EXPECT_EQ(same, 10);
  fs::remove_all(dir);
}

TEST(Protocols, SelfPlayShape) {
  const auto dir = fresh_dir("selfplay");
  RunConfig c;
  c.scenarios = {"mushroom_war"};
  c.repeats = 1;
  c.seeds = {5};
  c.output = dir.string();
  const auto report = self_play_protocol(c, dir);
  ASSERT_EQ(report.series.size(), 1U);
  const auto& s = report.series[0];
  EXPECT_EQ(s.red_scores.size(), 20U);
  EXPECT_EQ(s.blue_scores.size(), 20U);
  ASSERT_EQ(s.checkpoints.size(), 4U);
  std::size_t total = s.red_scores.size();
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_EQ(s.checkpoints[k].after_episode, static_cast<int>(5 * (k + 1)));
    EXPECT_EQ(s.checkpoints[k].episodes.size(), 5U);
    total += s.checkpoints[k].episodes.size();
  }
  EXPECT_EQ(total, 40U);
  for (int n : {5, 10, 15, 20}) {
    const auto file = dir / "selfplay" / "mushroom_war" / "r0" / ("checkpoint_" + std::to_string(n) + ".json");
    const auto text = slurp(file);
    const auto cp = agents::Checkpoint::load(text);
    EXPECT_EQ(cp.episodes, n);
    EXPECT_EQ(cp.dump(), text);
  }
  fs::remove_all(dir);
}
