#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "teamcraft/actionlang/parser.hpp"
#include "teamcraft/actionlang/primitives.hpp"
#include "teamcraft/harness/benchmark.hpp"
#include "teamcraft/harness/protocols.hpp"
#include "teamcraft/opponents/opponents.hpp"
#include "teamcraft/scenarios/config.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace teamcraft;

namespace {

struct ConfigArgs {
  std::string file;
  std::vector<std::string> sets;
  std::vector<std::string> scenarios;
  std::vector<std::string> red;
  std::vector<std::string> opponents;
  int episodes = 0;
  int repeats = 0;
  std::string output;
  std::string client;
  int jobs = 0;
};

void add_config_options(CLI::App* cmd, ConfigArgs& a) {
  cmd->add_option("-c,--config", a.file, "Run config (JSON)")->check(CLI::ExistingFile);
  cmd->add_option("--set", a.sets, "Override a config value, e.g. --set client.latency_s=2.0");
  cmd->add_option("-s,--scenario", a.scenarios, "Scenarios to play");
  cmd->add_option("-r,--red", a.red, "Red systems: tacticrafter, cot, random, builtin:<name>, builtin:*");
  cmd->add_option("-o,--opponents", a.opponents, "Blue opponents (names, selectors or *)");
  cmd->add_option("-e,--episodes", a.episodes, "Episodes per matchup");
  cmd->add_option("--repeats", a.repeats, "Repeats per matchup");
  cmd->add_option("--output", a.output, "Output directory");
  cmd->add_option("--client", a.client, "Model client: mock, http or replay");
  cmd->add_option("-j,--jobs", a.jobs, "Matchups run in parallel");
}

harness::RunConfig resolve(const ConfigArgs& a, const std::string& default_name) {
  json doc = json::object();
  if (!a.file.empty()) {
    doc = harness::to_json(harness::load_run_config(a.file));
  } else {
    doc["name"] = default_name;
  }
  if (!a.scenarios.empty()) doc["scenarios"] = a.scenarios;
  if (!a.red.empty()) doc["red"] = a.red;
  if (!a.opponents.empty()) doc["opponents"] = a.opponents;
  if (a.episodes > 0) doc["episodes"] = a.episodes;
  if (a.repeats > 0) {
    doc["repeats"] = a.repeats;
    if (!doc.contains("seeds") || doc["seeds"].size() < static_cast<std::size_t>(a.repeats)) {
      json seeds = json::array();
      for (int i = 1; i <= a.repeats; ++i) seeds.push_back(i);
      doc["seeds"] = seeds;
    }
  }
  if (!a.output.empty()) doc["output"] = a.output;
  if (!a.client.empty()) doc["client"]["kind"] = a.client;
  if (a.jobs > 0) doc["jobs"] = a.jobs;
  return harness::parse_run_config(harness::apply_overrides(doc, a.sets));
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string("-"); }

void print_report(const harness::MetricsReport& report) {
  std::printf("%-14s %-22s %-22s %8s %8s %8s %6s\n", "scenario", "red", "blue", "P", "S", "D", "W");
  for (const auto& m : report.matchups) {
    std::printf("%-14s %-22s %-22s %8s %8s %8s %6s\n", m.scenario.c_str(), m.red.c_str(), m.blue.c_str(),
                fmt(m.red_metrics.P).c_str(), fmt(m.red_metrics.S).c_str(), fmt(m.red_metrics.D).c_str(),
                fmt(m.red_metrics.W).c_str());
  }
  for (const auto& [key, stats] : report.latency) {
    if (stats.n_llm == 0) continue;
    std::printf("%s %s: N_llm=%d T_resp=%s N_out=%s R_tps=%s I=%s idle=%s s\n", key.first.c_str(),
                key.second.c_str(), stats.n_llm, fmt(stats.t_resp).c_str(), fmt(stats.n_out).c_str(),
                fmt(stats.r_tps).c_str(), fmt(stats.iterations).c_str(), fmt(stats.expected_idle_s).c_str());
  }
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Re-runs the matchup prefix that leads to a recorded episode and compares
// digests.
int replay(const fs::path& run_dir, const std::string& id) {
  fs::path file = fs::path(id);
  if (!fs::exists(file)) file = run_dir / "episodes" / (id + (fs::path(id).extension() == ".json" ? "" : ".json"));
  const json recorded = json::parse(read_file(file));
  auto config = harness::parse_run_config(json::parse(read_file(run_dir / "config.json")));
  const std::string scenario = recorded.at("scenario");
  const std::string red_sel = recorded.at("red_system");
  const std::string blue_sel = recorded.at("blue_system");
  const int target = recorded.at("episode");
  const std::string stem = file.stem().string();
  const int repeat = std::stoi(stem.substr(1, stem.find('_') - 1));
  const auto run_seed = config.seeds.at(static_cast<std::size_t>(repeat));
  const std::string mid = harness::matchup_id(red_sel, blue_sel);
  const auto transcripts =
      run_dir / "transcripts" / scenario / harness::path_safe(red_sel + "_vs_" + blue_sel);

  auto client_for = [&](const std::string& side) {
    auto c = config.client;
    if (c.kind == "http") {
      c.kind = "replay";
      c.transcript = (transcripts / ("r" + std::to_string(repeat) + "_" + side + ".jsonl")).string();
    }
    return c;
  };
  auto red = harness::make_system(red_sel, client_for("red"),
                                  harness::episode_seed(run_seed, scenario, mid, repeat, -1));
  auto blue = harness::make_system(blue_sel, client_for("blue"),
                                   harness::episode_seed(run_seed, scenario, mid, repeat, -2));
  const auto sc = scenarios::load_scenario(scenario);
  harness::EpisodeResult last;
  for (int e = 0; e <= target; ++e) {
    harness::EpisodeOptions options;
    options.episode = e;
    last = harness::run_episode(sc, *red.system, *blue.system,
                                harness::episode_seed(run_seed, scenario, mid, repeat, e), options);
  }
  const auto want = recorded.at("digest").get<std::uint64_t>();
  const bool same = last.digest() == want && last.red_score == recorded.at("red_score").get<int>() &&
                    last.blue_score == recorded.at("blue_score").get<int>();
  std::printf("%s episode %d: replay %d-%d digest %016llx, recorded %d-%d digest %016llx: %s\n", scenario.c_str(),
              target, last.red_score, last.blue_score, static_cast<unsigned long long>(last.digest()),
              recorded.at("red_score").get<int>(), recorded.at("blue_score").get<int>(),
              static_cast<unsigned long long>(want), same ? "identical" : "MISMATCH");
  return same ? 0 : 1;
}

int check(const std::string& file, const std::string& scenario) {
  const std::string source = read_file(file);
  auto parsed = actionlang::parse_source(source);
  if (const auto* err = std::get_if<actionlang::ParseError>(&parsed)) {
    std::printf("%s:%d:%d: %s\n", file.c_str(), err->line, err->column, err->describe().c_str());
    return 1;
  }
  const auto& program = std::get<actionlang::Program>(parsed);
  const auto sc = scenarios::load_scenario(scenario);
  const auto issues = actionlang::validate(program, actionlang::PrimitiveTable(sc.primitives));
  for (const auto& i : issues) std::printf("%s:%d:%d: %s\n", file.c_str(), i.pos.line, i.pos.column, i.message.c_str());
  if (issues.empty()) std::printf("%s: ok (%d statements)\n", file.c_str(), actionlang::statement_count(program));
  return issues.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Team game benchmark: simulator, agents and protocols"};
  app.require_subcommand(1);

  ConfigArgs run_args;
  auto* run = app.add_subcommand("run", "Play every matchup of a run config and write a run folder");
  add_config_options(run, run_args);

  ConfigArgs adapt_args;
  auto* adapt = app.add_subcommand("adapt", "Checkpoint after five episodes and test against every opponent");
  add_config_options(adapt, adapt_args);

  ConfigArgs self_args;
  auto* selfplay = app.add_subcommand("selfplay", "Twenty self-play episodes with checkpoint evaluations");
  add_config_options(selfplay, self_args);

  std::vector<std::string> cal_scenarios;
  std::vector<std::string> cal_opponents;
  std::string cal_cache;
  auto* calibrate = app.add_subcommand("calibrate", "Baseline score of each opponent against do_nothing");
  calibrate->add_option("-s,--scenario", cal_scenarios, "Scenarios (default: all)");
  calibrate->add_option("-o,--opponents", cal_opponents, "Opponents (default: all built-ins)");
  calibrate->add_option("--cache", cal_cache, "Cache file");

  std::string replay_run;
  std::string replay_id;
  auto* rep = app.add_subcommand("replay", "Re-run a recorded episode and compare its digest");
  rep->add_option("episode", replay_id, "Episode id (scenario/matchup/rK_eN) or episode file")->required();
  rep->add_option("--run", replay_run, "Run folder")->required()->check(CLI::ExistingDirectory);

  std::string export_dir;
  std::string export_format = "csv";
  auto* exp = app.add_subcommand("export", "Rewrite matchup, timeline and metrics files of a run folder");
  exp->add_option("run", export_dir, "Run folder")->required()->check(CLI::ExistingDirectory);
  exp->add_option("-f,--format", export_format, "csv or plot-data")->check(CLI::IsMember({"csv", "plot-data"}));

  std::vector<std::string> opp_scenarios;
  auto* opps = app.add_subcommand("opponents", "List built-in opponents");
  opps->add_option("-s,--scenario", opp_scenarios, "Scenarios (default: all)");

  std::string check_file;
  std::string check_scenario = "dash_and_dine";
  auto* chk = app.add_subcommand("check", "Parse and validate an ActScript file");
  chk->add_option("file", check_file, "Program file")->required()->check(CLI::ExistingFile);
  chk->add_option("-s,--scenario", check_scenario, "Scenario whose primitives apply");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const auto config = resolve(run_args, "run");
      const auto result = harness::run_benchmark(config);
      print_report(result.report);
      std::printf("%d episodes, %d failed matchups, results in %s\n", result.episodes, result.failed,
                  result.run_dir.string().c_str());
      return result.failed == 0 ? 0 : 1;
    }
    if (*adapt || *selfplay) {
      const bool is_adapt = adapt->parsed();
      auto args = is_adapt ? adapt_args : self_args;
      if (args.red.empty()) args.red = {"tacticrafter"};
      const auto config = resolve(args, is_adapt ? "adapt" : "selfplay");
      const auto dir = harness::make_run_dir(config.output, config.name);
      harness::write_text(dir / "config.json", harness::to_json(config).dump(2) + "\n");
      if (is_adapt) {
        const auto report = harness::adaptation_protocol(config, dir);
        std::printf("%-14s %-10s %8s %8s %8s %6s\n", "scenario", "opponent", "P", "S", "D", "W");
        for (const auto& r : report.rows) {
          std::printf("%-14s %-10s %8s %8s %8s %6s\n", r.scenario.c_str(), r.kind.c_str(), fmt(r.metrics.P).c_str(),
                      fmt(r.metrics.S).c_str(), fmt(r.metrics.D).c_str(), fmt(r.metrics.W).c_str());
        }
      } else {
        const auto report = harness::self_play_protocol(config, dir);
        for (const auto& s : report.series) {
          std::printf("%s repeat %d:", s.scenario.c_str(), s.repeat);
          for (const auto& c : s.checkpoints) std::printf(" D@%d=%s", c.after_episode, fmt(c.metrics.D).c_str());
          std::printf("\n");
        }
      }
      std::printf("results in %s\n", dir.string().c_str());
      return 0;
    }
    if (*calibrate) {
      if (cal_scenarios.empty()) cal_scenarios = scenarios::scenario_names();
      harness::CalibrationTable table(cal_cache.empty() ? fs::path() : fs::path(cal_cache));
      for (const auto& s : cal_scenarios) {
        const auto sc = scenarios::load_scenario(s);
        auto names = cal_opponents.empty() ? opponents::builtin_names(s) : cal_opponents;
        for (const auto& n : names) std::printf("%s %s sigma=%.3f\n", s.c_str(), n.c_str(), table.sigma(sc, n));
      }
      return 0;
    }
    if (*rep) return replay(replay_run, replay_id);
    if (*exp) {
      harness::export_run(export_dir,
                          export_format == "csv" ? harness::ExportFormat::Csv : harness::ExportFormat::PlotData);
      return 0;
    }
    if (*opps) {
      if (opp_scenarios.empty()) opp_scenarios = scenarios::scenario_names();
      for (const auto& s : opp_scenarios) {
        for (const auto& n : opponents::builtin_names(s)) {
          const auto spec = opponents::builtin(n, s);
          std::printf("%s %s\n", s.c_str(), n.c_str());
          for (std::size_t i = 0; i < spec.agents.size(); ++i) {
            std::printf("  agent %zu: %s\n", i, spec.agents[i].role.c_str());
          }
        }
      }
      return 0;
    }
    if (*chk) return check(check_file, check_scenario);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
