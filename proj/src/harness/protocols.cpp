#include "teamcraft/harness/protocols.hpp"

#include "teamcraft/agents/tacticrafter.hpp"

namespace teamcraft::harness {

using nlohmann::json;

namespace {

json eval_json(const EvaluationEpisode& e) {
  return {{"scenario", e.scenario},         {"trained_against", e.trained_against}, {"opponent", e.opponent},
          {"checkpoint_episode", e.checkpoint_episode}, {"repeat", e.repeat},   {"red_score", e.red_score},
          {"blue_score", e.blue_score}};
}

std::unique_ptr<agents::TactiCrafter> fresh_tacticrafter(const ClientSettings& client,
                                                         std::shared_ptr<agents::RecordingClient>& recorder) {
  recorder = std::make_shared<agents::RecordingClient>(make_client(client));
  return std::make_unique<agents::TactiCrafter>(recorder, agents::Templates::builtin(),
                                                client.kind == "http" ? client.model : "mock");
}

// One episode from a checkpoint; the checkpoint itself is never touched.
EvaluationEpisode evaluate(const agents::Checkpoint& cp, const scenarios::ScenarioConfig& config,
                           const std::string& opponent, const ClientSettings& client, std::uint64_t seed,
                           const std::filesystem::path& transcript) {
  std::shared_ptr<agents::RecordingClient> recorder;
  auto red = fresh_tacticrafter(client, recorder);
  red->restore(cp);
  auto blue = make_system(opponent, client, seed ^ 0x5bd1e995ULL);
  EpisodeOptions options;
  options.episode = cp.episodes;
  const auto r = run_episode(config, *red, *blue.system, seed, options);
  write_text(transcript, recorder->transcript());
  EvaluationEpisode e;
  e.scenario = config.name;
  e.opponent = opponent;
  e.checkpoint_episode = cp.episodes;
  e.red_score = r.red_score;
  e.blue_score = r.blue_score;
  return e;
}

Metrics metrics_of(const std::vector<const EvaluationEpisode*>& eps, const CalibrationTable& cal, double scale) {
  std::vector<Metrics> rows;
  for (const auto* e : eps) {
    std::optional<double> sigma;
    if (e->opponent.rfind("builtin:", 0) == 0) sigma = cal.find(e->scenario, e->opponent.substr(8));
    rows.push_back(compute_metrics({e->red_score}, {e->blue_score}, sigma, scale));
  }
  Metrics m = mean_metrics(rows);
  m.episodes = static_cast<int>(eps.size());
  return m;
}

CalibrationTable calibrate_all(const RunConfig& config) {
  const std::filesystem::path cache =
      config.calibration_cache.empty() ? std::filesystem::path(config.output) / "calibration_cache.json"
                                       : std::filesystem::path(config.calibration_cache);
  CalibrationTable cal(cache);
  for (const auto& scenario : config.scenarios) {
    const auto sc = scenarios::load_scenario(scenario);
    for (const auto& blue : expand_opponents(config, scenario)) {
      if (blue.rfind("builtin:", 0) == 0) cal.sigma(sc, blue.substr(8));
    }
  }
  return cal;
}

}  // namespace

json AdaptationReport::to_json() const {
  json evals = json::array();
  for (const auto& e : evaluations) evals.push_back(eval_json(e));
  json table = json::array();
  for (const auto& r : rows) {
    table.push_back({{"scenario", r.scenario}, {"kind", r.kind}, {"metrics", harness::to_json(r.metrics)}});
  }
  return {{"rows", table}, {"evaluations", evals}};
}

AdaptationReport adaptation_protocol(const RunConfig& config, const std::filesystem::path& run_dir) {
  config.validate();
  const CalibrationTable cal = calibrate_all(config);
  write_text(run_dir / "calibration.json", cal.to_json().dump(2) + "\n");
  AdaptationReport report;
  std::map<std::string, std::vector<Metrics>> same_rows;
  std::map<std::string, std::vector<Metrics>> diff_rows;
  for (const auto& scenario : config.scenarios) {
    const auto sc = scenarios::load_scenario(scenario);
    const auto opponents = expand_opponents(config, scenario);
    std::vector<EvaluationEpisode> evals;
    for (int k = 0; k < config.repeats; ++k) {
      const auto run_seed = config.seeds[static_cast<std::size_t>(k)];
      for (const auto& trained : opponents) {
        const std::string id = matchup_id("tacticrafter", trained);
        const auto dir = run_dir / "adaptation" / scenario / path_safe(trained) / ("r" + std::to_string(k));
        std::shared_ptr<agents::RecordingClient> recorder;
        auto red = fresh_tacticrafter(config.client, recorder);
        auto blue = make_system(trained, config.client, episode_seed(run_seed, scenario, id, k, -2));
        json train = json::array();
        for (int e = 0; e < kAdaptationTrainEpisodes; ++e) {
          EpisodeOptions options;
          options.episode = e;
          const auto r = run_episode(sc, *red, *blue.system, episode_seed(run_seed, scenario, id, k, e), options);
          train.push_back({{"episode", e}, {"red_score", r.red_score}, {"blue_score", r.blue_score}});
        }
        write_text(dir / "training.json", train.dump(2) + "\n");
        write_text(dir / "training_transcript.jsonl", recorder->transcript());
        const auto cp = red->checkpoint();
        write_text(dir / "checkpoint.json", cp.dump());
        for (const auto& opponent : opponents) {
          const auto seed = episode_seed(run_seed, scenario, "adapt:" + trained + ">" + opponent, k,
                                         kAdaptationTrainEpisodes);
          auto e = evaluate(cp, sc, opponent, config.client, seed,
                            dir / ("eval_" + path_safe(opponent) + "_transcript.jsonl"));
          e.trained_against = trained;
          e.repeat = k;
          evals.push_back(e);
        }
      }
    }
    std::vector<const EvaluationEpisode*> same;
    std::vector<const EvaluationEpisode*> diff;
    for (const auto& e : evals) (e.opponent == e.trained_against ? same : diff).push_back(&e);
    const double scale = sc.report_scale;
    const Metrics ms = metrics_of(same, cal, scale);
    const Metrics md = metrics_of(diff, cal, scale);
    report.rows.push_back({scenario, "same", ms});
    report.rows.push_back({scenario, "different", md});
    same_rows["avg"].push_back(ms);
    diff_rows["avg"].push_back(md);
    report.evaluations.insert(report.evaluations.end(), evals.begin(), evals.end());
  }
  Metrics avg_same = mean_metrics(same_rows["avg"]);
  Metrics avg_diff = mean_metrics(diff_rows["avg"]);
  report.rows.push_back({"avg", "same", avg_same});
  report.rows.push_back({"avg", "different", avg_diff});
  write_text(run_dir / "adaptation.json", report.to_json().dump(2) + "\n");
  std::string csv = "scenario,kind,episodes,P,S,D,W\n";
  for (const auto& r : report.rows) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s,%s,%d,%.6f,%s,%.6f,%.6f\n", r.scenario.c_str(), r.kind.c_str(),
                  r.metrics.episodes, r.metrics.P,
                  r.metrics.S ? std::to_string(*r.metrics.S).c_str() : "", r.metrics.D, r.metrics.W);
    csv += buf;
  }
  write_text(run_dir / "adaptation.csv", csv);
  return report;
}

json SelfPlayReport::to_json() const {
  json out = json::array();
  for (const auto& s : series) {
    json cps = json::array();
    for (const auto& c : s.checkpoints) {
      json eps = json::array();
      for (const auto& e : c.episodes) eps.push_back(eval_json(e));
      cps.push_back({{"after_episode", c.after_episode}, {"metrics", harness::to_json(c.metrics)}, {"episodes", eps}});
    }
    out.push_back({{"scenario", s.scenario},
                   {"repeat", s.repeat},
                   {"red_scores", s.red_scores},
                   {"blue_scores", s.blue_scores},
                   {"checkpoints", cps}});
  }
  return {{"series", out}};
}

SelfPlayReport self_play_protocol(const RunConfig& config, const std::filesystem::path& run_dir) {
  config.validate();
  const CalibrationTable cal = calibrate_all(config);
  write_text(run_dir / "calibration.json", cal.to_json().dump(2) + "\n");
  SelfPlayReport report;
  for (const auto& scenario : config.scenarios) {
    const auto sc = scenarios::load_scenario(scenario);
    const auto opponents = expand_opponents(config, scenario);
    for (int k = 0; k < config.repeats; ++k) {
      const auto run_seed = config.seeds[static_cast<std::size_t>(k)];
      const auto dir = run_dir / "selfplay" / scenario / ("r" + std::to_string(k));
      SelfPlaySeries series;
      series.scenario = scenario;
      series.repeat = k;
      std::shared_ptr<agents::RecordingClient> red_rec;
      std::shared_ptr<agents::RecordingClient> blue_rec;
      auto red = fresh_tacticrafter(config.client, red_rec);
      auto blue = fresh_tacticrafter(config.client, blue_rec);
      const std::string id = matchup_id("tacticrafter", "tacticrafter");
      for (int e = 0; e < kSelfPlayEpisodes; ++e) {
        EpisodeOptions options;
        options.episode = e;
        const auto r = run_episode(sc, *red, *blue, episode_seed(run_seed, scenario, id, k, e), options);
        series.red_scores.push_back(r.red_score);
        series.blue_scores.push_back(r.blue_score);
        if ((e + 1) % kCheckpointEvery != 0) continue;
        const auto cp = red->checkpoint();
        const std::string tag = "checkpoint_" + std::to_string(e + 1);
        write_text(dir / (tag + ".json"), cp.dump());
        CheckpointEvaluation ce;
        ce.after_episode = e + 1;
        for (const auto& opponent : opponents) {
          const auto seed = episode_seed(run_seed, scenario, "selfplay:" + opponent, k, e + 1);
          auto ev = evaluate(cp, sc, opponent, config.client, seed,
                             dir / (tag + "_" + path_safe(opponent) + "_transcript.jsonl"));
          ev.repeat = k;
          ce.episodes.push_back(ev);
        }
        std::vector<const EvaluationEpisode*> ptrs;
        for (const auto& ev : ce.episodes) ptrs.push_back(&ev);
        ce.metrics = metrics_of(ptrs, cal, sc.report_scale);
        series.checkpoints.push_back(std::move(ce));
      }
      write_text(dir / "red_transcript.jsonl", red_rec->transcript());
      write_text(dir / "blue_transcript.jsonl", blue_rec->transcript());
      report.series.push_back(std::move(series));
    }
  }
  write_text(run_dir / "selfplay.json", report.to_json().dump(2) + "\n");
  return report;
}

}  // namespace teamcraft::harness
