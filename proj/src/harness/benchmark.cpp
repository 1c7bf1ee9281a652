#include "teamcraft/harness/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "teamcraft/world/rng.hpp"
#include "teamcraft/world/world.hpp"

namespace teamcraft::harness {

using nlohmann::json;

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

double scale_of(const std::string& scenario) {
  static std::mutex mu;
  static std::map<std::string, double> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(scenario);
  if (it != cache.end()) return it->second;
  const double s = scenarios::load_scenario(scenario).report_scale;
  cache.emplace(scenario, s);
  return s;
}

int score_at(const std::vector<std::pair<Tick, int>>& timeline, Tick t, std::size_t& cursor) {
  while (cursor + 1 < timeline.size() && timeline[cursor + 1].first <= t) ++cursor;
  return timeline.empty() || timeline[cursor].first > t ? 0 : timeline[cursor].second;
}

struct Band {
  double mean = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

Band band(const std::vector<double>& xs) {
  Band b;
  if (xs.empty()) return b;
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double n = static_cast<double>(xs.size());
  b.mean = sum / n;
  double half = 0.0;
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - b.mean) * (x - b.mean);
    half = 1.96 * std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  b.lo = b.mean - half;
  b.hi = b.mean + half;
  return b;
}

struct Series {
  std::string scenario;
  std::string red;
  std::string blue;
  Tick duration = 0;
  std::vector<Band> red_points;
  std::vector<Band> blue_points;
};

// Mean score per tick with a 95% band, per matchup.
std::vector<Series> timeline_series(const std::vector<MatchupRun>& runs) {
  std::map<std::tuple<std::string, std::string, std::string>, std::vector<const EpisodeResult*>> groups;
  std::vector<std::tuple<std::string, std::string, std::string>> order;
  for (const auto& run : runs) {
    auto key = std::make_tuple(run.scenario, run.red, run.blue);
    if (!groups.count(key)) order.push_back(key);
    auto& g = groups[key];
    for (const auto& e : run.episodes) g.push_back(&e);
  }
  std::vector<Series> out;
  for (const auto& key : order) {
    const auto& eps = groups[key];
    Series s{std::get<0>(key), std::get<1>(key), std::get<2>(key), 0, {}, {}};
    for (const auto* e : eps) s.duration = std::max(s.duration, e->duration);
    const double scale = scale_of(s.scenario);
    std::vector<std::size_t> rc(eps.size(), 0);
    std::vector<std::size_t> bc(eps.size(), 0);
    std::vector<double> rv(eps.size());
    std::vector<double> bv(eps.size());
    for (Tick t = 0; t < s.duration; ++t) {
      for (std::size_t i = 0; i < eps.size(); ++i) {
        rv[i] = score_at(eps[i]->red_timeline, t, rc[i]) * scale;
        bv[i] = score_at(eps[i]->blue_timeline, t, bc[i]) * scale;
      }
      s.red_points.push_back(band(rv));
      s.blue_points.push_back(band(bv));
    }
    out.push_back(std::move(s));
  }
  return out;
}

void flush_line(std::ofstream& out, std::mutex& mu, const json& j) {
  std::lock_guard lock(mu);
  out << j.dump() << "\n";
  out.flush();
}

}  // namespace

std::uint64_t episode_seed(std::uint64_t run_seed, const std::string& scenario, const std::string& matchup,
                           int repeat, int episode) {
  const std::string key = std::to_string(run_seed) + "|" + scenario + "|" + matchup + "|" + std::to_string(repeat) +
                          "|" + std::to_string(episode);
  return world::mix64(world::fnv1a(key));
}

std::string matchup_id(const std::string& red, const std::string& blue) { return red + " vs " + blue; }

std::string path_safe(const std::string& text) {
  std::string out;
  for (char c : text) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
    out += ok ? c : '-';
  }
  return out;
}

json MetricsReport::to_json() const {
  json m = json::array();
  for (const auto& s : matchups) {
    m.push_back({{"scenario", s.scenario},
                 {"red", s.red},
                 {"blue", s.blue},
                 {"sigma_blue", s.sigma_blue ? json(*s.sigma_blue) : json(nullptr)},
                 {"red_metrics", harness::to_json(s.red_metrics)},
                 {"blue_metrics", harness::to_json(s.blue_metrics)}});
  }
  json ps = json::array();
  for (const auto& [key, metrics] : per_scenario) {
    ps.push_back({{"scenario", key.first}, {"red", key.second}, {"metrics", harness::to_json(metrics)}});
  }
  json ov = json::array();
  for (const auto& [red, metrics] : overall) ov.push_back({{"red", red}, {"metrics", harness::to_json(metrics)}});
  json lat = json::array();
  for (const auto& [key, stats] : latency) {
    lat.push_back({{"scenario", key.first}, {"red", key.second}, {"stats", harness::to_json(stats)}});
  }
  return {{"matchups", m}, {"per_scenario", ps}, {"overall", ov}, {"latency", lat}};
}

MetricsReport build_report(const std::vector<MatchupRun>& runs, const CalibrationTable& calibration) {
  std::map<std::tuple<std::string, std::string, std::string>, std::pair<std::vector<int>, std::vector<int>>> scores;
  std::vector<std::tuple<std::string, std::string, std::string>> order;
  std::map<std::pair<std::string, std::string>, std::vector<api::LlmCallRecord>> calls;
  std::map<std::pair<std::string, std::string>, std::vector<int>> iterations;
  for (const auto& run : runs) {
    auto key = std::make_tuple(run.scenario, run.red, run.blue);
    if (!scores.count(key)) order.push_back(key);
    auto& [red, blue] = scores[key];
    for (const auto& e : run.episodes) {
      red.push_back(e.red_score);
      blue.push_back(e.blue_score);
      auto& c = calls[{run.scenario, run.red}];
      c.insert(c.end(), e.red_stats.calls.begin(), e.red_stats.calls.end());
      auto& it = iterations[{run.scenario, run.red}];
      it.insert(it.end(), e.red_stats.iterations.begin(), e.red_stats.iterations.end());
    }
  }
  MetricsReport report;
  std::map<std::pair<std::string, std::string>, std::vector<Metrics>> by_scenario;
  std::map<std::string, std::vector<Metrics>> by_red;
  for (const auto& key : order) {
    const auto& [scenario, red, blue] = key;
    const auto& [rs, bs] = scores[key];
    const double scale = scale_of(scenario);
    std::optional<double> sigma;
    if (blue.rfind("builtin:", 0) == 0) sigma = calibration.find(scenario, blue.substr(8));
    MatchupSummary s{scenario, red, blue, compute_metrics(rs, bs, sigma, scale),
                     compute_metrics(bs, rs, std::nullopt, scale), sigma};
    by_scenario[{scenario, red}].push_back(s.red_metrics);
    by_red[red].push_back(s.red_metrics);
    report.matchups.push_back(std::move(s));
  }
  for (const auto& [key, rows] : by_scenario) report.per_scenario[key] = mean_metrics(rows);
  for (const auto& [red, rows] : by_red) report.overall[red] = mean_metrics(rows);
  for (const auto& [key, c] : calls) report.latency[key] = latency_stats(c, iterations[key]);
  return report;
}

std::filesystem::path make_run_dir(const std::filesystem::path& output, const std::string& name) {
  std::filesystem::create_directories(output);
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y%m%d-%H%M%S", &tm);
  const std::string base = path_safe(name) + "-" + stamp;
  for (int i = 0;; ++i) {
    auto dir = output / (i == 0 ? base : base + "-" + std::to_string(i));
    if (std::filesystem::create_directory(dir)) return dir;
  }
}

void write_text(const std::filesystem::path& file, const std::string& text) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << text;
  if (!out) throw std::runtime_error("cannot write " + file.string());
}

BenchmarkResult run_benchmark(const RunConfig& config) {
  config.validate();
  BenchmarkResult result;
  result.run_dir = make_run_dir(config.output, config.name);
  write_text(result.run_dir / "config.json", harness::to_json(config).dump(2) + "\n");

  struct Job {
    std::string scenario;
    std::string red;
    std::string blue;
    int repeat = 0;
  };
  std::vector<Job> jobs;
  const std::filesystem::path cache =
      config.calibration_cache.empty() ? std::filesystem::path(config.output) / "calibration_cache.json"
                                       : std::filesystem::path(config.calibration_cache);
  CalibrationTable calibration(cache);
  for (const auto& scenario : config.scenarios) {
    const auto scenario_config = scenarios::load_scenario(scenario);
    const auto reds = expand_red(config, scenario);
    const auto blues = expand_opponents(config, scenario);
    for (const auto& blue : blues) {
      if (blue.rfind("builtin:", 0) == 0) calibration.sigma(scenario_config, blue.substr(8));
    }
    for (const auto& red : reds) {
      for (const auto& blue : blues) {
        for (int k = 0; k < config.repeats; ++k) jobs.push_back(Job{scenario, red, blue, k});
      }
    }
  }
  write_text(result.run_dir / "calibration.json", calibration.to_json().dump(2) + "\n");

  result.runs.resize(jobs.size());
  std::ofstream results(result.run_dir / "results.jsonl", std::ios::binary);
  std::mutex results_mu;
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const auto& job = jobs[i];
      auto& run = result.runs[i];
      run.scenario = job.scenario;
      run.red = job.red;
      run.blue = job.blue;
      run.repeat = job.repeat;
      run.run_seed = config.seeds[static_cast<std::size_t>(job.repeat)];
      const std::string id = matchup_id(job.red, job.blue);
      const auto dir = result.run_dir / "episodes" / job.scenario / path_safe(job.red + "_vs_" + job.blue);
      try {
        const auto scenario_config = scenarios::load_scenario(job.scenario);
        auto red = make_system(job.red, config.client, episode_seed(run.run_seed, job.scenario, id, job.repeat, -1));
        auto blue = make_system(job.blue, config.client, episode_seed(run.run_seed, job.scenario, id, job.repeat, -2));
        for (int e = 0; e < config.episodes; ++e) {
          EpisodeOptions options;
          options.episode = e;
          auto r = run_episode(scenario_config, *red.system, *blue.system,
                               episode_seed(run.run_seed, job.scenario, id, job.repeat, e), options);
          r.red_system = job.red;
          r.blue_system = job.blue;
          if (config.episode_logs) {
            write_text(dir / ("r" + std::to_string(job.repeat) + "_e" + std::to_string(e) + ".json"),
                       harness::to_json(r, true).dump() + "\n");
          }
          json line = harness::to_json(r, false);
          line["repeat"] = job.repeat;
          line["run_seed"] = run.run_seed;
          flush_line(results, results_mu, line);
          r.events.clear();
          r.events.shrink_to_fit();
          run.episodes.push_back(std::move(r));
        }
        const auto transcripts = result.run_dir / "transcripts" / job.scenario /
                                 path_safe(job.red + "_vs_" + job.blue);
        const std::string tag = "r" + std::to_string(job.repeat);
        if (red.recorder) write_text(transcripts / (tag + "_red.jsonl"), red.recorder->transcript());
        if (blue.recorder) write_text(transcripts / (tag + "_blue.jsonl"), blue.recorder->transcript());
      } catch (const std::exception& ex) {
        run.failure = ex.what();
        flush_line(results, results_mu,
                   json{{"failure", ex.what()}, {"scenario", job.scenario}, {"red_system", job.red},
                        {"blue_system", job.blue}, {"repeat", job.repeat}});
      }
    }
  };
  const int threads = std::max(1, std::min<int>(config.jobs, static_cast<int>(jobs.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  results.close();

  for (const auto& run : result.runs) {
    if (!run.failure.empty()) ++result.failed;
    result.episodes += static_cast<int>(run.episodes.size());
  }
  export_run(result.run_dir, ExportFormat::Csv);
  result.report = build_report(result.runs, calibration);
  return result;
}

std::vector<json> read_results(const std::filesystem::path& run_dir) {
  std::ifstream in(run_dir / "results.jsonl");
  if (!in) throw std::runtime_error("no results.jsonl in " + run_dir.string());
  std::vector<json> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(json::parse(line));
  }
  return out;
}

std::vector<MatchupRun> runs_from_results(const std::vector<json>& lines) {
  std::map<std::tuple<std::string, std::string, std::string, int>, MatchupRun> grouped;
  for (const auto& j : lines) {
    const auto key = std::make_tuple(j.at("scenario").get<std::string>(), j.at("red_system").get<std::string>(),
                                     j.at("blue_system").get<std::string>(), j.at("repeat").get<int>());
    auto& run = grouped[key];
    run.scenario = std::get<0>(key);
    run.red = std::get<1>(key);
    run.blue = std::get<2>(key);
    run.repeat = std::get<3>(key);
    if (j.contains("failure")) {
      run.failure = j.at("failure").get<std::string>();
      continue;
    }
    run.run_seed = j.value("run_seed", std::uint64_t{0});
    run.episodes.push_back(episode_from_json(j));
  }
  std::vector<MatchupRun> out;
  for (auto& [key, run] : grouped) {
    std::sort(run.episodes.begin(), run.episodes.end(),
              [](const EpisodeResult& a, const EpisodeResult& b) { return a.episode < b.episode; });
    out.push_back(std::move(run));
  }
  return out;
}

void write_matchup_csv(const std::filesystem::path& file, const MetricsReport& report) {
  std::string out = "scenario,red,blue,episodes,P,S,D,W,blue_P,blue_D,blue_W,sigma_blue\n";
  for (const auto& s : report.matchups) {
    const auto& r = s.red_metrics;
    const auto& b = s.blue_metrics;
    out += s.scenario + "," + s.red + "," + s.blue + "," + std::to_string(r.episodes) + "," + num(r.P) + "," +
           opt_num(r.S) + "," + num(r.D) + "," + num(r.W) + "," + num(b.P) + "," + num(b.D) + "," + num(b.W) + "," +
           opt_num(s.sigma_blue) + "\n";
  }
  write_text(file, out);
}

void write_timeline_csv(const std::filesystem::path& file, const std::vector<MatchupRun>& runs) {
  std::ofstream out;
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  out.open(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << "scenario,red,blue,tick,red_mean,red_lo,red_hi,blue_mean,blue_lo,blue_hi\n";
  for (const auto& s : timeline_series(runs)) {
    const std::string prefix = s.scenario + "," + s.red + "," + s.blue + ",";
    for (std::size_t t = 0; t < s.red_points.size(); ++t) {
      out << prefix << t << "," << num(s.red_points[t].mean) << "," << num(s.red_points[t].lo) << "," << num(s.red_points[t].hi) << ","
          << num(s.blue_points[t].mean) << "," << num(s.blue_points[t].lo) << "," << num(s.blue_points[t].hi) << "\n";
    }
  }
  if (!out) throw std::runtime_error("cannot write " + file.string());
}

void write_plot_data(const std::filesystem::path& file, const std::vector<MatchupRun>& runs) {
  json series = json::array();
  for (const auto& s : timeline_series(runs)) {
    json red = json::array();
    json blue = json::array();
    for (std::size_t t = 0; t < s.red_points.size(); ++t) {
      red.push_back({s.red_points[t].mean, s.red_points[t].lo, s.red_points[t].hi});
      blue.push_back({s.blue_points[t].mean, s.blue_points[t].lo, s.blue_points[t].hi});
    }
    series.push_back({{"scenario", s.scenario}, {"red", s.red}, {"blue", s.blue}, {"duration", s.duration},
                      {"columns", {"mean", "lo", "hi"}}, {"red_points", red}, {"blue_points", blue}});
  }
  json scores = json::array();
  for (const auto& run : runs) {
    json rs = json::array();
    json bs = json::array();
    for (const auto& e : run.episodes) {
      rs.push_back(e.red_score);
      bs.push_back(e.blue_score);
    }
    scores.push_back({{"scenario", run.scenario}, {"red", run.red}, {"blue", run.blue}, {"repeat", run.repeat},
                      {"red_scores", rs}, {"blue_scores", bs}});
  }
  write_text(file, json{{"timelines", series}, {"scores", scores}}.dump() + "\n");
}

void export_run(const std::filesystem::path& run_dir, ExportFormat format) {
  const auto runs = runs_from_results(read_results(run_dir));
  CalibrationTable calibration;
  std::ifstream cin(run_dir / "calibration.json");
  if (cin) {
    const json j = json::parse(cin, nullptr, false);
    if (!j.is_discarded()) {
      for (const auto& e : j.value("entries", json::array())) {
        calibration.set(e.at("scenario").get<std::string>(), e.at("opponent").get<std::string>(),
                        Calibration{e.at("sigma").get<double>(), e.at("scores").get<std::vector<int>>()});
      }
    }
  }
  const auto report = build_report(runs, calibration);
  if (format == ExportFormat::PlotData) {
    write_plot_data(run_dir / "plot_data.json", runs);
    return;
  }
  write_matchup_csv(run_dir / "matchup.csv", report);
  write_timeline_csv(run_dir / "timeline.csv", runs);
  json summary = report.to_json();
  json failures = json::array();
  for (const auto& run : runs) {
    if (!run.failure.empty()) {
      failures.push_back({{"scenario", run.scenario}, {"red", run.red}, {"blue", run.blue}, {"repeat", run.repeat},
                          {"failure", run.failure}});
    }
  }
  summary["failures"] = failures;
  write_text(run_dir / "metrics.json", summary.dump(2) + "\n");
}

}  // namespace teamcraft::harness
