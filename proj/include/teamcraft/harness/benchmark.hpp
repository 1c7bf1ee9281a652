#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "teamcraft/harness/calibration.hpp"
#include "teamcraft/harness/episode.hpp"
#include "teamcraft/harness/metrics.hpp"
#include "teamcraft/harness/run_config.hpp"

namespace teamcraft::harness {

// Seed of one episode, derived from everything that identifies it so that any
// episode can be replayed on its own.
std::uint64_t episode_seed(std::uint64_t run_seed, const std::string& scenario, const std::string& matchup,
                           int repeat, int episode);

std::string matchup_id(const std::string& red, const std::string& blue);
// Selector text made safe for file names.
std::string path_safe(const std::string& text);

// Consecutive episodes of one red/blue pairing with persistent systems.
struct MatchupRun {
  std::string scenario;
  std::string red;
  std::string blue;
  int repeat = 0;
  std::uint64_t run_seed = 0;
  // Results without event logs.
  std::vector<EpisodeResult> episodes;
  std::string failure;
};

struct MatchupSummary {
  std::string scenario;
  std::string red;
  std::string blue;
  Metrics red_metrics;
  Metrics blue_metrics;
  std::optional<double> sigma_blue;
};

struct MetricsReport {
  std::vector<MatchupSummary> matchups;
  // Per scenario and red system, averaged over opponents.
  std::map<std::pair<std::string, std::string>, Metrics> per_scenario;
  // Per red system over every scenario.
  std::map<std::string, Metrics> overall;
  std::map<std::pair<std::string, std::string>, LatencyStats> latency;

  nlohmann::json to_json() const;
};

MetricsReport build_report(const std::vector<MatchupRun>& runs, const CalibrationTable& calibration);

struct BenchmarkResult {
  std::filesystem::path run_dir;
  std::vector<MatchupRun> runs;
  MetricsReport report;
  int failed = 0;
  int episodes = 0;
};

BenchmarkResult run_benchmark(const RunConfig& config);

// A fresh run folder under `output`, named after the run and the clock.
std::filesystem::path make_run_dir(const std::filesystem::path& output, const std::string& name);

// Matchup CSV, timeline CSV and metrics summary from the results in a run folder.
enum class ExportFormat { Csv, PlotData };
void export_run(const std::filesystem::path& run_dir, ExportFormat format = ExportFormat::Csv);

// Groups episode results back into matchup runs.
std::vector<MatchupRun> runs_from_results(const std::vector<nlohmann::json>& lines);
std::vector<nlohmann::json> read_results(const std::filesystem::path& run_dir);

void write_matchup_csv(const std::filesystem::path& file, const MetricsReport& report);
void write_timeline_csv(const std::filesystem::path& file, const std::vector<MatchupRun>& runs);
void write_plot_data(const std::filesystem::path& file, const std::vector<MatchupRun>& runs);

void write_text(const std::filesystem::path& file, const std::string& text);

}  // namespace teamcraft::harness
