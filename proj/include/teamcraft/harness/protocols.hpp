#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "teamcraft/harness/benchmark.hpp"

namespace teamcraft::harness {

inline constexpr int kAdaptationTrainEpisodes = 5;
inline constexpr int kSelfPlayEpisodes = 20;
inline constexpr int kCheckpointEvery = 5;

// One episode played from a checkpoint.
struct EvaluationEpisode {
  std::string scenario;
  // Opponent the checkpoint was trained against; empty for self-play.
  std::string trained_against;
  std::string opponent;
  int checkpoint_episode = 0;
  int repeat = 0;
  int red_score = 0;
  int blue_score = 0;
};

struct AdaptationRow {
  // mushroom_war, dash_and_dine, ... or "avg".
  std::string scenario;
  // "same" or "different".
  std::string kind;
  Metrics metrics;
};

struct AdaptationReport {
  std::vector<EvaluationEpisode> evaluations;
  std::vector<AdaptationRow> rows;
  nlohmann::json to_json() const;
};

// Per opponent: train five episodes, checkpoint, then play one episode from the
// checkpoint against every opponent. Uses config.scenarios, config.opponents,
// config.repeats, config.seeds and config.client; the red system is always
// TactiCrafter.
AdaptationReport adaptation_protocol(const RunConfig& config, const std::filesystem::path& run_dir);

struct CheckpointEvaluation {
  int after_episode = 0;
  std::vector<EvaluationEpisode> episodes;
  Metrics metrics;
};

struct SelfPlaySeries {
  std::string scenario;
  int repeat = 0;
  std::vector<int> red_scores;
  std::vector<int> blue_scores;
  std::vector<CheckpointEvaluation> checkpoints;
};

struct SelfPlayReport {
  std::vector<SelfPlaySeries> series;
  nlohmann::json to_json() const;
};

// Twenty episodes of TactiCrafter against a second TactiCrafter, with the red
// side checkpointed every five episodes and each checkpoint evaluated once
// against every opponent.
SelfPlayReport self_play_protocol(const RunConfig& config, const std::filesystem::path& run_dir);

}  // namespace teamcraft::harness
