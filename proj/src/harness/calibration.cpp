#include "teamcraft/harness/calibration.hpp"

#include <fstream>

#include "teamcraft/harness/benchmark.hpp"
#include "teamcraft/harness/episode.hpp"
#include "teamcraft/opponents/opponents.hpp"

namespace teamcraft::harness {

using nlohmann::json;

Calibration calibrate_sigma(const scenarios::ScenarioConfig& config, const std::string& blue_opponent,
                            std::uint64_t seed) {
  opponents::BuiltinTeam red{std::string(opponents::kDoNothing)};
  opponents::BuiltinTeam blue{blue_opponent};
  Calibration c;
  double sum = 0.0;
  for (int e = 0; e < kCalibrationEpisodes; ++e) {
    EpisodeOptions options;
    options.episode = e;
    const auto s = episode_seed(seed, config.name, "calibration:" + blue_opponent, 0, e);
    const auto r = run_episode(config, red, blue, s, options);
    c.scores.push_back(r.blue_score);
    sum += r.blue_score;
  }
  c.sigma = sum / kCalibrationEpisodes;
  return c;
}

std::optional<double> CalibrationTable::find(const std::string& scenario, const std::string& opponent) const {
  auto it = entries_.find({scenario, opponent});
  if (it == entries_.end()) return std::nullopt;
  return it->second.sigma;
}

double CalibrationTable::sigma(const scenarios::ScenarioConfig& config, const std::string& opponent) {
  if (auto s = find(config.name, opponent)) return *s;
  auto c = calibrate_sigma(config, opponent);
  ++simulated_;
  const double s = c.sigma;
  set(config.name, opponent, std::move(c));
  return s;
}

void CalibrationTable::set(const std::string& scenario, const std::string& opponent, Calibration c) {
  entries_[{scenario, opponent}] = std::move(c);
  save();
}

json CalibrationTable::to_json() const {
  json entries = json::array();
  for (const auto& [key, c] : entries_) {
    entries.push_back({{"scenario", key.first}, {"opponent", key.second}, {"sigma", c.sigma}, {"scores", c.scores}});
  }
  return {{"code_version", kCodeVersion}, {"episodes", kCalibrationEpisodes}, {"entries", entries}};
}

void CalibrationTable::load() {
  if (cache_.empty()) return;
  std::ifstream in(cache_);
  if (!in) return;
  const json j = json::parse(in, nullptr, false);
  if (j.is_discarded() || j.value("code_version", "") != kCodeVersion) return;
  if (j.value("episodes", 0) != kCalibrationEpisodes) return;
  for (const auto& e : j.value("entries", json::array())) {
    Calibration c;
    c.sigma = e.at("sigma").get<double>();
    c.scores = e.at("scores").get<std::vector<int>>();
    entries_[{e.at("scenario").get<std::string>(), e.at("opponent").get<std::string>()}] = std::move(c);
  }
}

void CalibrationTable::save() const {
  if (cache_.empty()) return;
  if (cache_.has_parent_path()) std::filesystem::create_directories(cache_.parent_path());
  std::ofstream out(cache_);
  out << to_json().dump(2) << "\n";
}

}  // namespace teamcraft::harness
