#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "teamcraft/scenarios/config.hpp"

namespace teamcraft::harness {

inline constexpr int kCalibrationEpisodes = 20;
// Bumped whenever simulation or opponent behaviour changes, so cached baselines
// from older builds are not reused.
inline constexpr std::string_view kCodeVersion = "teamcraft-1";

struct Calibration {
  double sigma = 0.0;
  std::vector<int> scores;
};

// Mean blue score over exactly twenty episodes against a do-nothing red team.
Calibration calibrate_sigma(const scenarios::ScenarioConfig& config, const std::string& blue_opponent,
                            std::uint64_t seed = 0);

// Baselines per (scenario, opponent), optionally backed by a cache file.
class CalibrationTable {
 public:
  CalibrationTable() = default;
  explicit CalibrationTable(std::filesystem::path cache) : cache_(std::move(cache)) { load(); }

  std::optional<double> find(const std::string& scenario, const std::string& opponent) const;
  // Cached value, or a fresh calibration that is then stored.
  double sigma(const scenarios::ScenarioConfig& config, const std::string& opponent);
  void set(const std::string& scenario, const std::string& opponent, Calibration c);

  // Simulations run by this table since construction.
  int simulated() const { return simulated_; }
  nlohmann::json to_json() const;

 private:
  void load();
  void save() const;

  std::filesystem::path cache_;
  std::map<std::pair<std::string, std::string>, Calibration> entries_;
  int simulated_ = 0;
};

}  // namespace teamcraft::harness
