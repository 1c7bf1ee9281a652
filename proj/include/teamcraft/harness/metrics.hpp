#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "teamcraft/api/team.hpp"

namespace teamcraft::harness {

// P, S, D and W of one side over N_e episodes, in report units.
struct Metrics {
  int episodes = 0;
  double P = 0.0;
  // Absent when the opponent's unopposed baseline is unknown.
  std::optional<double> S;
  double D = 0.0;
  double W = 0.0;
  bool operator==(const Metrics&) const = default;
};

// `own` and `other` are final scores per episode; `scale` converts raw points to
// report units and applies to the baseline as well.
Metrics compute_metrics(const std::vector<int>& own, const std::vector<int>& other,
                        std::optional<double> sigma_other, double scale = 1.0);

// Mean of each metric over several matchups; S averages the matchups that have it.
Metrics mean_metrics(const std::vector<Metrics>& rows);

nlohmann::json to_json(const Metrics& m);

struct LatencyStats {
  int n_llm = 0;
  std::optional<double> t_resp;
  std::optional<double> n_out;
  std::optional<double> r_tps;
  // Mean roll-out iterations per agent and episode.
  std::optional<double> iterations;
  // T_resp * (I - 1), in seconds.
  std::optional<double> expected_idle_s;
};

LatencyStats latency_stats(const std::vector<api::LlmCallRecord>& calls, const std::vector<int>& iteration_counts);

nlohmann::json to_json(const LatencyStats& s);

}  // namespace teamcraft::harness
