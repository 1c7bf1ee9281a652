#pragma once

#include <optional>
#include <string>
#include <vector>

namespace teamcraft::agents {

inline constexpr std::size_t kMaxTacticsLines = 6;
inline constexpr std::string_view kFallbackTactic = "All players harvest in own area";

struct Tactics {
  std::vector<std::string> lines;

  // Numbered lines, one per row.
  std::string render() const;
  bool operator==(const Tactics&) const = default;
};

struct TacticsParse {
  std::optional<Tactics> tactics;
  bool truncated = false;
  std::string error;
};

// Reads the plan between <tactics> and </tactics>, dropping list numbering.
// Plans longer than six lines are cut to six and flagged.
TacticsParse parse_tactics(const std::string& response);

// The opposing team's plan, or unknown before any evidence.
struct OpponentTactics {
  std::optional<Tactics> tactics;

  bool known() const { return tactics.has_value(); }
  std::string render() const { return tactics ? tactics->render() : "unknown"; }
  bool operator==(const OpponentTactics&) const = default;
};

// nullopt when the response is neither a tagged plan nor "unknown".
std::optional<OpponentTactics> parse_opponent_tactics(const std::string& response);

}  // namespace teamcraft::agents
