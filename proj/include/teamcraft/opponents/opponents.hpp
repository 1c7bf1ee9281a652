#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "teamcraft/actionlang/primitives.hpp"
#include "teamcraft/api/team.hpp"
#include "teamcraft/world/rng.hpp"

namespace teamcraft::opponents {

class OpponentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Program sources for one team agent, with layout constants substituted.
struct RoleScript {
  std::string role;
  // Runs once at the start of the episode when non-empty.
  std::string opening;
  std::string main;
  // Runs when `main` ends with an error.
  std::string fallback;
};

struct Sabotage {
  bool destroy = false;
  bool place = false;
  // (source crop, target crop) conversions.
  std::vector<std::pair<std::string, std::string>> transforms;
};

struct OpponentSpec {
  std::string name;
  std::string scenario;
  Sabotage sabotage;
  std::vector<RoleScript> agents;
};

inline constexpr std::string_view kDoNothing = "do_nothing";

// Replaces every {{NAME}} with constants[NAME].
std::string substitute(std::string_view text, const std::map<std::string, std::string>& constants);

std::vector<std::string> builtin_names(std::string_view scenario);
OpponentSpec builtin(std::string_view name, std::string_view scenario,
                     const std::map<std::string, std::string>& constants = {});
OpponentSpec do_nothing(std::size_t agents = 2);

// Plays an OpponentSpec: opening once, then main, falling back on errors.
class BuiltinTeam : public api::TeamSystem {
 public:
  explicit BuiltinTeam(std::string name);

  std::string name() const override { return name_; }
  void pre_game(const api::PreGameInfo& info) override;
  api::ProgramChoice next_program(const api::AgentTurn& turn) override;
  void post_game(const api::PostGameInfo&) override {}

  const OpponentSpec& spec() const { return spec_; }

 private:
  enum class Stage : std::uint8_t { Opening, Main, Fallback, Idle };

  std::string name_;
  OpponentSpec spec_;
  std::vector<Stage> stage_;
};

struct RandomPolicyState {
  world::Rng rng{0};
  std::vector<std::string> history;
};

// Argument pools the Random baseline draws from.
struct RandomPools {
  std::vector<std::string> blocks;
  std::vector<std::string> mobs;
  std::vector<std::string> items;
  std::vector<std::string> players;
  std::vector<world::Position> cells;
};

RandomPools random_pools(const api::Observation& obs);

inline constexpr int kRandomAttempts = 32;

// One validated random call, or a wait when nothing valid could be drawn.
std::string random_program(RandomPolicyState& state, const api::Observation& obs,
                           const actionlang::PrimitiveTable& table);

class RandomTeam : public api::TeamSystem {
 public:
  explicit RandomTeam(std::uint64_t seed);

  std::string name() const override { return "random"; }
  void pre_game(const api::PreGameInfo& info) override;
  api::ProgramChoice next_program(const api::AgentTurn& turn) override;
  void post_game(const api::PostGameInfo&) override {}

  const RandomPolicyState& state() const { return state_; }

 private:
  RandomPolicyState state_;
  actionlang::PrimitiveTable table_;
};

}  // namespace teamcraft::opponents
