#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "teamcraft/actionlang/interpreter.hpp"
#include "teamcraft/actionlang/primitives.hpp"
#include "teamcraft/scenarios/game.hpp"

namespace teamcraft::actionlang {

struct Outcome {
  bool ok = true;
  std::string message;
};

// A primitive in flight. resume() runs whenever the agent is not busy; it
// either sets busy_until past the current tick and returns nullopt, or
// returns the finished outcome.
class Task {
 public:
  virtual ~Task() = default;
  virtual std::optional<Outcome> resume(scenarios::Game& game, world::AgentBody& self) = 0;
  // Lets a blocked waitSignal finish in the tick its signal arrives.
  virtual std::optional<Outcome> poll_signal(scenarios::Game&, world::AgentBody&) { return std::nullopt; }
};

// Builds the task for a call that already passed validate_call.
std::unique_ptr<Task> make_task(const Call& call);

PrimitiveTable primitive_table(const scenarios::ScenarioConfig& config);

struct ProgramEnd {
  bool error = false;
  std::string message;
  Tick tick = 0;
};

// Drives one agent's program against the game, one tick at a time.
class AgentRunner {
 public:
  AgentRunner(scenarios::Game& game, std::string agent);

  const std::string& agent() const { return agent_; }
  bool needs_program() const;
  void load(std::shared_ptr<const Program> program);
  // Ends the current slot immediately with `message` (e.g. a parse error).
  void load_failure(std::string message);

  // This agent's share of the current tick.
  void act();
  // Second pass of a tick: completes waitSignal calls whose signal arrived.
  void signal_pass();

  std::optional<ProgramEnd> take_end();
  int primitives_run() const { return primitives_run_; }

 private:
  world::AgentBody& self();
  void finish(const Outcome& outcome);
  void run_request(const Call& call);

  scenarios::Game& game_;
  std::string agent_;
  PrimitiveTable table_;
  std::optional<ExecState> exec_;
  std::unique_ptr<Task> task_;
  std::optional<ProgramEnd> end_;
  Tick last_start_ = -1;
  int primitives_run_ = 0;
};

// Runs one program for one agent to completion (or `max_ticks`), stepping
// the game clock; other agents stay idle. Intended for tests and tools.
ProgramEnd execute_blocking(scenarios::Game& game, std::string_view agent, std::string_view source,
                            std::optional<Tick> max_ticks = std::nullopt);

}  // namespace teamcraft::actionlang
