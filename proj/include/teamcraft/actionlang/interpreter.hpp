#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "teamcraft/actionlang/ast.hpp"
#include "teamcraft/world/types.hpp"

namespace teamcraft::world {
class World;
}

namespace teamcraft::actionlang {

using world::Tick;

// Control statements executed per step before an implicit one-tick wait is
// yielded, so empty loops cannot stall the simulation.
inline constexpr int kControlBudget = 1024;

enum class ExecStatus : std::uint8_t { Running, Done, Error };

struct Frame {
  enum class Kind : std::uint8_t { Block, Repeat, Loop };
  const Block* block = nullptr;
  std::size_t index = 0;
  Kind kind = Kind::Block;
  std::int64_t remaining = 0;
};

struct ExecState {
  std::shared_ptr<const Program> program;
  std::vector<Frame> stack;
  ExecStatus status = ExecStatus::Running;
  // Environment feedback when status is Error.
  std::string error;
};

struct CallRequest {
  const Call* call = nullptr;
};
struct WaitRequest {
  Tick ticks = 1;
};
struct SayRequest {
  std::string text;
};
struct StepDone {};
struct StepError {
  std::string message;
};

using StepResult = std::variant<CallRequest, WaitRequest, SayRequest, StepDone, StepError>;

ExecState start(std::shared_ptr<const Program> program);

// Advances control flow to the next request. `inventory` answers has().
StepResult step(ExecState& exec, const world::Inventory& inventory, Tick now, Tick duration);
StepResult step(ExecState& exec, const world::World& world, std::string_view agent, Tick duration);

// Marks the state as failed with environment feedback.
void fail(ExecState& exec, std::string message);

}  // namespace teamcraft::actionlang
