#include "teamcraft/actionlang/interpreter.hpp"

#include <algorithm>

#include "teamcraft/actionlang/primitives.hpp"
#include "teamcraft/world/world.hpp"

namespace teamcraft::actionlang {

ExecState start(std::shared_ptr<const Program> program) {
  ExecState s;
  s.program = std::move(program);
  if (s.program) s.stack.push_back(Frame{&s.program->body, 0, Frame::Kind::Block, 0});
  return s;
}

void fail(ExecState& exec, std::string message) {
  exec.status = ExecStatus::Error;
  exec.error = std::move(message);
  exec.stack.clear();
}

StepResult step(ExecState& exec, const world::Inventory& inventory, Tick now, Tick duration) {
  if (exec.status == ExecStatus::Done) return StepDone{};
  if (exec.status == ExecStatus::Error) return StepError{exec.error};
  if (now >= duration) {
    exec.status = ExecStatus::Done;
    exec.stack.clear();
    return StepDone{};
  }
  for (int budget = kControlBudget; budget > 0; --budget) {
    if (exec.stack.empty()) {
      exec.status = ExecStatus::Done;
      return StepDone{};
    }
    Frame& f = exec.stack.back();
    if (f.index >= f.block->size()) {
      if (f.kind == Frame::Kind::Repeat && --f.remaining > 0) {
        f.index = 0;
      } else if (f.kind == Frame::Kind::Loop) {
        f.index = 0;
      } else {
        exec.stack.pop_back();
      }
      continue;
    }
    const Statement& s = (*f.block)[f.index++];
    if (const auto* c = std::get_if<Call>(&s.node)) {
      if (c->name == "wait" && c->args.size() == 1 && c->args[0].is_int()) {
        return WaitRequest{std::max<Tick>(1, c->args[0].integer())};
      }
      if (c->name == "say" && c->args.size() == 1 && c->args[0].is_string()) return SayRequest{c->args[0].str()};
      return CallRequest{c};
    }
    if (const auto* r = std::get_if<Repeat>(&s.node)) {
      if (r->count > 0 && !r->body.empty()) exec.stack.push_back(Frame{&r->body, 0, Frame::Kind::Repeat, r->count});
      continue;
    }
    if (const auto* l = std::get_if<Loop>(&s.node)) {
      exec.stack.push_back(Frame{&l->body, 0, Frame::Kind::Loop, 0});
      continue;
    }
    const auto& node = std::get<If>(s.node);
    if (!valid_item_id(node.cond.item)) {
      const std::string msg = "has() got a malformed item id '" + node.cond.item + "'";
      fail(exec, msg);
      return StepError{msg};
    }
    const bool holds = inventory.count(node.cond.item) >= node.cond.count;
    const Block& chosen = holds != node.cond.negated ? node.then_block : node.else_block;
    if (!chosen.empty()) exec.stack.push_back(Frame{&chosen, 0, Frame::Kind::Block, 0});
  }
  return WaitRequest{1};
}

StepResult step(ExecState& exec, const world::World& world, std::string_view agent, Tick duration) {
  return step(exec, world.agent(agent).inventory, world.tick(), duration);
}

}  // namespace teamcraft::actionlang
