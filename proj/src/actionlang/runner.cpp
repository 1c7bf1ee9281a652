#include <stdexcept>

#include "teamcraft/actionlang/parser.hpp"
#include "teamcraft/actionlang/runtime.hpp"

namespace teamcraft::actionlang {

AgentRunner::AgentRunner(scenarios::Game& game, std::string agent)
    : game_(game), agent_(std::move(agent)), table_(primitive_table(game.config())) {
  if (!game_.world().find_agent(agent_)) throw std::invalid_argument("unknown agent " + agent_);
}

bool AgentRunner::needs_program() const { return !exec_ && !task_; }

world::AgentBody& AgentRunner::self() { return game_.world().agent(agent_); }

void AgentRunner::load(std::shared_ptr<const Program> program) {
  exec_ = start(std::move(program));
  task_.reset();
  end_.reset();
}

void AgentRunner::load_failure(std::string message) {
  exec_.reset();
  task_.reset();
  end_ = ProgramEnd{true, std::move(message), game_.world().tick()};
}

std::optional<ProgramEnd> AgentRunner::take_end() {
  auto out = std::move(end_);
  end_.reset();
  return out;
}

void AgentRunner::finish(const Outcome& outcome) {
  auto& w = game_.world();
  const Tick now = w.tick();
  task_.reset();
  w.post(world::chat_event(now, agent_, outcome.message));
  w.post(world::observe_event(now, w.observe(agent_, game_.config().observe_radius)));
  if (!outcome.ok && exec_) {
    fail(*exec_, outcome.message);
    end_ = ProgramEnd{true, outcome.message, now};
    exec_.reset();
  }
}

void AgentRunner::run_request(const Call& call) {
  const Tick now = game_.world().tick();
  last_start_ = now;
  ++primitives_run_;
  const auto issues = validate_call(call, table_);
  std::unique_ptr<Task> task = issues.empty() ? make_task(call) : nullptr;
  if (!task) {
    finish(Outcome{false, issues.empty() ? "unknown primitive " + call.name : issues.front().message});
    return;
  }
  task_ = std::move(task);
  if (auto done = task_->resume(game_, self())) finish(*done);
  auto& body = self();
  if (!body.busy(now)) body.busy_until = now + 1;
}

void AgentRunner::act() {
  const Tick now = game_.world().tick();
  if (now >= game_.duration() || !exec_) return;
  if (self().busy(now)) return;
  if (task_) {
    auto done = task_->resume(game_, self());
    if (!done) return;
    finish(*done);
    if (!exec_) return;
  }
  if (last_start_ == now) return;
  auto result = step(*exec_, game_.world(), agent_, game_.duration());
  std::visit(
      [&](auto& r) {
        using T = std::decay_t<decltype(r)>;
        auto& body = self();
        if constexpr (std::is_same_v<T, CallRequest>) {
          run_request(*r.call);
        } else if constexpr (std::is_same_v<T, WaitRequest>) {
          last_start_ = now;
          body.busy_until = now + std::max<Tick>(1, r.ticks);
        } else if constexpr (std::is_same_v<T, SayRequest>) {
          last_start_ = now;
          game_.world().post(world::chat_event(now, agent_, r.text));
          body.busy_until = now + std::max<Tick>(1, game_.config().costs.say);
        } else if constexpr (std::is_same_v<T, StepDone>) {
          end_ = ProgramEnd{false, "", now};
          exec_.reset();
        } else {
          end_ = ProgramEnd{true, r.message, now};
          exec_.reset();
        }
      },
      result);
}

void AgentRunner::signal_pass() {
  if (!task_) return;
  const Tick now = game_.world().tick();
  if (auto got = task_->poll_signal(game_, self())) {
    finish(*got);
    self().busy_until = now + 1;
  }
}

ProgramEnd execute_blocking(scenarios::Game& game, std::string_view agent, std::string_view source,
                            std::optional<Tick> max_ticks) {
  auto parsed = parse_source(source);
  if (auto* err = std::get_if<ParseError>(&parsed)) return ProgramEnd{true, err->describe(), game.world().tick()};
  AgentRunner runner(game, std::string(agent));
  runner.load(std::make_shared<const Program>(std::move(std::get<Program>(parsed))));
  const Tick stop = max_ticks ? game.world().tick() + *max_ticks : game.duration();
  while (true) {
    runner.act();
    runner.signal_pass();
    if (auto end = runner.take_end()) return *end;
    if (game.world().tick() >= stop || game.finished()) break;
    game.end_tick();
    game.advance();
  }
  return ProgramEnd{false, "stopped", game.world().tick()};
}

}  // namespace teamcraft::actionlang
