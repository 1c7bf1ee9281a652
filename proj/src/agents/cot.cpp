#include "teamcraft/agents/cot.hpp"

#include "teamcraft/actionlang/parser.hpp"
#include "teamcraft/agents/events.hpp"
#include "teamcraft/agents/extract.hpp"

namespace teamcraft::agents {

std::map<std::string, std::string> cot_baseline(ModelCaller& model, const Templates& templates,
                                                const GameDescription& d,
                                                const std::map<std::string, world::Observation>& observations,
                                                const std::string& last_code, const std::string& last_error,
                                                const std::string& chat_log) {
  std::string nearby;
  for (const auto& agent : d.agents) {
    nearby += agent + ":\n";
    auto it = observations.find(agent);
    nearby += it == observations.end() ? "(no observation)\n" : render_observation(it->second);
  }
  const std::string prompt = templates.fill("p_h", {{"team", d.team},
                                                    {"agents", d.agents_text()},
                                                    {"description", d.description},
                                                    {"objective", d.objective},
                                                    {"primitives", d.reference},
                                                    {"constants", d.constants_text()},
                                                    {"nearby", nearby},
                                                    {"last_code", last_code},
                                                    {"last_error", last_error},
                                                    {"chat_log", chat_log}});
  std::string text;
  try {
    text = model.call("cot", prompt, d.meta()).text;
  } catch (const TransportError&) {
  }
  const auto tagged = extract_tagged_programs(text);
  const actionlang::PrimitiveTable table(d.primitives);
  std::map<std::string, std::string> out;
  for (const auto& agent : d.agents) {
    out[agent] = std::string(kWaitLoop);
    auto it = tagged.find(agent);
    if (it == tagged.end()) continue;
    auto parsed = actionlang::parse_source(it->second);
    const auto* program = std::get_if<actionlang::Program>(&parsed);
    if (program && !program->body.empty() && actionlang::validate(*program, table).empty()) out[agent] = it->second;
  }
  return out;
}

CotTeam::CotTeam(std::shared_ptr<ChatClient> client, Templates templates, std::string model)
    : model_(std::move(client), std::move(model)), templates_(std::move(templates)) {}

void CotTeam::pre_game(const api::PreGameInfo& info) {
  const auto d = GameDescription::from(info);
  agents_ = info.agents;
  programs_ = cot_baseline(model_, templates_, d, info.observations, last_code_.empty() ? "(none)" : last_code_,
                           last_error_.empty() ? "(none)" : last_error_, chat_log_.empty() ? "(none)" : chat_log_);
  errors_.clear();
  iterations_.assign(agents_.size(), 0);
}

api::ProgramChoice CotTeam::next_program(const api::AgentTurn& turn) {
  if (turn.slot < iterations_.size()) iterations_[turn.slot] = 1;
  if (turn.last_end && turn.last_end->error && !errors_.count(turn.agent)) {
    errors_[turn.agent] = turn.last_end->message;
  }
  if (turn.iteration == 1) {
    auto it = programs_.find(turn.agent);
    if (it != programs_.end()) return {it->second, 0};
  }
  return {std::string(kWaitLoop), 0};
}

void CotTeam::post_game(const api::PostGameInfo& info) {
  last_code_.clear();
  last_error_.clear();
  for (const auto& agent : agents_) {
    last_code_ += agent + ":\n" + programs_[agent];
    if (auto it = errors_.find(agent); it != errors_.end()) last_error_ += agent + ": " + it->second + "\n";
  }
  chat_log_ = render_chat(dedup_events(info.events), 120);
}

api::TeamStats CotTeam::take_stats() {
  api::TeamStats s;
  s.calls = model_.take_records();
  s.iterations = iterations_;
  return s;
}

}  // namespace teamcraft::agents
