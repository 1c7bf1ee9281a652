#include "teamcraft/agents/tacticrafter.hpp"

#include "teamcraft/actionlang/parser.hpp"
#include "teamcraft/agents/events.hpp"
#include "teamcraft/agents/extract.hpp"

namespace teamcraft::agents {

namespace {

std::string join(const std::vector<std::string>& items, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::string graph_text(const CausalGraph& g) { return g.empty() ? "(none yet)\n" : g.serialize(); }

// One call, answered or not; transport failures read as an empty response.
std::string ask(ModelCaller& model, const std::string& purpose, const std::string& prompt,
                const std::map<std::string, std::string>& meta) {
  try {
    return model.call(purpose, prompt, meta).text;
  } catch (const TransportError&) {
    return {};
  }
}

std::optional<Tactics> ask_tactics(ModelCaller& model, const std::string& purpose, const std::string& prompt,
                                   const std::map<std::string, std::string>& meta) {
  for (int attempt = 0; attempt < 2; ++attempt) {
    auto parsed = parse_tactics(ask(model, purpose, prompt, meta));
    if (parsed.tactics) return parsed.tactics;
  }
  return std::nullopt;
}

std::optional<std::vector<CausalRelation>> ask_relations(ModelCaller& model, const std::string& purpose,
                                                         const std::string& prompt,
                                                         const std::map<std::string, std::string>& meta) {
  for (int attempt = 0; attempt < 2; ++attempt) {
    if (auto parsed = parse_model_relations(ask(model, purpose, prompt, meta))) return parsed;
  }
  return std::nullopt;
}

bool program_ok(const std::string& source, const actionlang::PrimitiveTable& table) {
  auto parsed = actionlang::parse_source(source);
  const auto* program = std::get_if<actionlang::Program>(&parsed);
  return program && !program->body.empty() && actionlang::validate(*program, table).empty();
}

std::string end_text(const std::optional<api::ProgramEndInfo>& end) {
  if (!end) return "(not run yet)";
  if (end->error) return "Error at " + format_seconds(end->tick) + ": " + end->message;
  return "Finished without error at " + format_seconds(end->tick) + ".";
}

}  // namespace

GameDescription GameDescription::from(const api::PreGameInfo& info) {
  GameDescription d;
  d.scenario = info.scenario.name;
  d.team = std::string(world::to_string(info.team));
  d.objective = info.scenario.objective;
  d.description = info.scenario.description;
  d.agents = info.agents;
  d.primitives = info.scenario.primitives;
  d.reference = info.scenario.reference;
  d.constants = info.scenario.constants;
  d.opponent_team = std::string(world::to_string(world::opponent_of(info.team)));
  d.opponent_objective = info.scenario.opponent_objective;
  d.opponent_agents = info.opponent_agents;
  return d;
}

std::string GameDescription::agents_text() const { return join(agents, ", "); }

std::string GameDescription::constants_text() const {
  std::string out;
  for (const auto& [k, v] : constants) out += k + " = " + v + "\n";
  return out.empty() ? "(none)\n" : out;
}

std::map<std::string, std::string> GameDescription::meta() const {
  std::map<std::string, std::string> m{{"scenario", scenario}, {"team", team}, {"agents", join(agents, ",")}};
  for (const auto& [k, v] : constants) m["const." + k] = v;
  return m;
}

History make_history(const std::vector<std::vector<Event>>& agent_logs, const std::vector<Event>& team_events,
                     const Tactics& tactics, const OpponentTactics& opponent, int own_score, int opponent_score) {
  History h;
  if (!agent_logs.empty()) h.log = dedup_events(agent_logs[select_longest_log(agent_logs)]);
  h.team_events = dedup_events(team_events);
  h.tactics = tactics;
  h.opponent_tactics = opponent;
  h.own_score = own_score;
  h.opponent_score = opponent_score;
  return h;
}

Tactics tactics_init(ModelCaller& model, const Templates& templates, const GameDescription& d,
                     const CausalGraph& g) {
  const std::string prompt = templates.fill("p_a", {{"team", d.team},
                                                    {"description", d.description},
                                                    {"objective", d.objective},
                                                    {"agents", d.agents_text()},
                                                    {"primitives", d.reference},
                                                    {"causal_graph", graph_text(g)}});
  if (auto t = ask_tactics(model, "tactics_init", prompt, d.meta())) return *t;
  return Tactics{{std::string(kFallbackTactic)}};
}

Tactics tactics_update(ModelCaller& model, const Templates& templates, const GameDescription& d, const History& h,
                       const CausalGraph& g, const OpponentTactics& o) {
  const std::string score = "your team " + std::to_string(h.own_score) + " points, the opposing team " +
                            std::to_string(h.opponent_score) + " points";
  const std::string prompt = templates.fill("p_b", {{"team", d.team},
                                                    {"description", d.description},
                                                    {"objective", d.objective},
                                                    {"agents", d.agents_text()},
                                                    {"primitives", d.reference},
                                                    {"causal_graph", graph_text(g)},
                                                    {"score", score},
                                                    {"previous_tactics", h.tactics.render()},
                                                    {"opponent_tactics", o.render()},
                                                    {"history", render_team_history(h.team_events, d.agents)}});
  auto meta = d.meta();
  meta["opponent_known"] = o.known() ? "1" : "0";
  if (auto t = ask_tactics(model, "tactics_update", prompt, meta)) return *t;
  return h.tactics.lines.empty() ? Tactics{{std::string(kFallbackTactic)}} : h.tactics;
}

CausalGraph causal_init(ModelCaller& model, const Templates& templates, const GameDescription& d) {
  const std::string prompt =
      templates.fill("p_c", {{"description", d.description}, {"primitives", d.reference}});
  CausalGraph g;
  if (auto relations = ask_relations(model, "causal_init", prompt, d.meta())) {
    for (auto& r : *relations) g.add(std::move(r));
  }
  add_primitive_stubs(g, actionlang::PrimitiveTable(d.primitives));
  return g;
}

CausalGraph causal_update(ModelCaller& model, const Templates& templates, const GameDescription& d,
                          const History& h, const CausalGraph& g) {
  const std::string prompt = templates.fill("p_d", {{"description", d.description},
                                                    {"causal_graph", graph_text(g)},
                                                    {"member_history", render_member_pairs(h.team_events, d.agents)}});
  auto meta = d.meta();
  meta["known_relations"] = std::to_string(g.size());
  CausalGraph fresh;
  if (auto relations = ask_relations(model, "causal_update", prompt, meta)) {
    for (auto& r : *relations) fresh.add(std::move(r));
  }
  return graph_union(g, fresh);
}

OpponentTactics opponent_update(ModelCaller& model, const Templates& templates, const GameDescription& d,
                                const History& h, const CausalGraph& g, const OpponentTactics& previous) {
  const std::set<std::string> senders(d.opponent_agents.begin(), d.opponent_agents.end());
  const std::string chat = render_chat_from(h.log, senders);
  const std::string prompt = templates.fill("p_e", {{"description", d.description},
                                                    {"opponent_team", d.opponent_team},
                                                    {"opponent_objective", d.opponent_objective},
                                                    {"causal_graph", graph_text(g)},
                                                    {"previous_opponent_tactics", previous.render()},
                                                    {"opponent_chat", chat}});
  auto meta = d.meta();
  meta["opponent_chat"] = chat;
  for (int attempt = 0; attempt < 2; ++attempt) {
    if (auto parsed = parse_opponent_tactics(ask(model, "opponent", prompt, meta))) {
      return parsed->known() ? *parsed : previous;
    }
  }
  return previous;
}

nlohmann::json Checkpoint::to_json() const {
  nlohmann::json j;
  j["version"] = kVersion;
  j["scenario"] = scenario;
  j["episodes"] = episodes;
  j["tactics"] = tactics.lines;
  j["causal_graph"] = nlohmann::json::array();
  for (const auto& r : graph.relations()) j["causal_graph"].push_back(format_relation(r));
  j["opponent_tactics"] = opponent.known() ? nlohmann::json(opponent.tactics->lines) : nlohmann::json("unknown");
  return j;
}

Checkpoint Checkpoint::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("version")) throw CheckpointError("checkpoint has no version");
  if (j.at("version") != kVersion) {
    throw CheckpointError("checkpoint version " + j.at("version").dump() + " is not supported (expected " +
                          std::to_string(kVersion) + ")");
  }
  try {
    Checkpoint cp;
    cp.scenario = j.value("scenario", "");
    cp.episodes = j.value("episodes", 0);
    cp.tactics.lines = j.value("tactics", std::vector<std::string>{});
    if (cp.tactics.lines.size() > kMaxTacticsLines) throw CheckpointError("checkpoint tactics exceed six lines");
    int line = 0;
    for (const auto& text : j.value("causal_graph", std::vector<std::string>{})) {
      ++line;
      auto r = parse_relation_line(text);
      if (!r) throw CheckpointError("bad causal relation " + std::to_string(line) + " in checkpoint");
      cp.graph.add(std::move(*r));
    }
    const auto& opp = j.at("opponent_tactics");
    if (opp.is_array()) cp.opponent.tactics = Tactics{opp.get<std::vector<std::string>>()};
    return cp;
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError(std::string("malformed checkpoint: ") + e.what());
  }
}

std::string Checkpoint::dump() const { return to_json().dump(2) + "\n"; }

Checkpoint Checkpoint::load(const std::string& text) {
  const auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) throw CheckpointError("checkpoint is not valid JSON");
  return from_json(j);
}

TactiCrafter::TactiCrafter(std::shared_ptr<ChatClient> client, Templates templates, std::string model)
    : model_(std::move(client), std::move(model)), templates_(std::move(templates)) {}

void TactiCrafter::pre_game(const api::PreGameInfo& info) {
  desc_ = GameDescription::from(info);
  table_ = actionlang::PrimitiveTable(desc_.primitives);
  scenario_ = desc_.scenario;
  if (episodes_ == 0 && tactics_.lines.empty()) {
    graph_ = causal_init(model_, templates_, desc_);
    tactics_ = tactics_init(model_, templates_, desc_, graph_);
  }
  agents_.clear();
  stat_iterations_.assign(info.agents.size(), 0);
  for (std::size_t slot = 0; slot < info.agents.size(); ++slot) {
    AgentState a;
    a.name = info.agents[slot];
    if (auto it = info.observations.find(a.name); it != info.observations.end()) a.observation = it->second;
    agents_.push_back(std::move(a));
  }
  for (std::size_t slot = 0; slot < agents_.size(); ++slot) {
    agents_[slot].first_program = generate(agents_[slot], slot, "(none)", "(not run yet)").first;
  }
}

std::pair<std::string, double> TactiCrafter::generate(AgentState& agent, std::size_t slot,
                                                      const std::string& last_program,
                                                      const std::string& last_error) {
  auto meta = desc_.meta();
  meta["agent"] = agent.name;
  meta["slot"] = std::to_string(slot);
  meta["iteration"] = std::to_string(agent.iterations + 1);
  meta["episode"] = std::to_string(episodes_ + 1);
  double latency = 0.0;
  for (int attempt = 0; attempt < kMaxParseFailures; ++attempt) {
    meta["attempt"] = std::to_string(attempt + 1);
    const std::string prompt =
        templates_.fill("p_f", {{"agent", agent.name},
                                {"team", desc_.team},
                                {"description", desc_.description},
                                {"objective", desc_.objective},
                                {"tactics", tactics_.render()},
                                {"primitives", desc_.reference},
                                {"constants", desc_.constants_text()},
                                {"state", render_observation(agent.observation)},
                                {"last_program", last_program},
                                {"last_error", last_error},
                                {"critique", agent.critique.empty() ? "(none)" : agent.critique}});
    std::string text;
    try {
      auto response = model_.call("action", prompt, meta);
      latency += response.latency_s;
      text = response.text;
    } catch (const TransportError&) {
      continue;
    }
    if (auto source = extract_program(text); source && program_ok(*source, table_)) return {*source, latency};
  }
  agent.waiting = true;
  return {std::string(kWaitLoop), latency};
}

std::string TactiCrafter::critique(AgentState& agent, std::size_t slot, const std::string& last_program,
                                   const std::string& last_error) {
  auto meta = desc_.meta();
  meta["agent"] = agent.name;
  meta["slot"] = std::to_string(slot);
  meta["iteration"] = std::to_string(agent.iterations + 1);
  meta["last_error"] = last_error;
  const std::string prompt = templates_.fill("p_g", {{"agent", agent.name},
                                                     {"tactics", tactics_.render()},
                                                     {"chat_log", render_chat(dedup_events(agent.log), 60)},
                                                     {"state", render_observation(agent.observation)},
                                                     {"last_program", last_program},
                                                     {"last_error", last_error}});
  const std::string text = ask(model_, "critic", prompt, meta);
  return text.empty() ? "(no critique)" : text;
}

api::ProgramChoice TactiCrafter::next_program(const api::AgentTurn& turn) {
  if (turn.slot >= agents_.size()) return {std::string(kWaitLoop), 0};
  auto& agent = agents_[turn.slot];
  agent.log.insert(agent.log.end(), turn.new_events.begin(), turn.new_events.end());
  agent.observation = turn.observation;
  ++agent.iterations;
  stat_iterations_[turn.slot] = agent.iterations;

  if (agent.first_program) {
    std::string first = std::move(*agent.first_program);
    agent.first_program.reset();
    return {first, 0};
  }
  if (agent.waiting) return {std::string(kWaitLoop), 0};

  const std::string last_error = end_text(turn.last_end);
  agent.critique = critique(agent, turn.slot, turn.last_program, last_error);
  auto [source, latency] = generate(agent, turn.slot, turn.last_program, last_error);
  const world::Tick idle = latency_ticks(latency);
  stat_idle_ += idle;
  return {source, idle};
}

void TactiCrafter::post_game(const api::PostGameInfo& info) {
  std::vector<std::vector<Event>> logs;
  for (const auto& a : agents_) logs.push_back(agent_view(info.events, a.name));
  const History h = make_history(logs, info.events, tactics_, opponent_, info.own_score, info.opponent_score);
  ++episodes_;
  graph_ = causal_update(model_, templates_, desc_, h, graph_);
  opponent_ = opponent_update(model_, templates_, desc_, h, graph_, opponent_);
  tactics_ = tactics_update(model_, templates_, desc_, h, graph_, opponent_);
}

api::TeamStats TactiCrafter::take_stats() {
  api::TeamStats s;
  s.calls = model_.take_records();
  s.iterations = stat_iterations_;
  s.idle_ticks = stat_idle_;
  stat_idle_ = 0;
  return s;
}

Checkpoint TactiCrafter::checkpoint() const {
  Checkpoint cp;
  cp.scenario = scenario_;
  cp.episodes = episodes_;
  cp.tactics = tactics_;
  cp.graph = graph_;
  cp.opponent = opponent_;
  return cp;
}

void TactiCrafter::restore(const Checkpoint& cp) {
  scenario_ = cp.scenario;
  episodes_ = cp.episodes;
  tactics_ = cp.tactics;
  graph_ = cp.graph;
  opponent_ = cp.opponent;
}

}  // namespace teamcraft::agents
