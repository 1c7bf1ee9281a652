#include <chrono>

#include "teamcraft/actionlang/parser.hpp"
#include "teamcraft/actionlang/runtime.hpp"
#include "teamcraft/harness/episode.hpp"

namespace teamcraft::harness {

namespace {

using nlohmann::json;

struct Seat {
  std::string agent;
  Team team = Team::Neutral;
  std::size_t slot = 0;
  api::TeamSystem* system = nullptr;
  std::unique_ptr<actionlang::AgentRunner> runner;
  std::size_t cursor = 0;
  int iterations = 0;
  int errors = 0;
  std::string last_program;
  std::string failure;
  std::optional<actionlang::ProgramEnd> pending_end;
};

std::vector<std::string> team_agents(const world::World& w, Team team) {
  std::vector<std::string> out;
  for (const auto& a : w.agents()) {
    if (a.team == team && !a.is_server) out.push_back(a.name);
  }
  return out;
}

std::string server_of(const world::World& w, Team team) {
  for (const auto& a : w.agents()) {
    if (a.team == team && a.is_server) return a.name;
  }
  return {};
}

json timeline_json(const std::vector<std::pair<Tick, int>>& t) {
  json out = json::array();
  for (const auto& [tick, pts] : t) out.push_back({tick, pts});
  return out;
}

json stats_json(const api::TeamStats& s) {
  json calls = json::array();
  for (const auto& c : s.calls) {
    calls.push_back({{"purpose", c.purpose}, {"agent", c.agent}, {"latency_s", c.latency_s}, {"output_tokens", c.output_tokens}});
  }
  return {{"calls", calls}, {"iterations", s.iterations}, {"idle_ticks", s.idle_ticks}};
}

api::TeamStats stats_from_json(const json& j) {
  api::TeamStats s;
  for (const auto& c : j.at("calls")) {
    s.calls.push_back({c.at("purpose").get<std::string>(), c.at("agent").get<std::string>(), c.at("latency_s").get<double>(),
                       c.at("output_tokens").get<int>()});
  }
  s.iterations = j.at("iterations").get<std::vector<int>>();
  s.idle_ticks = j.at("idle_ticks").get<Tick>();
  return s;
}

}  // namespace

std::string_view to_string(Winner w) {
  switch (w) {
    case Winner::Red:
      return "red";
    case Winner::Blue:
      return "blue";
    case Winner::Draw:
      break;
  }
  return "draw";
}

Winner winner_of(int red, int blue) {
  if (red > blue) return Winner::Red;
  if (blue > red) return Winner::Blue;
  return Winner::Draw;
}

std::uint64_t EpisodeResult::digest() const {
  json j = json::array();
  for (const auto& e : events) j.push_back(e);
  j.push_back({red_score, blue_score});
  return world::fnv1a(j.dump());
}

json to_json(const EpisodeResult& r, bool with_events) {
  json agents = json::array();
  for (const auto& a : r.agents) {
    agents.push_back({{"agent", a.agent}, {"team", world::to_string(a.team)}, {"iterations", a.iterations},
                      {"primitives", a.primitives}, {"errors", a.errors}, {"failure", a.failure}});
  }
  json audit = json::array();
  for (const auto& s : r.audit) {
    audit.push_back({{"tick", s.tick}, {"team", world::to_string(s.team)}, {"agent", s.agent}, {"item", s.item},
                     {"count", s.count}, {"points", s.points}, {"source", s.source}});
  }
  json j{{"scenario", r.scenario},
         {"red_system", r.red_system},
         {"blue_system", r.blue_system},
         {"episode", r.episode},
         {"seed", r.seed},
         {"red_score", r.red_score},
         {"blue_score", r.blue_score},
         {"winner", to_string(r.winner)},
         {"duration", r.duration},
         {"red_timeline", timeline_json(r.red_timeline)},
         {"blue_timeline", timeline_json(r.blue_timeline)},
         {"audit", audit},
         {"red_stats", stats_json(r.red_stats)},
         {"blue_stats", stats_json(r.blue_stats)},
         {"agents", agents},
         {"digest", r.digest()}};
  if (with_events) j["events"] = r.events;
  return j;
}

EpisodeResult episode_from_json(const json& j) {
  EpisodeResult r;
  r.scenario = j.at("scenario").get<std::string>();
  r.red_system = j.at("red_system").get<std::string>();
  r.blue_system = j.at("blue_system").get<std::string>();
  r.episode = j.at("episode").get<int>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.red_score = j.at("red_score").get<int>();
  r.blue_score = j.at("blue_score").get<int>();
  r.winner = winner_of(r.red_score, r.blue_score);
  r.duration = j.at("duration").get<Tick>();
  for (const auto& p : j.at("red_timeline")) r.red_timeline.emplace_back(p.at(0).get<Tick>(), p.at(1).get<int>());
  for (const auto& p : j.at("blue_timeline")) r.blue_timeline.emplace_back(p.at(0).get<Tick>(), p.at(1).get<int>());
  for (const auto& s : j.at("audit")) {
    r.audit.push_back({s.at("tick").get<Tick>(), world::team_from_string(s.at("team").get<std::string>()),
                       s.at("agent").get<std::string>(), s.at("item").get<std::string>(), s.at("count").get<int>(),
                       s.at("points").get<int>(), s.at("source").get<std::string>()});
  }
  r.red_stats = stats_from_json(j.at("red_stats"));
  r.blue_stats = stats_from_json(j.at("blue_stats"));
  for (const auto& a : j.at("agents")) {
    r.agents.push_back({a.at("agent").get<std::string>(), world::team_from_string(a.at("team").get<std::string>()),
                        a.at("iterations").get<int>(), a.at("primitives").get<int>(), a.at("errors").get<int>(),
                        a.at("failure").get<std::string>()});
  }
  if (j.contains("events")) r.events = j.at("events").get<std::vector<world::Event>>();
  return r;
}

api::ScenarioInfo scenario_info(const scenarios::ScenarioConfig& config, Team team) {
  api::ScenarioInfo info;
  info.name = config.name;
  info.title = config.title;
  info.description = config.description;
  info.objective = config.objective_for(team);
  info.opponent_objective = config.objective_for(world::opponent_of(team));
  info.duration_ticks = config.duration_ticks;
  info.report_scale = config.report_scale;
  info.primitives = config.primitives;
  info.reference = actionlang::reference_text(actionlang::primitive_table(config));
  for (const auto& [name, per_team] : config.layout.constants) {
    auto it = per_team.find(team);
    if (it != per_team.end()) info.constants[name] = it->second;
  }
  return info;
}

bool visible_to(const world::Event& e, const world::World& w, Team team) {
  if (e.kind == world::EventKind::Chat) return true;
  const auto* a = w.find_agent(e.sender);
  return a && a->team == team;
}

EpisodeResult run_episode(const scenarios::ScenarioConfig& config, api::TeamSystem& red, api::TeamSystem& blue,
                          std::uint64_t seed, const EpisodeOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  scenarios::Game game(config, seed);
  auto& w = game.world();

  std::vector<Seat> seats;
  std::string pre_failure[2];
  for (Team team : {Team::Red, Team::Blue}) {
    auto& system = team == Team::Red ? red : blue;
    api::PreGameInfo info;
    info.scenario = scenario_info(config, team);
    info.team = team;
    info.agents = team_agents(w, team);
    info.opponent_agents = team_agents(w, world::opponent_of(team));
    info.server = server_of(w, team);
    info.episode = options.episode;
    for (const auto& a : info.agents) info.observations[a] = w.observe(a, config.observe_radius);
    try {
      system.pre_game(info);
    } catch (const std::exception& ex) {
      pre_failure[team == Team::Red ? 0 : 1] = std::string("pre-game failure: ") + ex.what();
    }
    for (std::size_t i = 0; i < info.agents.size(); ++i) {
      Seat s;
      s.agent = info.agents[i];
      s.team = team;
      s.slot = i;
      s.system = &system;
      s.runner = std::make_unique<actionlang::AgentRunner>(game, s.agent);
      s.failure = pre_failure[team == Team::Red ? 0 : 1];
      seats.push_back(std::move(s));
    }
  }
  // Agents act in layout order; the team that moves first alternates by tick.
  std::vector<std::size_t> red_first;
  std::vector<std::size_t> blue_first;
  for (std::size_t i = 0; i < seats.size(); ++i) (seats[i].team == Team::Red ? red_first : blue_first).push_back(i);
  std::vector<std::size_t> order_even = red_first;
  order_even.insert(order_even.end(), blue_first.begin(), blue_first.end());
  std::vector<std::size_t> order_odd = blue_first;
  order_odd.insert(order_odd.end(), red_first.begin(), red_first.end());

  while (!game.finished()) {
    const Tick now = w.tick();
    for (std::size_t idx : (now % 2 == 0 ? order_even : order_odd)) {
      auto& s = seats[idx];
      if (!s.failure.empty()) continue;
      if (auto end = s.runner->take_end()) {
        if (end->error) ++s.errors;
        s.pending_end = *end;
      }
      if (s.runner->needs_program() && !w.agent(s.agent).busy(now)) {
        api::AgentTurn turn;
        turn.slot = s.slot;
        turn.agent = s.agent;
        turn.tick = now;
        turn.duration = config.duration_ticks;
        if (s.pending_end) turn.last_end = api::ProgramEndInfo{s.pending_end->error, s.pending_end->message, s.pending_end->tick};
        turn.last_program = s.last_program;
        const auto& log = w.chat_log();
        for (; s.cursor < log.size(); ++s.cursor) {
          if (visible_to(log[s.cursor], w, s.team)) turn.new_events.push_back(log[s.cursor]);
        }
        turn.observation = w.observe(s.agent, config.observe_radius);
        turn.iteration = ++s.iterations;
        try {
          auto choice = s.system->next_program(turn);
          s.last_program = choice.source;
          s.pending_end.reset();
          if (choice.idle_ticks > 0) w.agent(s.agent).busy_until = now + choice.idle_ticks;
          auto parsed = actionlang::parse_source(choice.source);
          if (auto* err = std::get_if<actionlang::ParseError>(&parsed)) {
            s.runner->load_failure(err->describe());
          } else {
            s.runner->load(std::make_shared<const actionlang::Program>(std::move(std::get<actionlang::Program>(parsed))));
          }
        } catch (const std::exception& ex) {
          s.failure = ex.what();
          continue;
        }
      }
      s.runner->act();
    }
    for (auto& s : seats) s.runner->signal_pass();
    game.end_tick();
    if (options.on_tick) options.on_tick(game);
    game.advance();
  }

  EpisodeResult r;
  r.scenario = config.name;
  r.red_system = red.name();
  r.blue_system = blue.name();
  r.episode = options.episode;
  r.seed = seed;
  r.red_score = game.score(Team::Red).points;
  r.blue_score = game.score(Team::Blue).points;
  r.winner = winner_of(r.red_score, r.blue_score);
  r.duration = config.duration_ticks;
  r.red_timeline = game.score(Team::Red).timeline;
  r.blue_timeline = game.score(Team::Blue).timeline;
  r.events = w.chat_log();
  r.audit = game.audit();
  for (const auto& s : seats) {
    const auto end = s.runner->take_end();
    const int errors = s.errors + (end && end->error ? 1 : 0);
    r.agents.push_back({s.agent, s.team, s.iterations, s.runner->primitives_run(), errors, s.failure});
  }

  for (Team team : {Team::Red, Team::Blue}) {
    auto& system = team == Team::Red ? red : blue;
    api::PostGameInfo info;
    info.team = team;
    info.episode = options.episode;
    info.own_score = game.score(team).points;
    info.opponent_score = game.score(world::opponent_of(team)).points;
    for (const auto& e : w.chat_log()) {
      if (visible_to(e, w, team)) info.events.push_back(e);
    }
    try {
      system.post_game(info);
    } catch (const std::exception&) {
    }
    (team == Team::Red ? r.red_stats : r.blue_stats) = system.take_stats();
  }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return r;
}

}  // namespace teamcraft::harness
