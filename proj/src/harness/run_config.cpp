#include "teamcraft/harness/run_config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "teamcraft/agents/cot.hpp"
#include "teamcraft/agents/tacticrafter.hpp"
#include "teamcraft/opponents/opponents.hpp"
#include "teamcraft/scenarios/config.hpp"

namespace teamcraft::harness {

using nlohmann::json;

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RunConfigError("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json load_document(const std::filesystem::path& path, int depth) {
  if (depth > 8) throw RunConfigError("config extends chain is too deep at " + path.string());
  json doc = json::parse(read_file(path), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw RunConfigError(path.string() + " is not a JSON object");
  if (doc.contains("extends")) {
    if (!doc["extends"].is_string()) throw RunConfigError("extends must be a path");
    json base = load_document(path.parent_path() / doc["extends"].get<std::string>(), depth + 1);
    doc.erase("extends");
    base.merge_patch(doc);
    return base;
  }
  return doc;
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw RunConfigError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw RunConfigError("bad value for '" + std::string(key) + "' in " + where);
  }
}

bool is_builtin_of(const std::string& name, const std::string& scenario) {
  const auto names = opponents::builtin_names(scenario);
  return std::find(names.begin(), names.end(), name) != names.end();
}

}  // namespace

void RunConfig::validate() const {
  if (episodes < 1) throw RunConfigError("episodes must be at least 1");
  if (repeats < 1) throw RunConfigError("repeats must be at least 1");
  if (seeds.size() < static_cast<std::size_t>(repeats)) throw RunConfigError("need one seed per repeat");
  if (jobs < 1) throw RunConfigError("jobs must be at least 1");
  if (scenarios.empty()) throw RunConfigError("no scenarios");
  if (red.empty()) throw RunConfigError("no red system");
  const auto& known = scenarios::scenario_names();
  for (const auto& s : scenarios) {
    if (std::find(known.begin(), known.end(), s) == known.end()) throw RunConfigError("unknown scenario " + s);
  }
  if (client.kind != "mock" && client.kind != "http" && client.kind != "replay") {
    throw RunConfigError("client kind must be mock, http or replay");
  }
  if (client.latency_s <= 0.0) throw RunConfigError("mock latency must be positive");
  for (const auto& s : scenarios) {
    expand_red(*this, s);
    expand_opponents(*this, s);
  }
}

RunConfig parse_run_config(const json& doc) {
  check_keys(doc, {"name", "scenarios", "red", "opponents", "episodes", "repeats", "seeds", "jobs", "output",
                   "calibration_cache", "episode_logs", "client"},
             "run config");
  RunConfig c;
  read(doc, "name", c.name, "run config");
  read(doc, "scenarios", c.scenarios, "run config");
  read(doc, "red", c.red, "run config");
  read(doc, "opponents", c.opponents, "run config");
  read(doc, "episodes", c.episodes, "run config");
  read(doc, "repeats", c.repeats, "run config");
  read(doc, "seeds", c.seeds, "run config");
  read(doc, "jobs", c.jobs, "run config");
  read(doc, "output", c.output, "run config");
  read(doc, "calibration_cache", c.calibration_cache, "run config");
  read(doc, "episode_logs", c.episode_logs, "run config");
  if (doc.contains("client")) {
    const auto& cj = doc["client"];
    if (!cj.is_object()) throw RunConfigError("client must be an object");
    check_keys(cj, {"kind", "latency_s", "output_tokens", "script", "base_url", "model", "api_key_env", "max_retries",
                    "backoff_s", "timeout_s", "transcript"},
               "client");
    auto& cl = c.client;
    read(cj, "kind", cl.kind, "client");
    read(cj, "latency_s", cl.latency_s, "client");
    read(cj, "output_tokens", cl.output_tokens, "client");
    read(cj, "script", cl.script, "client");
    read(cj, "base_url", cl.base_url, "client");
    read(cj, "model", cl.model, "client");
    read(cj, "api_key_env", cl.api_key_env, "client");
    read(cj, "max_retries", cl.max_retries, "client");
    read(cj, "backoff_s", cl.backoff_s, "client");
    read(cj, "timeout_s", cl.timeout_s, "client");
    read(cj, "transcript", cl.transcript, "client");
  }
  c.validate();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) { return parse_run_config(load_document(path, 0)); }

json to_json(const RunConfig& c) {
  const auto& cl = c.client;
  return {{"name", c.name},
          {"scenarios", c.scenarios},
          {"red", c.red},
          {"opponents", c.opponents},
          {"episodes", c.episodes},
          {"repeats", c.repeats},
          {"seeds", c.seeds},
          {"jobs", c.jobs},
          {"output", c.output},
          {"calibration_cache", c.calibration_cache},
          {"episode_logs", c.episode_logs},
          {"client",
           {{"kind", cl.kind},
            {"latency_s", cl.latency_s},
            {"output_tokens", cl.output_tokens},
            {"script", cl.script},
            {"base_url", cl.base_url},
            {"model", cl.model},
            {"api_key_env", cl.api_key_env},
            {"max_retries", cl.max_retries},
            {"backoff_s", cl.backoff_s},
            {"timeout_s", cl.timeout_s},
            {"transcript", cl.transcript}}}};
}

json apply_overrides(json doc, const std::vector<std::string>& overrides) {
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos || eq == 0) throw RunConfigError("override must be key=value: " + o);
    std::string key = o.substr(0, eq);
    std::replace(key.begin(), key.end(), '.', '/');
    const std::string text = o.substr(eq + 1);
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;
    try {
      doc[json::json_pointer("/" + key)] = value;
    } catch (const json::exception& e) {
      throw RunConfigError("cannot apply override " + o + ": " + e.what());
    }
  }
  return doc;
}

std::vector<std::string> expand_red(const RunConfig& c, const std::string& scenario) {
  std::vector<std::string> out;
  for (const auto& sel : c.red) {
    if (sel == "builtin:*") {
      for (const auto& n : opponents::builtin_names(scenario)) out.push_back("builtin:" + n);
    } else if (sel.rfind("builtin:", 0) == 0) {
      const std::string n = sel.substr(8);
      if (!is_builtin_of(n, scenario)) throw RunConfigError("unknown built-in " + n + " for " + scenario);
      out.push_back(sel);
    } else if (is_model_system(sel) || sel == "random") {
      out.push_back(sel);
    } else {
      throw RunConfigError("unknown red system " + sel);
    }
  }
  return out;
}

std::vector<std::string> expand_opponents(const RunConfig& c, const std::string& scenario) {
  std::vector<std::string> out;
  for (const auto& sel : c.opponents) {
    if (sel == "*" || sel == "builtin:*") {
      for (const auto& n : opponents::builtin_names(scenario)) out.push_back("builtin:" + n);
    } else if (is_model_system(sel) || sel == "random") {
      out.push_back(sel);
    } else {
      const std::string n = sel.rfind("builtin:", 0) == 0 ? sel.substr(8) : sel;
      if (is_builtin_of(n, scenario)) {
        out.push_back("builtin:" + n);
        continue;
      }
      bool elsewhere = false;
      for (const auto& s : scenarios::scenario_names()) elsewhere = elsewhere || is_builtin_of(n, s);
      if (!elsewhere) throw RunConfigError("unknown opponent " + sel);
    }
  }
  return out;
}

bool is_model_system(const std::string& selector) { return selector == "tacticrafter" || selector == "cot"; }

std::shared_ptr<agents::ChatClient> make_client(const ClientSettings& client) {
  if (client.kind == "http") {
    agents::HttpClient::Options o;
    o.base_url = client.base_url;
    o.model = client.model;
    o.api_key_env = client.api_key_env;
    o.max_retries = client.max_retries;
    o.backoff_s = client.backoff_s;
    o.timeout_s = client.timeout_s;
    return std::make_shared<agents::HttpClient>(o);
  }
  if (client.kind == "replay") {
    return std::make_shared<agents::ReplayClient>(agents::ReplayClient::from_transcript(read_file(client.transcript)));
  }
  agents::MockClient::Options o;
  o.latency_s = client.latency_s;
  o.output_tokens = client.output_tokens;
  auto mock = std::make_shared<agents::MockClient>(o);
  for (const auto& f : client.script) mock->push_response(read_file(f));
  return mock;
}

SystemHandle make_system(const std::string& selector, const ClientSettings& client, std::uint64_t seed) {
  SystemHandle h;
  if (selector.rfind("builtin:", 0) == 0) {
    h.system = std::make_unique<opponents::BuiltinTeam>(selector.substr(8));
  } else if (selector == "random") {
    h.system = std::make_unique<opponents::RandomTeam>(seed);
  } else if (is_model_system(selector)) {
    h.recorder = std::make_shared<agents::RecordingClient>(make_client(client));
    const std::string model = client.kind == "http" ? client.model : "mock";
    if (selector == "tacticrafter") {
      h.system = std::make_unique<agents::TactiCrafter>(h.recorder, agents::Templates::builtin(), model);
    } else {
      h.system = std::make_unique<agents::CotTeam>(h.recorder, agents::Templates::builtin(), model);
    }
  } else {
    throw RunConfigError("unknown system " + selector);
  }
  return h;
}

}  // namespace teamcraft::harness
