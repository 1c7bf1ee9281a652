#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "teamcraft/agents/llm.hpp"
#include "teamcraft/api/team.hpp"

namespace teamcraft::harness {

class RunConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ClientSettings {
  // mock | http | replay
  std::string kind = "mock";
  double latency_s = 0.001;
  int output_tokens = 0;
  // Files whose contents the mock returns first, in order.
  std::vector<std::string> script;
  std::string base_url = "https://api.openai.com/v1";
  std::string model = "gpt-4o";
  std::string api_key_env = "OPENAI_API_KEY";
  int max_retries = 2;
  double backoff_s = 1.0;
  double timeout_s = 120.0;
  // Transcript served by the replay client.
  std::string transcript;
};

struct RunConfig {
  std::string name = "run";
  std::vector<std::string> scenarios{"mushroom_war", "dash_and_dine"};
  // Red system selectors: tacticrafter, cot, random, builtin:<name> or builtin:*.
  std::vector<std::string> red{"tacticrafter"};
  // Blue selectors; a bare name is a built-in opponent and * means all of them.
  std::vector<std::string> opponents{"*"};
  int episodes = 5;
  int repeats = 3;
  std::vector<std::uint64_t> seeds{1, 2, 3};
  int jobs = 1;
  std::string output = "runs";
  std::string calibration_cache;
  bool episode_logs = true;
  ClientSettings client;

  void validate() const;
};

// Reads a config document. `extends` names a base document (relative to this
// one) that the rest of the document is merged over.
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig parse_run_config(const nlohmann::json& doc);
nlohmann::json to_json(const RunConfig& c);

// Applies `key=value` overrides; the key is a JSON pointer without the leading
// slash and the value is JSON, or a plain string when it does not parse.
nlohmann::json apply_overrides(nlohmann::json doc, const std::vector<std::string>& overrides);

// Selectors expanded for one scenario.
std::vector<std::string> expand_red(const RunConfig& c, const std::string& scenario);
std::vector<std::string> expand_opponents(const RunConfig& c, const std::string& scenario);

struct SystemHandle {
  std::unique_ptr<api::TeamSystem> system;
  // Set for model-backed systems.
  std::shared_ptr<agents::RecordingClient> recorder;
};

bool is_model_system(const std::string& selector);
SystemHandle make_system(const std::string& selector, const ClientSettings& client, std::uint64_t seed);
std::shared_ptr<agents::ChatClient> make_client(const ClientSettings& client);

}  // namespace teamcraft::harness
