#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "teamcraft/agents/llm.hpp"
#include "teamcraft/api/team.hpp"

namespace teamcraft::agents {

// Sends single-prompt requests on behalf of one team and keeps a record of
// every completed call.
class ModelCaller {
 public:
  ModelCaller(std::shared_ptr<ChatClient> client, std::string model = {});

  // Throws TransportError when the client gives up.
  ChatResponse call(const std::string& purpose, const std::string& prompt,
                    const std::map<std::string, std::string>& meta = {});

  const std::vector<api::LlmCallRecord>& records() const { return records_; }
  std::vector<api::LlmCallRecord> take_records();

 private:
  std::shared_ptr<ChatClient> client_;
  std::string model_;
  std::vector<api::LlmCallRecord> records_;
};

// Simulated ticks spent waiting for a response of the given latency.
world::Tick latency_ticks(double latency_s);

}  // namespace teamcraft::agents
