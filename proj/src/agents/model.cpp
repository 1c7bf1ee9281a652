#include "teamcraft/agents/model.hpp"

#include <cmath>

namespace teamcraft::agents {

ModelCaller::ModelCaller(std::shared_ptr<ChatClient> client, std::string model)
    : client_(std::move(client)), model_(std::move(model)) {}

ChatResponse ModelCaller::call(const std::string& purpose, const std::string& prompt,
                               const std::map<std::string, std::string>& meta) {
  ChatRequest request;
  request.messages.push_back(ChatMessage{"user", prompt});
  request.model = model_;
  request.purpose = purpose;
  request.meta = meta;
  request.meta["purpose"] = purpose;
  ChatResponse response = client_->complete(request);
  auto agent = meta.find("agent");
  records_.push_back(api::LlmCallRecord{purpose, agent == meta.end() ? std::string() : agent->second,
                                        response.latency_s, response.output_tokens});
  return response;
}

std::vector<api::LlmCallRecord> ModelCaller::take_records() {
  std::vector<api::LlmCallRecord> out;
  out.swap(records_);
  return out;
}

world::Tick latency_ticks(double latency_s) {
  return static_cast<world::Tick>(std::llround(latency_s * static_cast<double>(world::kTicksPerSecond)));
}

}  // namespace teamcraft::agents
