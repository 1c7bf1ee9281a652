#pragma once

#include <chrono>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace teamcraft::agents {

struct ChatMessage {
  std::string role;
  std::string content;
  bool operator==(const ChatMessage&) const = default;
};

struct ChatRequest {
  std::vector<ChatMessage> messages;
  double temperature = 0.3;
  std::string model;
  // Which module issued the call (tactics_init, action, critic, ...).
  std::string purpose;
  // Free-form context for logging and for the mock client; never sent upstream.
  std::map<std::string, std::string> meta;
};

struct ChatResponse {
  std::string text;
  int output_tokens = 0;
  double latency_s = 0.0;
  // Transport attempts used, including the successful one.
  int attempts = 1;
};

class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rough token count for text without a tokenizer: one token per four bytes,
// at least one for non-empty text.
int estimate_tokens(const std::string& text);

class ChatClient {
 public:
  virtual ~ChatClient() = default;
  virtual ChatResponse complete(const ChatRequest& request) = 0;
};

// Deterministic stand-in for a model. Scripted responses are consumed first, in
// order; after that the responder (default: a built-in scenario playbook) is used.
class MockClient : public ChatClient {
 public:
  using Responder = std::function<std::string(const ChatRequest&, int call_index)>;

  struct Options {
    double latency_s = 0.001;
    // Fixed output token count; 0 means estimate from the text.
    int output_tokens = 0;
  };

  MockClient();
  explicit MockClient(Options options, Responder responder = {});

  void push_response(std::string text) { scripted_.push_back(std::move(text)); }
  ChatResponse complete(const ChatRequest& request) override;
  int calls() const { return calls_; }
  const std::vector<ChatRequest>& requests() const { return requests_; }

 private:
  Options options_;
  Responder responder_;
  std::deque<std::string> scripted_;
  std::vector<ChatRequest> requests_;
  int calls_ = 0;
};

// Playbook answers keyed by request purpose and meta (scenario, slot, constants).
std::string playbook_response(const ChatRequest& request, int call_index);

// OpenAI-compatible chat-completions endpoint.
class HttpClient : public ChatClient {
 public:
  struct Options {
    std::string base_url = "https://api.openai.com/v1";
    std::string model = "gpt-4o";
    std::string api_key_env = "OPENAI_API_KEY";
    int max_retries = 2;
    double backoff_s = 1.0;
    double timeout_s = 120.0;
  };

  explicit HttpClient(Options options);
  ChatResponse complete(const ChatRequest& request) override;

  static nlohmann::json request_body(const ChatRequest& request, const std::string& model);
  // Extracts text and completion tokens from a response body.
  static ChatResponse parse_body(const std::string& body);

 private:
  Options options_;
};

// Serves responses recorded in a transcript, in order.
class ReplayClient : public ChatClient {
 public:
  explicit ReplayClient(std::vector<ChatResponse> responses);
  static ReplayClient from_transcript(const std::string& jsonl);
  ChatResponse complete(const ChatRequest& request) override;

 private:
  std::vector<ChatResponse> responses_;
  std::size_t next_ = 0;
};

// Forwards to another client and keeps every request/response pair.
class RecordingClient : public ChatClient {
 public:
  explicit RecordingClient(std::shared_ptr<ChatClient> inner) : inner_(std::move(inner)) {}
  ChatResponse complete(const ChatRequest& request) override;

  // One JSON object per line: purpose, meta, messages, text, tokens, latency.
  std::string transcript() const;
  void clear();

 private:
  std::shared_ptr<ChatClient> inner_;
  mutable std::mutex mu_;
  std::vector<nlohmann::json> log_;
};

}  // namespace teamcraft::agents
