#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

#ifdef TEAMCRAFT_WITH_TLS
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

#include "teamcraft/agents/llm.hpp"

namespace teamcraft::agents {

using nlohmann::json;

int estimate_tokens(const std::string& text) {
  if (text.empty()) return 0;
  return std::max(1, static_cast<int>((text.size() + 3) / 4));
}

MockClient::MockClient() : MockClient(Options{}) {}

MockClient::MockClient(Options options, Responder responder)
    : options_(options), responder_(responder ? std::move(responder) : Responder(playbook_response)) {}

ChatResponse MockClient::complete(const ChatRequest& request) {
  requests_.push_back(request);
  const int index = calls_++;
  ChatResponse r;
  if (!scripted_.empty()) {
    r.text = std::move(scripted_.front());
    scripted_.pop_front();
  } else {
    r.text = responder_(request, index);
  }
  r.output_tokens = options_.output_tokens > 0 ? options_.output_tokens : std::max(1, estimate_tokens(r.text));
  r.latency_s = options_.latency_s;
  return r;
}

HttpClient::HttpClient(Options options) : options_(std::move(options)) {}

json HttpClient::request_body(const ChatRequest& request, const std::string& model) {
  json messages = json::array();
  for (const auto& m : request.messages) messages.push_back({{"role", m.role}, {"content", m.content}});
  return {{"model", request.model.empty() ? model : request.model},
          {"temperature", request.temperature},
          {"messages", messages}};
}

ChatResponse HttpClient::parse_body(const std::string& body) {
  const auto j = json::parse(body);
  ChatResponse r;
  r.text = j.at("choices").at(0).at("message").at("content").get<std::string>();
  if (j.contains("usage") && j["usage"].contains("completion_tokens")) {
    r.output_tokens = j["usage"]["completion_tokens"].get<int>();
  } else {
    r.output_tokens = estimate_tokens(r.text);
  }
  return r;
}

ChatResponse HttpClient::complete(const ChatRequest& request) {
  const std::string& base = options_.base_url;
  const auto scheme_end = base.find("://");
  if (scheme_end == std::string::npos) throw TransportError("base url needs a scheme: " + base);
  const auto path_start = base.find('/', scheme_end + 3);
  const std::string host = path_start == std::string::npos ? base : base.substr(0, path_start);
  std::string path = path_start == std::string::npos ? "" : base.substr(path_start);
  while (!path.empty() && path.back() == '/') path.pop_back();
  path += "/chat/completions";

  httplib::Headers headers;
  if (const char* key = std::getenv(options_.api_key_env.c_str()); key && *key) {
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }
  const std::string body = request_body(request, options_.model).dump();
  std::string last_error;
  for (int attempt = 0; attempt <= options_.max_retries; ++attempt) {
    if (attempt > 0) {
      const double wait = options_.backoff_s * std::pow(2.0, attempt - 1);
      std::this_thread::sleep_for(std::chrono::duration<double>(wait));
    }
    httplib::Client cli(host);
    const auto secs = static_cast<time_t>(options_.timeout_s);
    cli.set_read_timeout(secs, 0);
    cli.set_connection_timeout(secs, 0);
    const auto start = std::chrono::steady_clock::now();
    auto res = cli.Post(path, headers, body, "application/json");
    const double latency = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      last_error = "HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200);
      continue;
    }
    try {
      auto r = parse_body(res->body);
      r.latency_s = std::max(latency, 1e-6);
      r.attempts = attempt + 1;
      return r;
    } catch (const json::exception& e) {
      last_error = std::string("malformed response: ") + e.what();
    }
  }
  throw TransportError(last_error);
}

ReplayClient::ReplayClient(std::vector<ChatResponse> responses) : responses_(std::move(responses)) {}

ReplayClient ReplayClient::from_transcript(const std::string& jsonl) {
  std::vector<ChatResponse> out;
  std::istringstream in(jsonl);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = json::parse(line);
    ChatResponse r;
    r.text = j.at("text").get<std::string>();
    r.output_tokens = j.at("output_tokens").get<int>();
    r.latency_s = j.at("latency_s").get<double>();
    out.push_back(std::move(r));
  }
  return ReplayClient(std::move(out));
}

ChatResponse ReplayClient::complete(const ChatRequest&) {
  if (next_ >= responses_.size()) throw TransportError("replay transcript exhausted");
  return responses_[next_++];
}

ChatResponse RecordingClient::complete(const ChatRequest& request) {
  auto r = inner_->complete(request);
  json messages = json::array();
  for (const auto& m : request.messages) messages.push_back({{"role", m.role}, {"content", m.content}});
  std::lock_guard lock(mu_);
  log_.push_back({{"purpose", request.purpose},
                  {"meta", request.meta},
                  {"messages", messages},
                  {"text", r.text},
                  {"output_tokens", r.output_tokens},
                  {"latency_s", r.latency_s}});
  return r;
}

std::string RecordingClient::transcript() const {
  std::lock_guard lock(mu_);
  std::string out;
  for (const auto& j : log_) out += j.dump() + "\n";
  return out;
}

void RecordingClient::clear() {
  std::lock_guard lock(mu_);
  log_.clear();
}

}  // namespace teamcraft::agents
