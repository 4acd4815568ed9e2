/*
 * Copyright 2026 the s3sim authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <condition_variable>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "s3/backend.hpp"
#include "s3/embedding.hpp"
#include "s3/prompt.hpp"
#include "s3/types.hpp"
#include "s3/util.hpp"

namespace s3 {

struct HttpBackendConfig {
  std::string url = "http://localhost:8000/v1/chat/completions";
  std::string model = "gpt-3.5-turbo";
  double temperature = 0.2;
  int timeout_ms = 30000;
  int retries = 2;  // at most retries+1 requests per op call
  int max_concurrency = 4;
  std::string cache_dir;     // empty disables the response cache
  std::string prompts_dir = "prompts";
  Attitude default_stance = Attitude::Negative;
};

// Counting semaphore with FIFO fairness: tickets are granted in acquisition
// order, so no caller can starve under contention.
class FifoSemaphore {
 public:
  explicit FifoSemaphore(int capacity) : capacity_(capacity < 1 ? 1 : capacity) {}

  void acquire() {
    std::unique_lock<std::mutex> lock(mu_);
    const std::uint64_t ticket = next_ticket_++;
    cv_.wait(lock, [&] { return ticket < released_ + static_cast<std::uint64_t>(capacity_); });
  }

  void release() {
    {
      std::lock_guard<std::mutex> lock(mu_);
      ++released_;
    }
    cv_.notify_all();
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  int capacity_;
  std::uint64_t next_ticket_ = 0;
  std::uint64_t released_ = 0;
};

struct ScopedAcquire {
  explicit ScopedAcquire(FifoSemaphore& sem) : sem_(sem) { sem_.acquire(); }
  ~ScopedAcquire() { sem_.release(); }
  FifoSemaphore& sem_;
};

// Chat-completion client. The transport is injectable so tests can count
// requests without sockets; the default transport POSTs
// {model, messages, temperature} and reads choices[0].message.content.
//
// Per-op failure behavior follows the simulation contracts: state-transition
// ops degrade to inertia (keep current level/attitude, Inactive, fallback
// template), demographic predictions surface a retryable BackendError after
// the retry budget is spent.
class HttpBackend : public CognitionBackend {
 public:
  // Returns the raw HTTP response body, or nullopt on transport failure.
  using Transport =
      std::function<std::optional<std::string>(const HttpBackendConfig&, const std::string& body)>;

  explicit HttpBackend(HttpBackendConfig cfg, Transport transport = {})
      : cfg_(std::move(cfg)),
        transport_(transport ? std::move(transport) : default_transport()),
        semaphore_(cfg_.max_concurrency) {
    if (!cfg_.cache_dir.empty()) {
      std::filesystem::create_directories(cfg_.cache_dir);
    }
  }

  static Transport default_transport();

  std::string name() const override { return "http:" + cfg_.model; }
  bool supports_embedding() const override { return false; }

  GenderPrediction predict_gender(const std::string& description) override {
    const auto reply = complete_or_throw("gender", render("gender", {{"description", description}}));
    const auto parsed = parse_gender_label(reply);
    if (!parsed || *parsed == Gender::Unknown) return {Gender::Unknown, 0.0};
    return {*parsed, 0.9};
  }

  int predict_age(const std::vector<std::string>& posts) override {
    if (posts.empty()) throw BackendError("predict_age: no posts", false);
    const auto reply = complete_or_throw("age", render("age", {{"posts", join(posts, "\n")}}));
    const auto parsed = parse_age_reply(reply);
    if (!parsed) throw BackendError("predict_age: unparseable reply", true);
    return *parsed;
  }

  Occupation predict_occupation(const std::string& description,
                                const std::vector<std::string>& posts) override {
    const auto reply = complete_or_throw(
        "occupation",
        render("occupation", {{"description", description}, {"posts", join(posts, "\n")}}));
    const auto parsed = parse_occupation_label(reply);
    return parsed.value_or(Occupation::Unknown);
  }

  EmotionLevel next_emotion(const AgentContext& agent, const std::vector<Message>& received,
                            const std::vector<MemoryItem>& memory_context) override {
    if (received.empty() && memory_context.empty()) return agent.emotion;
    const auto reply = complete(
        "emotion", render("emotion", {{"attributes", attribute_text(agent.demographics,
                                                                    agent.description)},
                                      {"emotion", std::string(to_string(agent.emotion))},
                                      {"messages", message_block(received)},
                                      {"memory", memory_block(memory_context)}}));
    if (reply) {
      if (const auto parsed = parse_emotion_label(*reply)) return *parsed;
    }
    log_warn("next_emotion degraded: keeping current level");
    return agent.emotion;
  }

  Attitude initial_attitude(const AgentContext& agent) override {
    const auto reply = complete(
        "initial_attitude",
        render("initial_attitude", {{"attributes", attribute_text(agent.demographics,
                                                                  agent.description)},
                                    {"history", join(agent.history_texts, "\n")}}));
    if (reply) {
      if (const auto parsed = parse_attitude_label(*reply)) return *parsed;
    }
    log_warn("initial_attitude degraded: using event default stance");
    return cfg_.default_stance;
  }

  Attitude next_attitude(const AgentContext& agent,
                         const std::vector<Message>& received) override {
    if (!agent.attitude) return initial_attitude(agent);
    if (received.empty()) return *agent.attitude;
    const auto reply = complete(
        "attitude", render("attitude", {{"attributes", attribute_text(agent.demographics,
                                                                      agent.description)},
                                        {"attitude", std::string(to_string(*agent.attitude))},
                                        {"messages", message_block(received)}}));
    if (reply) {
      if (const auto parsed = parse_attitude_label(*reply)) return *parsed;
    }
    log_warn("next_attitude degraded: keeping current attitude");
    return *agent.attitude;
  }

  ActionDecision decide_action(const AgentContext& agent, const Message& received,
                               double /*relevance*/) override {
    const auto reply = complete(
        "action",
        render("action", {{"attributes", attribute_text(agent.demographics, agent.description)},
                          {"emotion", std::string(to_string(agent.emotion))},
                          {"attitude", agent.attitude ? std::string(to_string(*agent.attitude))
                                                      : std::string("none")},
                          {"message", received.content}}));
    if (reply) {
      if (const auto parsed = parse_action_label(*reply)) {
        return {*parsed, *parsed == Action::Inactive ? 0.0 : 1.0};
      }
    }
    log_warn("decide_action degraded: Inactive");
    return {Action::Inactive, 0.0};
  }

  std::string generate_post(const AgentContext& agent, const std::string& event_description,
                            const std::vector<MemoryItem>& memory_context) override {
    const auto reply = complete(
        "generate",
        render("generate", {{"attributes", attribute_text(agent.demographics, agent.description)},
                            {"emotion", std::string(to_string(agent.emotion))},
                            {"attitude", agent.attitude ? std::string(to_string(*agent.attitude))
                                                        : std::string("none")},
                            {"event", event_description},
                            {"memory", memory_block(memory_context)}}));
    if (reply && !trim(*reply).empty()) {
      std::string text = trim(*reply);
      if (text.size() > kMaxPostLength) text.resize(kMaxPostLength);
      return text;
    }
    log_warn("generate_post degraded: fallback template");
    return "Sharing thoughts on " + event_description + ".";
  }

  std::vector<double> embed(const std::string& text) override {
    // supports_embedding is false: deterministic trigram fallback.
    return embed_trigram(text);
  }

  // Sends one chat completion with caching, concurrency limiting, and at
  // most retries+1 requests per call. Concurrent calls with the same
  // (op, prompt) coalesce onto one request. Returns nullopt when the retry
  // budget is exhausted.
  std::optional<std::string> complete(const std::string& op, const std::string& prompt) {
    const std::string key = cache_key(op, prompt);
    while (true) {
      if (auto cached = cache_get(key)) return cached;

      std::shared_ptr<InFlight> flight;
      bool owner = false;
      {
        std::lock_guard<std::mutex> lock(inflight_mu_);
        auto it = in_flight_.find(key);
        if (it == in_flight_.end()) {
          flight = std::make_shared<InFlight>();
          in_flight_[key] = flight;
          owner = true;
        } else {
          flight = it->second;
        }
      }
      if (!owner) {
        std::unique_lock<std::mutex> lock(flight->mu);
        flight->cv.wait(lock, [&] { return flight->done; });
        if (flight->ok) return flight->value;
        continue;  // the owner failed; retry as a fresh owner
      }

      std::optional<std::string> content;
      for (int attempt = 0; attempt <= cfg_.retries && !content; ++attempt) {
        std::optional<std::string> body;
        {
          ScopedAcquire guard(semaphore_);
          body = transport_(cfg_, request_body(prompt));
        }
        if (body) content = extract_content(*body);
      }
      if (content) cache_put(key, *content);
      {
        std::lock_guard<std::mutex> lock(flight->mu);
        flight->done = true;
        flight->ok = content.has_value();
        if (content) flight->value = *content;
      }
      flight->cv.notify_all();
      {
        std::lock_guard<std::mutex> lock(inflight_mu_);
        in_flight_.erase(key);
      }
      return content;
    }
  }

  static std::string cache_key(const std::string& op, const std::string& prompt,
                               const std::string& model, double temperature) {
    const std::string canonical =
        op + '\x1f' + prompt + '\x1f' + model + '\x1f' + format_double(temperature);
    return hex64(fnv1a64(canonical)) + hex64(fnv1a64(canonical, fnv1a64("s3sim-cache")));
  }

  std::string request_body(const std::string& prompt) const {
    nlohmann::json body;
    body["model"] = cfg_.model;
    body["messages"] = nlohmann::json::array({
        nlohmann::json{{"role", "user"}, {"content", prompt}},
    });
    body["temperature"] = cfg_.temperature;
    return body.dump();
  }

  static std::optional<std::string> extract_content(const std::string& response_body) {
    try {
      const auto j = nlohmann::json::parse(response_body);
      return j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }

 private:
  static constexpr size_t kMaxPostLength = 560;

  struct InFlight {
    std::mutex mu;
    std::condition_variable cv;
    bool done = false;
    bool ok = false;
    std::string value;
  };

  std::string cache_key(const std::string& op, const std::string& prompt) const {
    return cache_key(op, prompt, cfg_.model, cfg_.temperature);
  }

  std::string complete_or_throw(const std::string& op, const std::string& prompt) {
    if (auto reply = complete(op, prompt)) return *reply;
    throw BackendError(op + ": backend unreachable or unparseable after " +
                           std::to_string(cfg_.retries + 1) + " attempts",
                       true);
  }

  std::string render(const std::string& name, std::map<std::string, std::string> values) {
    std::lock_guard<std::mutex> lock(template_mu_);
    auto it = templates_.find(name);
    if (it == templates_.end()) {
      const auto path = std::filesystem::path(cfg_.prompts_dir) / (name + ".txt");
      it = templates_.emplace(name, PromptTemplate::from_file(path.string())).first;
    }
    return it->second.render(values);
  }

  static std::string message_block(const std::vector<Message>& messages) {
    std::string out;
    for (const auto& m : messages) {
      out += "- " + m.content + "\n";
    }
    return out;
  }

  static std::string memory_block(const std::vector<MemoryItem>& items) {
    std::string out;
    for (const auto& it : items) {
      out += "- " + it.message.content + "\n";
    }
    return out;
  }

  std::optional<std::string> cache_get(const std::string& key) {
    {
      std::lock_guard<std::mutex> lock(cache_mu_);
      auto it = memory_cache_.find(key);
      if (it != memory_cache_.end()) return it->second;
    }
    if (cfg_.cache_dir.empty()) return std::nullopt;
    std::ifstream in(std::filesystem::path(cfg_.cache_dir) / (key + ".txt"));
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    std::lock_guard<std::mutex> lock(cache_mu_);
    memory_cache_[key] = buf.str();
    return buf.str();
  }

  void cache_put(const std::string& key, const std::string& value) {
    {
      std::lock_guard<std::mutex> lock(cache_mu_);
      memory_cache_[key] = value;
    }
    if (cfg_.cache_dir.empty()) return;
    std::ofstream out(std::filesystem::path(cfg_.cache_dir) / (key + ".txt"));
    out << value;
  }

  HttpBackendConfig cfg_;
  Transport transport_;
  FifoSemaphore semaphore_;
  std::mutex template_mu_;
  std::map<std::string, PromptTemplate> templates_;
  std::mutex cache_mu_;
  std::map<std::string, std::string> memory_cache_;
  std::mutex inflight_mu_;
  std::map<std::string, std::shared_ptr<InFlight>> in_flight_;
};

// Splits an http(s) URL into the client base ("scheme://host[:port]") and
// the request path.
inline std::pair<std::string, std::string> split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw std::invalid_argument("bad url: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace s3

#include <httplib.h>

namespace s3 {

inline HttpBackend::Transport HttpBackend::default_transport() {
  return [](const HttpBackendConfig& cfg, const std::string& body) -> std::optional<std::string> {
    try {
      const auto [base, path] = split_url(cfg.url);
      httplib::Client client(base);
      client.set_connection_timeout(0, cfg.timeout_ms * 1000);
      client.set_read_timeout(cfg.timeout_ms / 1000, (cfg.timeout_ms % 1000) * 1000);
      client.set_write_timeout(cfg.timeout_ms / 1000, (cfg.timeout_ms % 1000) * 1000);
      httplib::Headers headers;
      if (const char* key = std::getenv("S3_API_KEY")) {
        headers.emplace("Authorization", std::string("Bearer ") + key);
      }
      auto res = client.Post(path, headers, body, "application/json");
      if (!res || res->status < 200 || res->status >= 300) {
        log_warn("http transport failure" +
                 (res ? " (status " + std::to_string(res->status) + ")" : std::string()));
        return std::nullopt;
      }
      return res->body;
    } catch (const std::exception& e) {
      log_warn(std::string("http transport exception: ") + e.what());
      return std::nullopt;
    }
  };
}

}  // namespace s3
