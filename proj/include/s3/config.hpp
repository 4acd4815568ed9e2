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

#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "s3/engine.hpp"
#include "s3/graph.hpp"
#include "s3/http_backend.hpp"
#include "s3/rule_backend.hpp"
#include "s3/util.hpp"

namespace s3 {

// One structured file drives a run; CLI flags override individual keys and
// the manifest freezes the merged result.
struct RunConfig {
  std::uint64_t seed = 0;
  int max_steps = 20;
  int threads = 1;

  std::string backend_type = "rule";  // "rule" | "http"
  RuleBackendConfig rule;
  HttpBackendConfig http;

  double lambda = 0.1;
  int decay_threshold = 3;
  size_t memory_capacity = 16;
  InfluenceWeights weights;
  AuthenticityTable authenticity;
  int default_age = 30;

  CategoryThresholds classify;
  RecommendationConfig recommendation;
  EventConfig event;
};

inline nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j;
  j["seed"] = c.seed;
  j["max_steps"] = c.max_steps;
  j["threads"] = c.threads;
  j["backend"] = {
      {"type", c.backend_type},
      {"rule",
       {{"action_profile",
         c.rule.action_profile == RuleBackendConfig::ActionProfile::Forward ? "forward"
                                                                            : "calibrated"},
        {"forward_prob", c.rule.forward_prob},
        {"flip_threshold", c.rule.flip_threshold},
        {"relevance_high", c.rule.relevance_high},
        {"relevance_low", c.rule.relevance_low}}},
      {"http",
       {{"url", c.http.url},
        {"model", c.http.model},
        {"temperature", c.http.temperature},
        {"timeout_ms", c.http.timeout_ms},
        {"retries", c.http.retries},
        {"max_concurrency", c.http.max_concurrency},
        {"cache_dir", c.http.cache_dir},
        {"prompts_dir", c.http.prompts_dir}}},
  };
  j["agent"] = {
      {"lambda", c.lambda},
      {"decay_threshold", c.decay_threshold},
      {"memory_capacity", c.memory_capacity},
      {"default_age", c.default_age},
      {"weights",
       {{"time", c.weights.time},
        {"relevance", c.weights.relevance},
        {"authenticity", c.weights.authenticity}}},
      {"authenticity",
       {{"self_post", c.authenticity.self_post},
        {"mutual_followee", c.authenticity.mutual_followee},
        {"unidirectional_followee", c.authenticity.unidirectional_followee},
        {"platform_recommendation", c.authenticity.platform_recommendation}}},
  };
  j["classify"] = {{"r_inf", c.classify.r_inf},
                   {"k_low", c.classify.k_low},
                   {"p_low", c.classify.p_low}};
  j["recommendation"] = {{"enabled", c.recommendation.enabled},
                         {"top_k", c.recommendation.top_k},
                         {"sample_size", c.recommendation.sample_size}};
  nlohmann::json seeds = nlohmann::json::array();
  for (const auto& p : c.event.seed_posts) {
    nlohmann::json sp = {{"author", p.author}, {"text", p.text}, {"step", p.step}};
    if (p.stance) sp["stance"] = to_string(*p.stance);
    seeds.push_back(sp);
  }
  j["event"] = {{"event_id", c.event.event_id},
                {"description", c.event.description},
                {"default_stance", to_string(c.event.default_stance)},
                {"seed_posts", seeds}};
  return j;
}

inline void validate_seed_post(const SeedPost& p) {
  if (p.author.empty()) throw std::invalid_argument("seed post with empty author");
  if (p.step < 0) throw std::invalid_argument("seed post step must be >= 0");
}

inline RunConfig run_config_from_json(const nlohmann::json& j) {
  RunConfig c;
  c.seed = j.value("seed", c.seed);
  c.max_steps = j.value("max_steps", c.max_steps);
  c.threads = j.value("threads", c.threads);
  if (j.contains("backend")) {
    const auto& b = j.at("backend");
    c.backend_type = b.value("type", c.backend_type);
    if (c.backend_type != "rule" && c.backend_type != "http") {
      throw std::invalid_argument("backend.type must be 'rule' or 'http'");
    }
    if (b.contains("rule")) {
      const auto& r = b.at("rule");
      const std::string profile = r.value("action_profile", std::string("calibrated"));
      if (profile == "forward") {
        c.rule.action_profile = RuleBackendConfig::ActionProfile::Forward;
      } else if (profile == "calibrated") {
        c.rule.action_profile = RuleBackendConfig::ActionProfile::Calibrated;
      } else {
        throw std::invalid_argument("unknown action_profile: " + profile);
      }
      c.rule.forward_prob = r.value("forward_prob", c.rule.forward_prob);
      c.rule.flip_threshold = r.value("flip_threshold", c.rule.flip_threshold);
      c.rule.relevance_high = r.value("relevance_high", c.rule.relevance_high);
      c.rule.relevance_low = r.value("relevance_low", c.rule.relevance_low);
    }
    if (b.contains("http")) {
      const auto& h = b.at("http");
      c.http.url = h.value("url", c.http.url);
      c.http.model = h.value("model", c.http.model);
      c.http.temperature = h.value("temperature", c.http.temperature);
      c.http.timeout_ms = h.value("timeout_ms", c.http.timeout_ms);
      c.http.retries = h.value("retries", c.http.retries);
      c.http.max_concurrency = h.value("max_concurrency", c.http.max_concurrency);
      c.http.cache_dir = h.value("cache_dir", c.http.cache_dir);
      c.http.prompts_dir = h.value("prompts_dir", c.http.prompts_dir);
    }
  }
  if (j.contains("agent")) {
    const auto& a = j.at("agent");
    c.lambda = a.value("lambda", c.lambda);
    c.decay_threshold = a.value("decay_threshold", c.decay_threshold);
    c.memory_capacity = a.value("memory_capacity", c.memory_capacity);
    c.default_age = a.value("default_age", c.default_age);
    if (a.contains("weights")) {
      const auto& ww = a.at("weights");
      c.weights.time = ww.value("time", c.weights.time);
      c.weights.relevance = ww.value("relevance", c.weights.relevance);
      c.weights.authenticity = ww.value("authenticity", c.weights.authenticity);
    }
    if (a.contains("authenticity")) {
      const auto& t = a.at("authenticity");
      c.authenticity.self_post = t.value("self_post", c.authenticity.self_post);
      c.authenticity.mutual_followee = t.value("mutual_followee", c.authenticity.mutual_followee);
      c.authenticity.unidirectional_followee =
          t.value("unidirectional_followee", c.authenticity.unidirectional_followee);
      c.authenticity.platform_recommendation =
          t.value("platform_recommendation", c.authenticity.platform_recommendation);
    }
  }
  if (j.contains("classify")) {
    const auto& cl = j.at("classify");
    c.classify.r_inf = cl.value("r_inf", c.classify.r_inf);
    c.classify.k_low = cl.value("k_low", c.classify.k_low);
    c.classify.p_low = cl.value("p_low", c.classify.p_low);
  }
  if (j.contains("recommendation")) {
    const auto& r = j.at("recommendation");
    c.recommendation.enabled = r.value("enabled", c.recommendation.enabled);
    c.recommendation.top_k = r.value("top_k", c.recommendation.top_k);
    c.recommendation.sample_size = r.value("sample_size", c.recommendation.sample_size);
  }
  if (j.contains("event")) {
    const auto& e = j.at("event");
    c.event.event_id = e.value("event_id", c.event.event_id);
    c.event.description = e.value("description", c.event.description);
    if (e.contains("default_stance")) {
      c.event.default_stance = attitude_from_string(e.at("default_stance").get<std::string>());
    }
    if (e.contains("seed_posts")) {
      for (const auto& sp : e.at("seed_posts")) {
        SeedPost p;
        p.author = sp.at("author").get<std::string>();
        p.text = sp.at("text").get<std::string>();
        p.step = sp.value("step", 0);
        if (sp.contains("stance")) {
          p.stance = attitude_from_string(sp.at("stance").get<std::string>());
        }
        validate_seed_post(p);
        c.event.seed_posts.push_back(std::move(p));
      }
    }
  }
  c.event.max_steps = c.max_steps;
  c.rule.seed = c.seed;
  c.weights.validate();
  return c;
}

inline RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config: " + path);
  nlohmann::json j;
  in >> j;
  return run_config_from_json(j);
}

inline EngineConfig engine_config_of(const RunConfig& c) {
  EngineConfig e;
  e.lambda = c.lambda;
  e.decay_threshold = c.decay_threshold;
  e.memory_capacity = c.memory_capacity;
  e.weights = c.weights;
  e.authenticity = c.authenticity;
  e.recommendation = c.recommendation;
  e.threads = c.threads;
  e.seed = c.seed;
  return e;
}

inline std::string config_hash(const RunConfig& c) {
  return hex64(fnv1a64(to_json(c).dump()));
}

inline std::string file_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file for hashing: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return hex64(fnv1a64(buf.str()));
}

}  // namespace s3
