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

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "s3/backend.hpp"
#include "s3/embedding.hpp"
#include "s3/types.hpp"
#include "s3/util.hpp"

namespace s3 {

// Knobs for the deterministic rule backend. The default calibrated profile
// acts on roughly 15% of deliveries, so negative samples dominate and the
// imbalance-handling path gets exercised offline; the plain forward profile
// turns every decision into a seeded Bernoulli(forward_prob) draw for
// cascade fixtures.
struct RuleBackendConfig {
  std::uint64_t seed = 0;
  enum class ActionProfile { Calibrated, Forward } action_profile = ActionProfile::Calibrated;
  double forward_prob = 0.15;
  int flip_threshold = 3;
  double relevance_high = 0.7;
  double relevance_low = 0.3;
};

// Seeded, pure cognition: every judgment is a function of (inputs, seed).
// Two runs with equal seeds are byte-identical.
class RuleBackend : public CognitionBackend {
 public:
  explicit RuleBackend(RuleBackendConfig cfg = {}) : cfg_(cfg) {}

  std::string name() const override { return "rule"; }
  bool supports_embedding() const override { return true; }

  const RuleBackendConfig& config() const { return cfg_; }

  GenderPrediction predict_gender(const std::string& description) override {
    static const std::set<std::string> female = {
        "female", "woman", "women", "she", "her",  "hers",   "mother", "mom",
        "wife",   "girl",  "lady",  "mrs", "ms",   "queen",  "daughter",
        "sister", "actress", "grandmother"};
    static const std::set<std::string> male = {
        "male", "man",  "men",  "he",  "him", "his", "father", "dad",
        "husband", "boy", "mr", "king", "son", "brother", "grandfather"};
    int f = 0, m = 0;
    for (const auto& w : tokenize(description)) {
      if (female.count(w)) ++f;
      if (male.count(w)) ++m;
    }
    if (f == 0 && m == 0) return {Gender::Unknown, 0.0};
    if (f == m) return {Gender::Unknown, 0.45};
    const int diff = std::abs(f - m);
    const double confidence = std::min(0.95, 0.55 + 0.1 * (diff - 1));
    return {f > m ? Gender::Female : Gender::Male, confidence};
  }

  // clamp(10 + hash(posts) mod 60) -- deterministic given the seed.
  int predict_age(const std::vector<std::string>& posts) override {
    if (posts.empty()) throw BackendError("predict_age: no posts", false);
    const std::string joined = join(posts, "\n");
    const auto h = hash_parts({"age", joined}, cfg_.seed);
    const int age = 10 + static_cast<int>(h % 60);
    return std::clamp(age, 10, 100);
  }

  Occupation predict_occupation(const std::string& description,
                                const std::vector<std::string>& posts) override {
    const auto& aliases = occupation_aliases();
    std::vector<int> hits(kOccupationCount, 0);
    auto scan = [&](const std::string& text) {
      for (const auto& w : tokenize(text)) {
        auto it = aliases.find(w);
        if (it != aliases.end()) ++hits[static_cast<int>(it->second)];
      }
    };
    scan(description);
    for (const auto& p : posts) scan(p);
    int best = -1, best_hits = 0;
    for (int i = 0; i < kOccupationCount; ++i) {
      if (hits[i] > best_hits) {
        best = i;
        best_hits = hits[i];
      }
    }
    return best < 0 ? Occupation::Unknown : static_cast<Occupation>(best);
  }

  // Intensity points from the stimulus: one point per received message
  // (capped at 2) plus one for highly relevant content. 2+ points jump to
  // Intense, 1 point steps up one level, no stimulus keeps the level.
  EmotionLevel next_emotion(const AgentContext& agent, const std::vector<Message>& received,
                            const std::vector<MemoryItem>& /*memory_context*/) override {
    if (received.empty()) return agent.emotion;
    const auto attr = embed_trigram(attribute_text(agent.demographics, agent.description));
    double rel_sum = 0.0;
    for (const auto& m : received) {
      rel_sum += relevance_score(attr, embed_trigram(m.content));
    }
    const double mean_rel = rel_sum / static_cast<double>(received.size());
    int points = static_cast<int>(std::min<size_t>(2, received.size()));
    if (mean_rel >= cfg_.relevance_high) ++points;
    if (points >= 2) return EmotionLevel::Intense;
    const int stepped = std::min(2, static_cast<int>(agent.emotion) + 1);
    return static_cast<EmotionLevel>(stepped);
  }

  // Sign of (seeded hash of user_id in [-3,3]) + stance-keyword balance of
  // the agent's history.
  Attitude initial_attitude(const AgentContext& agent) override {
    const auto h = hash_parts({"att0", agent.user_id}, cfg_.seed);
    const int lean = static_cast<int>(h % 7) - 3;
    int balance = 0;
    for (const auto& text : agent.history_texts) balance += stance_balance(text);
    return (lean + balance) >= 0 ? Attitude::Positive : Attitude::Negative;
  }

  Attitude next_attitude(const AgentContext& agent,
                         const std::vector<Message>& received) override {
    if (!agent.attitude) return initial_attitude(agent);
    if (received.empty()) return *agent.attitude;
    int opposing = 0;
    for (const auto& m : received) {
      if (m.stance && *m.stance != *agent.attitude) ++opposing;
    }
    if (opposing >= cfg_.flip_threshold) return opposite(*agent.attitude);
    return *agent.attitude;
  }

  ActionDecision decide_action(const AgentContext& agent, const Message& received,
                               double relevance) override {
    if (cfg_.action_profile == RuleBackendConfig::ActionProfile::Forward) {
      const double u = draw(agent.user_id, received.id, "act");
      return {u < cfg_.forward_prob ? Action::Forward : Action::Inactive,
              cfg_.forward_prob};
    }
    if (agent.emotion == EmotionLevel::Intense && relevance >= cfg_.relevance_high) {
      return {Action::PostNew, 0.95};
    }
    if (agent.emotion == EmotionLevel::Calm && relevance < cfg_.relevance_low) {
      return {Action::Inactive, 0.05};
    }
    const double propensity =
        std::clamp(cfg_.forward_prob * (0.5 + relevance), 0.0, 1.0);
    const double u = draw(agent.user_id, received.id, "act");
    return {u < propensity ? Action::Forward : Action::Inactive, propensity};
  }

  std::string generate_post(const AgentContext& agent, const std::string& event_description,
                            const std::vector<MemoryItem>& /*memory_context*/) override {
    if (!agent.attitude) return "I just heard about " + event_description + ".";
    if (*agent.attitude == Attitude::Negative) {
      switch (agent.emotion) {
        case EmotionLevel::Intense:
          return "I am outraged about " + event_description + ": this must stop.";
        case EmotionLevel::Moderate:
          return "I am worried about " + event_description + ": this does not look good.";
        case EmotionLevel::Calm:
          return "I have doubts about " + event_description + ".";
      }
    }
    switch (agent.emotion) {
      case EmotionLevel::Intense:
        return "I am thrilled about " + event_description + ": this is great news.";
      case EmotionLevel::Moderate:
        return "I am hopeful about " + event_description + ": things may improve.";
      case EmotionLevel::Calm:
        break;
    }
    return "I see some good in " + event_description + ".";
  }

  std::vector<double> embed(const std::string& text) override { return embed_trigram(text); }

  // Positive-minus-negative stance keyword count; shared with fixtures.
  static int stance_balance(const std::string& text) {
    static const std::set<std::string> positive = {
        "support", "supports", "good",   "great", "agree", "hope",
        "hopeful", "love",     "benefit", "safe", "positive", "thrilled"};
    static const std::set<std::string> negative = {
        "oppose", "opposes", "bad",   "terrible", "disagree", "fear",
        "hate",   "danger",  "dangerous", "harm", "angry",    "negative",
        "worried", "outraged", "doubts"};
    int balance = 0;
    for (const auto& w : tokenize(text)) {
      if (positive.count(w)) ++balance;
      if (negative.count(w)) --balance;
    }
    return balance;
  }

 private:
  double draw(std::string_view a, std::string_view b, std::string_view tag) const {
    return hash_unit(hash_parts({tag, a, b}, cfg_.seed));
  }

  RuleBackendConfig cfg_;
};

}  // namespace s3
