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

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "s3/memory.hpp"
#include "s3/types.hpp"
#include "s3/util.hpp"

namespace s3 {

// Typed backend failure. Retryable failures (transport, timeouts) may be
// retried by callers; non-retryable ones indicate bad input.
class BackendError : public std::runtime_error {
 public:
  BackendError(const std::string& what, bool retryable)
      : std::runtime_error(what), retryable_(retryable) {}
  bool retryable() const { return retryable_; }

 private:
  bool retryable_;
};

struct GenderPrediction {
  Gender gender = Gender::Unknown;
  double confidence = 0.0;  // Unknown iff confidence < 0.5
};

struct ActionDecision {
  Action action = Action::Inactive;
  double score = 0.0;  // propensity to act, in [0,1]
};

// Read-only view of one agent handed to cognition calls.
struct AgentContext {
  std::string user_id;
  Demographics demographics;
  std::string description;
  std::vector<std::string> history_texts;
  EmotionLevel emotion = EmotionLevel::Calm;
  std::optional<Attitude> attitude;
};

// Every judgment the simulation delegates. Implementations must be total:
// failures surface as typed errors or contract-specified defaults, never as
// hangs. All methods may be called concurrently.
class CognitionBackend {
 public:
  virtual ~CognitionBackend() = default;

  virtual std::string name() const = 0;
  virtual bool supports_embedding() const = 0;
  virtual bool supports_logprob() const { return false; }

  virtual GenderPrediction predict_gender(const std::string& description) = 0;

  // Age in [10,100]; throws BackendError on empty posts.
  virtual int predict_age(const std::vector<std::string>& posts) = 0;

  virtual Occupation predict_occupation(const std::string& description,
                                        const std::vector<std::string>& posts) = 0;

  // Markov update: depends only on the listed inputs. Identity when both
  // received and memory_context are empty.
  virtual EmotionLevel next_emotion(const AgentContext& agent,
                                    const std::vector<Message>& received,
                                    const std::vector<MemoryItem>& memory_context) = 0;

  virtual Attitude initial_attitude(const AgentContext& agent) = 0;

  virtual Attitude next_attitude(const AgentContext& agent,
                                 const std::vector<Message>& received) = 0;

  // `relevance` is the mapped-cosine relevance of `received` to the agent.
  virtual ActionDecision decide_action(const AgentContext& agent, const Message& received,
                                       double relevance) = 0;

  virtual std::string generate_post(const AgentContext& agent,
                                    const std::string& event_description,
                                    const std::vector<MemoryItem>& memory_context) = 0;

  // Unit vector of fixed dimension; zero vector only for empty text.
  virtual std::vector<double> embed(const std::string& text) = 0;
};

// --- free-form reply parsing -------------------------------------------
//
// Prompts instruct the model to answer with a single label token on the
// final line. Parsing takes the last non-empty line, normalizes case and
// punctuation, and alias-maps. Every parser is total over arbitrary input
// and returns nullopt rather than guessing.

inline std::string last_line(std::string_view reply) {
  size_t end = reply.size();
  while (true) {
    size_t start = reply.rfind('\n', end == 0 ? 0 : end - 1);
    const size_t begin = (start == std::string_view::npos) ? 0 : start + 1;
    const std::string candidate = trim(reply.substr(begin, end - begin));
    if (!candidate.empty() || begin == 0) return candidate;
    end = begin - 1;
  }
}

inline std::string normalize_label(std::string_view s) {
  std::string out;
  bool space = false;
  for (char ch : s) {
    if (std::isalnum(static_cast<unsigned char>(ch))) {
      if (space && !out.empty()) out += ' ';
      space = false;
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    } else {
      space = true;
    }
  }
  return out;
}

inline std::optional<Gender> parse_gender_label(std::string_view reply) {
  const std::string label = normalize_label(last_line(reply));
  static const std::map<std::string, Gender> aliases = {
      {"female", Gender::Female}, {"f", Gender::Female},     {"woman", Gender::Female},
      {"male", Gender::Male},     {"m", Gender::Male},       {"man", Gender::Male},
      {"unknown", Gender::Unknown}, {"unsure", Gender::Unknown},
  };
  auto it = aliases.find(label);
  if (it == aliases.end()) return std::nullopt;
  return it->second;
}

inline std::optional<EmotionLevel> parse_emotion_label(std::string_view reply) {
  const std::string label = normalize_label(last_line(reply));
  static const std::map<std::string, EmotionLevel> aliases = {
      {"calm", EmotionLevel::Calm},         {"0", EmotionLevel::Calm},
      {"moderate", EmotionLevel::Moderate}, {"1", EmotionLevel::Moderate},
      {"intense", EmotionLevel::Intense},   {"2", EmotionLevel::Intense},
  };
  auto it = aliases.find(label);
  if (it == aliases.end()) return std::nullopt;
  return it->second;
}

inline std::optional<Attitude> parse_attitude_label(std::string_view reply) {
  const std::string label = normalize_label(last_line(reply));
  static const std::map<std::string, Attitude> aliases = {
      {"positive", Attitude::Positive}, {"support", Attitude::Positive},
      {"pro", Attitude::Positive},      {"favor", Attitude::Positive},
      {"negative", Attitude::Negative}, {"oppose", Attitude::Negative},
      {"anti", Attitude::Negative},     {"against", Attitude::Negative},
  };
  auto it = aliases.find(label);
  if (it == aliases.end()) return std::nullopt;
  return it->second;
}

inline std::optional<Action> parse_action_label(std::string_view reply) {
  const std::string label = normalize_label(last_line(reply));
  static const std::map<std::string, Action> aliases = {
      {"forward", Action::Forward},    {"repost", Action::Forward},
      {"share", Action::Forward},      {"retweet", Action::Forward},
      {"post", Action::PostNew},       {"post new", Action::PostNew},
      {"postnew", Action::PostNew},    {"new post", Action::PostNew},
      {"create", Action::PostNew},     {"inactive", Action::Inactive},
      {"nothing", Action::Inactive},   {"none", Action::Inactive},
      {"do nothing", Action::Inactive}, {"ignore", Action::Inactive},
      {"no", Action::Inactive},
  };
  auto it = aliases.find(label);
  if (it == aliases.end()) return std::nullopt;
  return it->second;
}

// Alias table for the closed occupation set; keys are normalized labels.
inline const std::map<std::string, Occupation>& occupation_aliases() {
  static const std::map<std::string, Occupation> table = [] {
    std::map<std::string, Occupation> t;
    for (int i = 0; i < kOccupationCount; ++i) {
      t[normalize_label(kOccupationNames[i])] = static_cast<Occupation>(i);
    }
    auto add = [&t](std::string_view word, Occupation o) {
      t[std::string(word)] = o;
    };
    add("teacher", Occupation::EducationPractitioner);
    add("professor", Occupation::EducationPractitioner);
    add("educator", Occupation::EducationPractitioner);
    add("lecturer", Occupation::EducationPractitioner);
    add("tutor", Occupation::EducationPractitioner);
    add("manager", Occupation::AdministrativeManagerOfficer);
    add("officer", Occupation::AdministrativeManagerOfficer);
    add("administrator", Occupation::AdministrativeManagerOfficer);
    add("official", Occupation::AdministrativeManagerOfficer);
    add("civil servant", Occupation::AdministrativeManagerOfficer);
    add("student", Occupation::UnemployedStudent);
    add("unemployed", Occupation::UnemployedStudent);
    add("pupil", Occupation::UnemployedStudent);
    add("undergraduate", Occupation::UnemployedStudent);
    add("jobless", Occupation::UnemployedStudent);
    add("engineer", Occupation::Engineer);
    add("developer", Occupation::Engineer);
    add("programmer", Occupation::Engineer);
    add("software engineer", Occupation::Engineer);
    add("worker", Occupation::LaborTechnicianWorker);
    add("technician", Occupation::LaborTechnicianWorker);
    add("laborer", Occupation::LaborTechnicianWorker);
    add("electrician", Occupation::LaborTechnicianWorker);
    add("mechanic", Occupation::LaborTechnicianWorker);
    add("plumber", Occupation::LaborTechnicianWorker);
    add("driver", Occupation::LogisticsPractitioner);
    add("courier", Occupation::LogisticsPractitioner);
    add("logistics", Occupation::LogisticsPractitioner);
    add("delivery", Occupation::LogisticsPractitioner);
    add("warehouse", Occupation::LogisticsPractitioner);
    add("doctor", Occupation::MedicalPersonnel);
    add("nurse", Occupation::MedicalPersonnel);
    add("physician", Occupation::MedicalPersonnel);
    add("surgeon", Occupation::MedicalPersonnel);
    add("dentist", Occupation::MedicalPersonnel);
    add("banker", Occupation::FinancialPractitioner);
    add("accountant", Occupation::FinancialPractitioner);
    add("trader", Occupation::FinancialPractitioner);
    add("finance", Occupation::FinancialPractitioner);
    add("financial analyst", Occupation::FinancialPractitioner);
    add("journalist", Occupation::MediaPersonnel);
    add("reporter", Occupation::MediaPersonnel);
    add("editor", Occupation::MediaPersonnel);
    add("blogger", Occupation::MediaPersonnel);
    add("artist", Occupation::EntertainmentArtsPractitioner);
    add("singer", Occupation::EntertainmentArtsPractitioner);
    add("actor", Occupation::EntertainmentArtsPractitioner);
    add("actress", Occupation::EntertainmentArtsPractitioner);
    add("musician", Occupation::EntertainmentArtsPractitioner);
    add("painter", Occupation::EntertainmentArtsPractitioner);
    add("dancer", Occupation::EntertainmentArtsPractitioner);
    add("writer", Occupation::EntertainmentArtsPractitioner);
    return t;
  }();
  return table;
}

inline std::optional<Occupation> parse_occupation_label(std::string_view reply) {
  const std::string label = normalize_label(last_line(reply));
  const auto& aliases = occupation_aliases();
  auto it = aliases.find(label);
  if (it == aliases.end()) return std::nullopt;
  return it->second;
}

// First integer on the last line, clamped into [10,100].
inline std::optional<int> parse_age_reply(std::string_view reply) {
  const std::string line = last_line(reply);
  size_t i = 0;
  while (i < line.size() && !std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
  if (i == line.size()) return std::nullopt;
  long value = 0;
  size_t digits = 0;
  while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) {
    if (digits < 9) value = value * 10 + (line[i] - '0');
    ++digits;
    ++i;
  }
  if (value < 10) return 10;
  if (value > 100) return 100;
  return static_cast<int>(value);
}

}  // namespace s3
