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

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace s3 {

// Emotion is a total order: Calm < Moderate < Intense.
enum class EmotionLevel : int { Calm = 0, Moderate = 1, Intense = 2 };

enum class Attitude { Positive, Negative };

enum class Gender { Female, Male, Unknown };

// The closed ten-category occupation set, plus Unknown for unmappable
// predictions.
enum class Occupation : int {
  EducationPractitioner = 0,
  AdministrativeManagerOfficer,
  UnemployedStudent,
  Engineer,
  LaborTechnicianWorker,
  LogisticsPractitioner,
  MedicalPersonnel,
  FinancialPractitioner,
  MediaPersonnel,
  EntertainmentArtsPractitioner,
  Unknown,
};

inline constexpr int kOccupationCount = 10;

inline constexpr std::array<std::string_view, kOccupationCount> kOccupationNames = {
    "Education Practitioner",
    "Administrative Manager / Officer",
    "Unemployed / Student",
    "Engineer",
    "Labor Technician / Worker",
    "Logistics Practitioner",
    "Medical Personnel",
    "Financial Practitioner",
    "Media Personnel",
    "Entertainment and Arts Practitioner",
};

enum class UserCategory { Influential, Regular, LowImpact };

// Structural relation between a message's author and its recipient.
enum class SourceRelation {
  UnidirectionalFollowee,
  MutualFollowee,
  PlatformRecommendation,
  SelfPost,
};

enum class Action { Forward, PostNew, Inactive };

struct Demographics {
  int age = 30;
  Gender gender = Gender::Unknown;
  Occupation occupation = Occupation::Unknown;
};

// A post or repost circulating in the simulation. `forward_of` is empty for
// original posts and names the forwarded message otherwise. `stance` is the
// optional attitude tag assigned at generation time.
struct Message {
  std::string id;
  std::string author;
  int step = 0;
  std::string content;
  std::optional<std::string> forward_of;
  std::string event_id;
  std::optional<Attitude> stance;

  bool is_forward() const { return forward_of.has_value(); }
};

// --- canonical names ----------------------------------------------------

inline std::string_view to_string(EmotionLevel e) {
  switch (e) {
    case EmotionLevel::Calm: return "calm";
    case EmotionLevel::Moderate: return "moderate";
    case EmotionLevel::Intense: return "intense";
  }
  return "calm";
}

inline std::string_view to_string(Attitude a) {
  return a == Attitude::Positive ? "positive" : "negative";
}

inline std::string_view to_string(Gender g) {
  switch (g) {
    case Gender::Female: return "female";
    case Gender::Male: return "male";
    case Gender::Unknown: return "unknown";
  }
  return "unknown";
}

inline std::string_view to_string(UserCategory c) {
  switch (c) {
    case UserCategory::Influential: return "influential";
    case UserCategory::Regular: return "regular";
    case UserCategory::LowImpact: return "low_impact";
  }
  return "regular";
}

inline std::string_view to_string(SourceRelation s) {
  switch (s) {
    case SourceRelation::UnidirectionalFollowee: return "unidirectional_followee";
    case SourceRelation::MutualFollowee: return "mutual_followee";
    case SourceRelation::PlatformRecommendation: return "platform_recommendation";
    case SourceRelation::SelfPost: return "self_post";
  }
  return "unidirectional_followee";
}

inline std::string_view to_string(Action a) {
  switch (a) {
    case Action::Forward: return "forward";
    case Action::PostNew: return "post_new";
    case Action::Inactive: return "inactive";
  }
  return "inactive";
}

inline std::string_view to_string(Occupation o) {
  if (o == Occupation::Unknown) return "Unknown";
  return kOccupationNames[static_cast<int>(o)];
}

// Strict parsers for canonical names (serialized artifacts only; free-form
// backend replies go through the alias-aware parsers in backend.hpp).
inline Attitude attitude_from_string(std::string_view s) {
  if (s == "positive") return Attitude::Positive;
  if (s == "negative") return Attitude::Negative;
  throw std::invalid_argument("bad attitude name: " + std::string(s));
}

inline EmotionLevel emotion_from_string(std::string_view s) {
  if (s == "calm") return EmotionLevel::Calm;
  if (s == "moderate") return EmotionLevel::Moderate;
  if (s == "intense") return EmotionLevel::Intense;
  throw std::invalid_argument("bad emotion name: " + std::string(s));
}

inline Gender gender_from_string(std::string_view s) {
  if (s == "female") return Gender::Female;
  if (s == "male") return Gender::Male;
  if (s == "unknown") return Gender::Unknown;
  throw std::invalid_argument("bad gender name: " + std::string(s));
}

inline Occupation occupation_from_string(std::string_view s) {
  for (int i = 0; i < kOccupationCount; ++i) {
    if (s == kOccupationNames[i]) return static_cast<Occupation>(i);
  }
  if (s == "Unknown") return Occupation::Unknown;
  throw std::invalid_argument("bad occupation name: " + std::string(s));
}

inline Action action_from_string(std::string_view s) {
  if (s == "forward") return Action::Forward;
  if (s == "post_new") return Action::PostNew;
  if (s == "inactive") return Action::Inactive;
  throw std::invalid_argument("bad action name: " + std::string(s));
}

inline SourceRelation source_relation_from_string(std::string_view s) {
  if (s == "unidirectional_followee") return SourceRelation::UnidirectionalFollowee;
  if (s == "mutual_followee") return SourceRelation::MutualFollowee;
  if (s == "platform_recommendation") return SourceRelation::PlatformRecommendation;
  if (s == "self_post") return SourceRelation::SelfPost;
  throw std::invalid_argument("bad source relation: " + std::string(s));
}

inline Attitude opposite(Attitude a) {
  return a == Attitude::Positive ? Attitude::Negative : Attitude::Positive;
}

// Canonical rendering of a user's fundamental attributes; relevance scoring
// and prompt context both depend on this exact form.
inline std::string attribute_text(const Demographics& d, const std::string& description) {
  std::string out = "age: " + std::to_string(d.age) + "; gender: " +
                    std::string(to_string(d.gender)) + "; occupation: " +
                    std::string(to_string(d.occupation));
  if (!description.empty()) out += "; " + description;
  return out;
}

}  // namespace s3
