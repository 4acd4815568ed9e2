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

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "s3/dataset.hpp"
#include "s3/embedding.hpp"
#include "s3/memory.hpp"
#include "s3/metrics.hpp"
#include "s3/types.hpp"
#include "s3/util.hpp"

namespace s3 {

// Per-agent mutable state, owned by the engine and mutated only between step
// barriers.
struct AgentState {
  std::string user_id;
  Demographics demographics;
  UserCategory category = UserCategory::Regular;
  std::string description;

  EmotionLevel emotion = EmotionLevel::Calm;
  std::optional<Attitude> attitude;
  std::set<std::string> aware_events;
  MemoryPool memory{16};
  std::vector<Message> history;

  // Dedup set: ids this agent has already received or produced.
  std::set<std::string> seen_messages;
  int steps_since_stimulus = 0;

  bool aware(const std::string& event_id) const { return aware_events.count(event_id) > 0; }

  // One-way: awareness is never reset.
  void mark_aware(const std::string& event_id) { aware_events.insert(event_id); }

  AgentSnapshot snapshot(const std::string& event_id) const {
    return {aware(event_id), emotion, attitude};
  }
};

inline AgentState init_agent(const UserRecord& record, const Demographics& demographics,
                             UserCategory category, size_t memory_capacity = 16) {
  AgentState s;
  s.user_id = record.user_id;
  s.demographics = demographics;
  s.category = category;
  s.description = record.description;
  s.memory = MemoryPool(memory_capacity);
  s.history.reserve(record.posts.size());
  for (size_t i = 0; i < record.posts.size(); ++i) {
    Message m;
    m.id = "h-" + record.user_id + "-" + std::to_string(i);
    m.author = record.user_id;
    m.step = record.posts[i].t;
    m.content = record.posts[i].text;
    s.history.push_back(std::move(m));
  }
  return s;
}

// Steps the emotion down one level once the idle threshold is crossed.
// Returns true if the level changed; the caller resets its idle counter so
// each further threshold crossing costs another `decay_threshold` steps.
inline bool decay_emotion(AgentState& state, int steps_since_last_stimulus,
                          int decay_threshold) {
  if (steps_since_last_stimulus < decay_threshold) return false;
  if (state.emotion == EmotionLevel::Calm) return false;
  state.emotion = static_cast<EmotionLevel>(static_cast<int>(state.emotion) - 1);
  return true;
}

}  // namespace s3
