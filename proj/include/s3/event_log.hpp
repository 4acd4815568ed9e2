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

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "s3/metrics.hpp"
#include "s3/types.hpp"

namespace s3 {

// Append-only run journal: one JSON line per produced message, per delivery,
// per action decision, and per state transition. Enough to replay a run or
// build evaluation sets after the fact.

struct MessageRecord {
  Message message;
};

struct DeliveryRecord {
  int step = 0;  // step at which the recipient consumes the message
  std::string message_id;
  std::string to;
  SourceRelation source = SourceRelation::UnidirectionalFollowee;
};

struct ActionRecord {
  int step = 0;
  std::string user;
  std::string message_id;
  Action action = Action::Inactive;
  double score = 0.0;
};

struct TransitionRecord {
  int step = 0;
  std::string user;
  std::string field;  // "aware" | "emotion" | "attitude"
  std::string from;
  std::string to;
};

class EventLogWriter {
 public:
  explicit EventLogWriter(std::ostream& out) : out_(out) {}

  void write(const MessageRecord& r) {
    nlohmann::json j;
    j["type"] = "message";
    j["step"] = r.message.step;
    j["id"] = r.message.id;
    j["author"] = r.message.author;
    j["content"] = r.message.content;
    j["event"] = r.message.event_id;
    if (r.message.forward_of) j["forward_of"] = *r.message.forward_of;
    if (r.message.stance) j["stance"] = to_string(*r.message.stance);
    out_ << j.dump() << '\n';
  }

  void write(const DeliveryRecord& r) {
    nlohmann::json j;
    j["type"] = "delivery";
    j["step"] = r.step;
    j["id"] = r.message_id;
    j["to"] = r.to;
    j["source"] = to_string(r.source);
    out_ << j.dump() << '\n';
  }

  void write(const ActionRecord& r) {
    nlohmann::json j;
    j["type"] = "action";
    j["step"] = r.step;
    j["user"] = r.user;
    j["id"] = r.message_id;
    j["action"] = to_string(r.action);
    j["score"] = r.score;
    out_ << j.dump() << '\n';
  }

  void write(const TransitionRecord& r) {
    nlohmann::json j;
    j["type"] = "transition";
    j["step"] = r.step;
    j["user"] = r.user;
    j["field"] = r.field;
    j["from"] = r.from;
    j["to"] = r.to;
    out_ << j.dump() << '\n';
  }

 private:
  std::ostream& out_;
};

struct ParsedEventLog {
  std::vector<MessageRecord> messages;
  std::vector<DeliveryRecord> deliveries;
  std::vector<ActionRecord> actions;
  std::vector<TransitionRecord> transitions;
};

inline ParsedEventLog read_event_log(std::istream& in) {
  ParsedEventLog log;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const std::exception& e) {
      throw std::runtime_error("event log line " + std::to_string(line_no) + ": " + e.what());
    }
    const std::string type = j.at("type").get<std::string>();
    if (type == "message") {
      MessageRecord r;
      r.message.step = j.at("step").get<int>();
      r.message.id = j.at("id").get<std::string>();
      r.message.author = j.at("author").get<std::string>();
      r.message.content = j.at("content").get<std::string>();
      r.message.event_id = j.value("event", std::string{});
      if (j.contains("forward_of")) r.message.forward_of = j.at("forward_of").get<std::string>();
      if (j.contains("stance")) r.message.stance = attitude_from_string(j.at("stance").get<std::string>());
      log.messages.push_back(std::move(r));
    } else if (type == "delivery") {
      log.deliveries.push_back({j.at("step").get<int>(), j.at("id").get<std::string>(),
                                j.at("to").get<std::string>(),
                                source_relation_from_string(j.at("source").get<std::string>())});
    } else if (type == "action") {
      log.actions.push_back({j.at("step").get<int>(), j.at("user").get<std::string>(),
                             j.at("id").get<std::string>(),
                             action_from_string(j.at("action").get<std::string>()),
                             j.at("score").get<double>()});
    } else if (type == "transition") {
      log.transitions.push_back({j.at("step").get<int>(), j.at("user").get<std::string>(),
                                 j.at("field").get<std::string>(),
                                 j.at("from").get<std::string>(),
                                 j.at("to").get<std::string>()});
    } else {
      throw std::runtime_error("event log line " + std::to_string(line_no) +
                               ": unknown record type " + type);
    }
  }
  return log;
}

// Every action record is a delivery the recipient decided on.
inline std::vector<DeliveryOutcome> extract_delivery_outcomes(const ParsedEventLog& log) {
  std::vector<DeliveryOutcome> out;
  out.reserve(log.actions.size());
  for (const auto& a : log.actions) {
    out.push_back({a.user, a.message_id, a.score, a.action});
  }
  return out;
}

}  // namespace s3
