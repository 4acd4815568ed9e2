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
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "s3/util.hpp"

namespace s3 {

struct Post {
  int t = 0;
  std::string text;
};

struct UserRecord {
  std::string user_id;
  std::string description;
  std::vector<Post> posts;      // kept non-decreasing in t
  std::vector<std::string> followees;
};

// Everything that was dropped on the way in, with a reason. Nothing is
// silently discarded.
struct Diagnostics {
  struct SkippedLine {
    int line = 0;
    std::string reason;
  };
  struct DroppedEdge {
    std::string user;
    std::string followee;
    std::string reason;
  };
  std::vector<SkippedLine> skipped_lines;
  std::vector<DroppedEdge> dropped_edges;

  bool empty() const { return skipped_lines.empty() && dropped_edges.empty(); }
};

inline nlohmann::json to_json(const Diagnostics& d) {
  nlohmann::json j;
  j["skipped_lines"] = nlohmann::json::array();
  for (const auto& s : d.skipped_lines) {
    j["skipped_lines"].push_back({{"line", s.line}, {"reason", s.reason}});
  }
  j["dropped_edges"] = nlohmann::json::array();
  for (const auto& e : d.dropped_edges) {
    j["dropped_edges"].push_back(
        {{"user", e.user}, {"followee", e.followee}, {"reason", e.reason}});
  }
  return j;
}

struct LoadResult {
  std::vector<UserRecord> records;
  Diagnostics diagnostics;
};

inline nlohmann::json record_to_json(const UserRecord& r) {
  nlohmann::json j;
  j["user_id"] = r.user_id;
  j["description"] = r.description;
  j["posts"] = nlohmann::json::array();
  for (const auto& p : r.posts) j["posts"].push_back({{"t", p.t}, {"text", p.text}});
  j["followees"] = r.followees;
  return j;
}

inline UserRecord record_from_json(const nlohmann::json& j) {
  UserRecord r;
  r.user_id = j.at("user_id").get<std::string>();
  if (r.user_id.empty()) throw std::invalid_argument("empty user_id");
  r.description = j.value("description", std::string{});
  if (j.contains("posts")) {
    for (const auto& p : j.at("posts")) {
      r.posts.push_back({p.at("t").get<int>(), p.at("text").get<std::string>()});
    }
  }
  if (j.contains("followees")) {
    r.followees = j.at("followees").get<std::vector<std::string>>();
  }
  // Establish the ordering invariant; ties keep file order.
  std::stable_sort(r.posts.begin(), r.posts.end(),
                   [](const Post& a, const Post& b) { return a.t < b.t; });
  return r;
}

// Reads a JSON-lines dataset. Malformed lines land in diagnostics; duplicate
// user ids are fatal.
inline LoadResult load_dataset_stream(std::istream& in) {
  LoadResult result;
  std::unordered_set<std::string> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    UserRecord record;
    try {
      record = record_from_json(nlohmann::json::parse(line));
    } catch (const std::exception& e) {
      result.diagnostics.skipped_lines.push_back({line_no, e.what()});
      continue;
    }
    if (!seen.insert(record.user_id).second) {
      throw std::runtime_error("duplicate user_id: " + record.user_id);
    }
    result.records.push_back(std::move(record));
  }
  return result;
}

inline LoadResult load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read dataset: " + path);
  return load_dataset_stream(in);
}

inline void write_records_jsonl(const std::vector<UserRecord>& records, std::ostream& out) {
  for (const auto& r : records) out << record_to_json(r).dump() << '\n';
}

}  // namespace s3
