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
#include <istream>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "s3/dataset.hpp"
#include "s3/types.hpp"

namespace s3 {

// Directed follow graph. Edges are stored followee -> follower, so edge
// direction equals message-flow direction: out-neighbors of u are u's
// followers, in-neighbors are the accounts u follows. Adjacency lists are
// sorted; no self-loops.
class SocialGraph {
 public:
  SocialGraph() = default;

  explicit SocialGraph(std::vector<std::string> node_ids) : nodes_(std::move(node_ids)) {
    std::sort(nodes_.begin(), nodes_.end());
    nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
    followers_.resize(nodes_.size());
    followees_.resize(nodes_.size());
    for (size_t i = 0; i < nodes_.size(); ++i) index_[nodes_[i]] = static_cast<int>(i);
  }

  // Adds followee -> follower. Returns false for self-loops and unknown
  // endpoints; duplicates are ignored.
  bool add_edge(const std::string& followee, const std::string& follower) {
    if (followee == follower) return false;
    auto a = index_.find(followee);
    auto b = index_.find(follower);
    if (a == index_.end() || b == index_.end()) return false;
    auto& out = followers_[a->second];
    auto it = std::lower_bound(out.begin(), out.end(), b->second);
    if (it != out.end() && *it == b->second) return true;
    out.insert(it, b->second);
    auto& in = followees_[b->second];
    in.insert(std::lower_bound(in.begin(), in.end(), a->second), a->second);
    ++n_edges_;
    return true;
  }

  bool has_node(const std::string& id) const { return index_.count(id) > 0; }

  int node_index(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw std::out_of_range("unknown user: " + id);
    return it->second;
  }

  const std::vector<std::string>& nodes() const { return nodes_; }
  size_t node_count() const { return nodes_.size(); }
  size_t edge_count() const { return n_edges_; }

  const std::string& node_id(int idx) const { return nodes_.at(idx); }

  const std::vector<int>& followers_of(int idx) const { return followers_.at(idx); }
  const std::vector<int>& followees_of(int idx) const { return followees_.at(idx); }

  const std::vector<int>& followers_of(const std::string& id) const {
    return followers_[node_index(id)];
  }
  const std::vector<int>& followees_of(const std::string& id) const {
    return followees_[node_index(id)];
  }

  size_t follower_count(const std::string& id) const { return followers_of(id).size(); }
  size_t followee_count(const std::string& id) const { return followees_of(id).size(); }

  // True if `follower` follows `followee` (edge followee -> follower exists).
  bool follows(int follower, int followee) const {
    const auto& out = followers_.at(followee);
    return std::binary_search(out.begin(), out.end(), follower);
  }

  bool mutual(int a, int b) const { return follows(a, b) && follows(b, a); }

  SourceRelation relation(int author, int recipient) const {
    if (author == recipient) return SourceRelation::SelfPost;
    return mutual(author, recipient) ? SourceRelation::MutualFollowee
                                     : SourceRelation::UnidirectionalFollowee;
  }

 private:
  std::vector<std::string> nodes_;  // sorted
  std::unordered_map<std::string, int> index_;
  std::vector<std::vector<int>> followers_;  // out-neighbors
  std::vector<std::vector<int>> followees_;  // in-neighbors
  size_t n_edges_ = 0;
};

// Builds the propagation graph. An edge followee -> follower is created iff
// the follower lists the followee and the followee exists in `records`.
// Dangling followees and self-follows are recorded in `diag` if given.
inline SocialGraph build_graph(const std::vector<UserRecord>& records,
                               Diagnostics* diag = nullptr) {
  std::vector<std::string> ids;
  ids.reserve(records.size());
  for (const auto& r : records) ids.push_back(r.user_id);
  SocialGraph g(std::move(ids));
  for (const auto& r : records) {
    for (const auto& followee : r.followees) {
      if (followee == r.user_id) {
        if (diag) diag->dropped_edges.push_back({r.user_id, followee, "self-follow"});
        continue;
      }
      if (!g.has_node(followee)) {
        if (diag) diag->dropped_edges.push_back({r.user_id, followee, "dangling followee"});
        continue;
      }
      g.add_edge(followee, r.user_id);
    }
  }
  return g;
}

// Seed users have at least one post containing any keyword (case-insensitive
// substring). The returned set is the seeds plus their direct followees and
// followers, sorted by user_id.
inline std::vector<UserRecord> extract_event_subgraph(
    const std::vector<UserRecord>& records, const std::vector<std::string>& keywords) {
  if (keywords.empty()) throw std::invalid_argument("keywords must be non-empty");

  std::unordered_map<std::string, const UserRecord*> by_id;
  for (const auto& r : records) by_id[r.user_id] = &r;

  std::set<std::string> selected;
  std::vector<const UserRecord*> seeds;
  for (const auto& r : records) {
    bool hit = false;
    for (const auto& p : r.posts) {
      for (const auto& k : keywords) {
        if (contains_ci(p.text, k)) {
          hit = true;
          break;
        }
      }
      if (hit) break;
    }
    if (hit) {
      seeds.push_back(&r);
      selected.insert(r.user_id);
    }
  }

  // One hop from each seed, ignoring direction.
  std::unordered_set<std::string> seed_ids;
  for (const auto* s : seeds) seed_ids.insert(s->user_id);
  for (const auto* s : seeds) {
    for (const auto& followee : s->followees) {
      if (by_id.count(followee)) selected.insert(followee);
    }
  }
  for (const auto& r : records) {
    for (const auto& followee : r.followees) {
      if (seed_ids.count(followee)) {
        selected.insert(r.user_id);
        break;
      }
    }
  }

  std::vector<UserRecord> out;
  out.reserve(selected.size());
  for (const auto& id : selected) out.push_back(*by_id.at(id));
  return out;
}

struct CategoryThresholds {
  double r_inf = 10.0;
  long k_low = 3;
  long p_low = 2;
};

// Influential: followers >= r_inf * max(1, followees). Low-impact: few
// followers and few posts. Checked in that order, so the three categories
// always partition the nodes.
inline UserCategory classify_user(const SocialGraph& g, const std::string& user_id,
                                  long post_count,
                                  const CategoryThresholds& t = {}) {
  const auto followers = static_cast<double>(g.follower_count(user_id));
  const auto followees = static_cast<double>(g.followee_count(user_id));
  if (followers >= t.r_inf * std::max(1.0, followees)) return UserCategory::Influential;
  if (followers <= static_cast<double>(t.k_low) && post_count <= t.p_low) {
    return UserCategory::LowImpact;
  }
  return UserCategory::Regular;
}

// Deterministic edge list: `followee<TAB>follower`, sorted.
inline void write_edge_list(const SocialGraph& g, std::ostream& out) {
  for (size_t i = 0; i < g.node_count(); ++i) {
    for (int f : g.followers_of(static_cast<int>(i))) {
      out << g.node_id(static_cast<int>(i)) << '\t' << g.node_id(f) << '\n';
    }
  }
}

inline SocialGraph read_edge_list(std::istream& in, std::vector<std::string> all_nodes) {
  std::vector<std::pair<std::string, std::string>> edges;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw std::invalid_argument("bad edge line: " + line);
    edges.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  if (all_nodes.empty()) {
    std::set<std::string> ids;
    for (const auto& [a, b] : edges) {
      ids.insert(a);
      ids.insert(b);
    }
    all_nodes.assign(ids.begin(), ids.end());
  }
  SocialGraph g(std::move(all_nodes));
  for (const auto& [followee, follower] : edges) g.add_edge(followee, follower);
  return g;
}

}  // namespace s3
