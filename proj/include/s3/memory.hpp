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

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "s3/types.hpp"

namespace s3 {

// Convex weights over the three influence factors.
struct InfluenceWeights {
  double time = 1.0 / 3.0;
  double relevance = 1.0 / 3.0;
  double authenticity = 1.0 / 3.0;

  void validate() const {
    if (time < 0 || relevance < 0 || authenticity < 0 ||
        std::abs(time + relevance + authenticity - 1.0) > 1e-9) {
      throw std::invalid_argument("influence weights must be non-negative and sum to 1");
    }
  }
};

struct AuthenticityTable {
  double self_post = 1.0;
  double mutual_followee = 0.8;
  double unidirectional_followee = 0.6;
  double platform_recommendation = 0.4;

  double get(SourceRelation s) const {
    switch (s) {
      case SourceRelation::SelfPost: return self_post;
      case SourceRelation::MutualFollowee: return mutual_followee;
      case SourceRelation::UnidirectionalFollowee: return unidirectional_followee;
      case SourceRelation::PlatformRecommendation: return platform_recommendation;
    }
    return platform_recommendation;
  }
};

// Exponential forgetting: exp(-lambda * elapsed).
inline double time_score(int received_step, int now_step, double lambda) {
  if (now_step < received_step) {
    throw std::invalid_argument("now_step precedes received_step");
  }
  if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
  return std::exp(-lambda * static_cast<double>(now_step - received_step));
}

inline double authenticity_score(SourceRelation s, const AuthenticityTable& table = {}) {
  return table.get(s);
}

struct MemoryItem {
  Message message;
  int received_step = 0;
  SourceRelation source = SourceRelation::UnidirectionalFollowee;
  double time_s = 1.0;
  double relevance_s = 0.5;
  double authenticity_s = 0.5;
  double combined = 0.0;
};

inline double combined_score(const MemoryItem& item, const InfluenceWeights& w) {
  return w.time * item.time_s + w.relevance * item.relevance_s +
         w.authenticity * item.authenticity_s;
}

// Capacity-bounded pool keeping the highest-combined-score items. Eviction
// removes the minimum by (combined, received_step, message id); items are
// held in insertion order.
class MemoryPool {
 public:
  explicit MemoryPool(size_t capacity = 16) : capacity_(capacity) {
    if (capacity_ == 0) throw std::invalid_argument("memory capacity must be >= 1");
  }

  size_t capacity() const { return capacity_; }
  size_t size() const { return items_.size(); }
  const std::vector<MemoryItem>& items() const { return items_; }

  bool contains(const std::string& message_id) const {
    for (const auto& it : items_) {
      if (it.message.id == message_id) return true;
    }
    return false;
  }

  // Returns the evicted item, if the insertion pushed the pool over capacity.
  std::optional<MemoryItem> insert(MemoryItem item, const InfluenceWeights& weights) {
    item.combined = combined_score(item, weights);
    items_.push_back(std::move(item));
    if (items_.size() <= capacity_) return std::nullopt;
    size_t victim = 0;
    for (size_t i = 1; i < items_.size(); ++i) {
      if (evicts_before(items_[i], items_[victim])) victim = i;
    }
    MemoryItem evicted = std::move(items_[victim]);
    items_.erase(items_.begin() + static_cast<std::ptrdiff_t>(victim));
    return evicted;
  }

  // Recomputes time and combined scores; relevance and authenticity stay.
  void rescore(int now_step, double lambda, const InfluenceWeights& weights) {
    for (auto& it : items_) {
      it.time_s = time_score(it.received_step, now_step, lambda);
      it.combined = combined_score(it, weights);
    }
  }

  static bool evicts_before(const MemoryItem& a, const MemoryItem& b) {
    if (a.combined != b.combined) return a.combined < b.combined;
    if (a.received_step != b.received_step) return a.received_step < b.received_step;
    return a.message.id < b.message.id;
  }

 private:
  size_t capacity_;
  std::vector<MemoryItem> items_;
};

}  // namespace s3
