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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "s3/util.hpp"

namespace s3 {

inline constexpr size_t kEmbeddingDim = 256;

// Deterministic fallback embedding: hashed character-trigram counts,
// L2-normalized. Empty text maps to the zero vector; texts shorter than one
// trigram are space-padded so any non-empty text embeds to a unit vector.
inline std::vector<double> embed_trigram(std::string_view text) {
  std::vector<double> v(kEmbeddingDim, 0.0);
  if (text.empty()) return v;

  std::string padded;
  if (text.size() < 3) {
    padded.assign(text);
    padded.resize(3, ' ');
    text = padded;
  }
  for (size_t i = 0; i + 3 <= text.size(); ++i) {
    v[fnv1a64(text.substr(i, 3)) % kEmbeddingDim] += 1.0;
  }
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

// Cosine between an agent-attribute embedding and a message embedding,
// affinely mapped from [-1,1] to [0,1]. Zero-norm embeddings score a logged
// neutral 0.5.
inline double relevance_score(std::span<const double> agent_embedding,
                              std::span<const double> message_embedding) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  const size_t n = std::min(agent_embedding.size(), message_embedding.size());
  for (size_t i = 0; i < n; ++i) {
    dot += agent_embedding[i] * message_embedding[i];
    na += agent_embedding[i] * agent_embedding[i];
    nb += message_embedding[i] * message_embedding[i];
  }
  if (na == 0.0 || nb == 0.0) {
    log_warn("zero-norm embedding in relevance score; scoring neutral 0.5");
    return 0.5;
  }
  const double cos = dot / (std::sqrt(na) * std::sqrt(nb));
  return (cos + 1.0) / 2.0;
}

}  // namespace s3
