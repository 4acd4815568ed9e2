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
#include <cmath>
#include <cstdint>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "s3/types.hpp"
#include "s3/util.hpp"

namespace s3 {

// One evaluated prediction. Classification tasks store class labels in
// `pred`/`truth` (binary: 1 positive, 0 negative) and a real-valued score for
// ranking metrics; the age regression task stores years in `pred`/`truth`.
struct EvalPoint {
  double score = 0.0;
  double pred = 0.0;
  double truth = 0.0;
};

using EvalSet = std::vector<EvalPoint>;

namespace detail {
inline void require_nonempty(const EvalSet& s) {
  if (s.empty()) throw std::invalid_argument("empty eval set");
}
}  // namespace detail

inline double accuracy(const EvalSet& s) {
  detail::require_nonempty(s);
  size_t correct = 0;
  for (const auto& p : s) correct += (p.pred == p.truth);
  return static_cast<double>(correct) / static_cast<double>(s.size());
}

// TP/(TP+FP); 0 when nothing was predicted positive.
inline double precision(const EvalSet& s) {
  detail::require_nonempty(s);
  size_t tp = 0, fp = 0;
  for (const auto& p : s) {
    if (p.pred == 1.0) (p.truth == 1.0 ? tp : fp)++;
  }
  if (tp + fp == 0) return 0.0;
  return static_cast<double>(tp) / static_cast<double>(tp + fp);
}

inline double recall(const EvalSet& s) {
  detail::require_nonempty(s);
  size_t tp = 0, fn = 0;
  for (const auto& p : s) {
    if (p.truth == 1.0) (p.pred == 1.0 ? tp : fn)++;
  }
  if (tp + fn == 0) return 0.0;
  return static_cast<double>(tp) / static_cast<double>(tp + fn);
}

// F1 on the positive class: 2PR/(P+R), 0 when P+R = 0.
inline double f1_binary(const EvalSet& s) {
  const double p = precision(s);
  const double r = recall(s);
  if (p + r == 0.0) return 0.0;
  return 2.0 * p * r / (p + r);
}

// Unweighted mean of per-class one-vs-rest F1 over the fixed class set
// [0, n_classes). Classes with neither support nor predictions contribute 0.
inline double macro_f1(const EvalSet& s, int n_classes) {
  detail::require_nonempty(s);
  if (n_classes <= 0) throw std::invalid_argument("n_classes must be positive");
  double sum = 0.0;
  for (int c = 0; c < n_classes; ++c) {
    size_t tp = 0, fp = 0, fn = 0;
    for (const auto& p : s) {
      const bool pc = p.pred == static_cast<double>(c);
      const bool tc = p.truth == static_cast<double>(c);
      if (pc && tc) ++tp;
      else if (pc) ++fp;
      else if (tc) ++fn;
    }
    const double prec = (tp + fp) ? static_cast<double>(tp) / (tp + fp) : 0.0;
    const double rec = (tp + fn) ? static_cast<double>(tp) / (tp + fn) : 0.0;
    sum += (prec + rec > 0.0) ? 2.0 * prec * rec / (prec + rec) : 0.0;
  }
  return sum / n_classes;
}

// Rank-statistic AUC: probability a uniformly random positive outscores a
// uniformly random negative, ties counted 1/2. Absent when one class is
// missing.
inline std::optional<double> auc(const EvalSet& s) {
  detail::require_nonempty(s);
  std::vector<size_t> order(s.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return s[a].score < s[b].score; });

  size_t n_pos = 0, n_neg = 0;
  for (const auto& p : s) (p.truth == 1.0 ? n_pos : n_neg)++;
  if (n_pos == 0 || n_neg == 0) return std::nullopt;

  // Sum of average ranks (1-based) over positives.
  double rank_sum = 0.0;
  size_t i = 0;
  while (i < order.size()) {
    size_t j = i;
    while (j < order.size() && s[order[j]].score == s[order[i]].score) ++j;
    const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (size_t k = i; k < j; ++k) {
      if (s[order[k]].truth == 1.0) rank_sum += avg_rank;
    }
    i = j;
  }
  const double u = rank_sum - static_cast<double>(n_pos) * (n_pos + 1) / 2.0;
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

namespace detail {
inline void require_positive_truths(const EvalSet& s) {
  require_nonempty(s);
  for (const auto& p : s) {
    if (p.truth <= 0.0) throw std::invalid_argument("true age must be positive");
  }
}
}  // namespace detail

inline double mse(const EvalSet& s) {
  detail::require_positive_truths(s);
  double sum = 0.0;
  for (const auto& p : s) sum += (p.pred - p.truth) * (p.pred - p.truth);
  return sum / static_cast<double>(s.size());
}

inline double mae(const EvalSet& s) {
  detail::require_positive_truths(s);
  double sum = 0.0;
  for (const auto& p : s) sum += std::abs(p.pred - p.truth);
  return sum / static_cast<double>(s.size());
}

// Mean absolute percentage error, in percent.
inline double mean_pct_error(const EvalSet& s) {
  detail::require_positive_truths(s);
  double sum = 0.0;
  for (const auto& p : s) sum += std::abs(p.pred - p.truth) / p.truth;
  return 100.0 * sum / static_cast<double>(s.size());
}

inline double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dimension mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw std::invalid_argument("zero-norm vector");
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

// --- population-level series ---------------------------------------------

// Projection of an agent used by the population measurements.
struct AgentSnapshot {
  bool aware = false;
  EmotionLevel emotion = EmotionLevel::Calm;
  std::optional<Attitude> attitude;
};

// Mean normalized emotion index over aware agents; 0 when none is aware.
inline double emotion_density(std::span<const AgentSnapshot> agents) {
  double sum = 0.0;
  size_t aware = 0;
  for (const auto& a : agents) {
    if (!a.aware) continue;
    ++aware;
    sum += static_cast<double>(static_cast<int>(a.emotion));
  }
  if (aware == 0) return 0.0;
  return sum / (2.0 * static_cast<double>(aware));
}

// Positives over attitude holders; absent when nobody holds an attitude.
inline std::optional<double> positive_fraction(std::span<const AgentSnapshot> agents) {
  size_t holders = 0, positives = 0;
  for (const auto& a : agents) {
    if (!a.attitude) continue;
    ++holders;
    positives += (*a.attitude == Attitude::Positive);
  }
  if (holders == 0) return std::nullopt;
  return static_cast<double>(positives) / static_cast<double>(holders);
}

struct MetricsRow {
  int step = 0;
  long aware = 0;
  double emotion_density = 0.0;
  std::optional<double> positive_fraction;
  long messages = 0;

  bool operator==(const MetricsRow&) const = default;
};

using MetricsSeries = std::vector<MetricsRow>;

inline void write_series_csv(const MetricsSeries& series, std::ostream& out) {
  out << "step,aware,emotion_density,positive_fraction,messages\n";
  for (const auto& r : series) {
    out << r.step << ',' << r.aware << ',' << format_double(r.emotion_density) << ',';
    if (r.positive_fraction) out << format_double(*r.positive_fraction);
    out << ',' << r.messages << '\n';
  }
}

inline MetricsSeries read_series_csv(std::istream& in) {
  MetricsSeries series;
  std::string line;
  if (!std::getline(in, line)) return series;
  if (line != "step,aware,emotion_density,positive_fraction,messages") {
    throw std::invalid_argument("bad series header: " + line);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    size_t start = 0;
    for (size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == ',') {
        fields.push_back(line.substr(start, i - start));
        start = i + 1;
      }
    }
    if (fields.size() != 5) throw std::invalid_argument("bad series row: " + line);
    MetricsRow r;
    r.step = std::stoi(fields[0]);
    r.aware = std::stol(fields[1]);
    auto parse_d = [](const std::string& f) {
      double v = 0.0;
      auto res = std::from_chars(f.data(), f.data() + f.size(), v);
      if (res.ec != std::errc{}) throw std::invalid_argument("bad number: " + f);
      return v;
    };
    r.emotion_density = parse_d(fields[2]);
    if (!fields[3].empty()) r.positive_fraction = parse_d(fields[3]);
    r.messages = std::stol(fields[4]);
    series.push_back(r);
  }
  return series;
}

// --- eval set I/O ----------------------------------------------------------

inline void write_eval_csv(const EvalSet& s, std::ostream& out) {
  out << "score,pred,true\n";
  for (const auto& p : s) {
    out << format_double(p.score) << ',' << format_double(p.pred) << ','
        << format_double(p.truth) << '\n';
  }
}

inline EvalSet read_eval_csv(std::istream& in) {
  EvalSet s;
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty eval csv");
  if (line != "score,pred,true") throw std::invalid_argument("bad eval header: " + line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    EvalPoint p;
    const char* ptr = line.data();
    const char* end = line.data() + line.size();
    for (double* field : {&p.score, &p.pred, &p.truth}) {
      auto res = std::from_chars(ptr, end, *field);
      if (res.ec != std::errc{}) throw std::invalid_argument("bad eval row: " + line);
      ptr = res.ptr;
      if (ptr != end && *ptr == ',') ++ptr;
    }
    s.push_back(p);
  }
  return s;
}

// --- interaction eval construction -----------------------------------------

// One decision point from a run: a delivered message and the action the
// recipient took on it, with the backend's propensity score.
struct DeliveryOutcome {
  std::string user;
  std::string message_id;
  double score = 0.0;
  Action action = Action::Inactive;
};

// Positives are deliveries the recipient acted on; negatives are a seeded
// sample of inactive deliveries, negative_ratio per positive.
inline EvalSet build_interaction_eval_set(std::span<const DeliveryOutcome> outcomes,
                                          double negative_ratio,
                                          std::uint64_t seed) {
  if (negative_ratio < 0.0) throw std::invalid_argument("negative_ratio must be >= 0");
  std::vector<const DeliveryOutcome*> positives, negatives;
  for (const auto& o : outcomes) {
    (o.action == Action::Inactive ? negatives : positives).push_back(&o);
  }
  if (positives.empty()) {
    throw std::invalid_argument("interaction eval set has no positive samples");
  }

  const size_t want = std::min(
      negatives.size(),
      static_cast<size_t>(negative_ratio * static_cast<double>(positives.size()) + 0.5));
  // Seeded Fisher-Yates prefix over the negatives, in input order.
  for (size_t i = 0; i < want; ++i) {
    const std::uint64_t h =
        splitmix64(seed ^ splitmix64(0x9e37u + static_cast<std::uint64_t>(i)));
    const size_t j = i + static_cast<size_t>(h % (negatives.size() - i));
    std::swap(negatives[i], negatives[j]);
  }
  negatives.resize(want);

  EvalSet out;
  out.reserve(positives.size() + negatives.size());
  for (const auto* o : positives) {
    out.push_back({o->score, o->score >= 0.5 ? 1.0 : 0.0, 1.0});
  }
  for (const auto* o : negatives) {
    out.push_back({o->score, o->score >= 0.5 ? 1.0 : 0.0, 0.0});
  }
  return out;
}

}  // namespace s3
