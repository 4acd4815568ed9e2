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
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "s3/agent.hpp"
#include "s3/backend.hpp"
#include "s3/event_log.hpp"
#include "s3/graph.hpp"
#include "s3/memory.hpp"
#include "s3/metrics.hpp"
#include "s3/types.hpp"

namespace s3 {

struct SeedPost {
  std::string author;
  std::string text;
  int step = 0;
  std::optional<Attitude> stance;
};

struct EventConfig {
  std::string event_id = "event";
  std::string description;
  std::vector<SeedPost> seed_posts;
  int max_steps = 20;
  Attitude default_stance = Attitude::Negative;
};

// Optional fourth delivery channel: each step, the K most-forwarded messages
// go to a seeded random sample of unaware agents.
struct RecommendationConfig {
  bool enabled = false;
  int top_k = 3;
  int sample_size = 5;
};

struct EngineConfig {
  double lambda = 0.1;
  int decay_threshold = 3;
  size_t memory_capacity = 16;
  InfluenceWeights weights;
  AuthenticityTable authenticity;
  RecommendationConfig recommendation;
  int threads = 1;
  std::uint64_t seed = 0;
};

struct Delivery {
  Message message;
  SourceRelation source = SourceRelation::UnidirectionalFollowee;
};

// The simulation state. Owned by the run loop: within a step, workers see
// read-only snapshots and all mutations are committed at a barrier in
// ascending user_id order, so results do not depend on the thread count.
struct World {
  SocialGraph graph;
  std::map<std::string, AgentState> agents;
  EngineConfig cfg;
  EventConfig event;
  CognitionBackend* backend = nullptr;
  EventLogWriter* log = nullptr;

  int clock = 0;
  std::mt19937_64 rng;
  std::map<std::string, std::vector<Delivery>> mailboxes;  // consumed next step
  std::vector<SeedPost> scheduled;                         // future-step seed posts
  std::map<std::string, Message> message_store;
  std::map<std::string, long> forward_counts;
  long last_step_messages = 0;
  bool injected = false;
};

inline World make_world(SocialGraph graph, std::map<std::string, AgentState> agents,
                        EngineConfig cfg, CognitionBackend& backend,
                        EventLogWriter* log = nullptr) {
  cfg.weights.validate();
  World w;
  w.graph = std::move(graph);
  w.agents = std::move(agents);
  w.cfg = cfg;
  w.backend = &backend;
  w.log = log;
  w.rng.seed(cfg.seed);
  return w;
}

namespace engine_detail {

inline std::string make_message_id(const std::string& event_id, int step,
                                   const std::string& author, int k) {
  return event_id + "-s" + std::to_string(step) + "-" + author + "-" + std::to_string(k);
}

inline AgentContext context_of(const AgentState& a) {
  AgentContext ctx;
  ctx.user_id = a.user_id;
  ctx.demographics = a.demographics;
  ctx.description = a.description;
  ctx.history_texts.reserve(a.history.size());
  for (const auto& m : a.history) ctx.history_texts.push_back(m.content);
  ctx.emotion = a.emotion;
  ctx.attitude = a.attitude;
  return ctx;
}

// Registers a freshly produced message on its author: history, dedup set,
// and the author's own memory pool (self posts are memorable).
inline void register_own_message(World& w, AgentState& agent, const Message& msg,
                                 const std::vector<double>& attr_embedding) {
  agent.history.push_back(msg);
  agent.seen_messages.insert(msg.id);
  MemoryItem item;
  item.message = msg;
  item.received_step = msg.step;
  item.source = SourceRelation::SelfPost;
  item.time_s = 1.0;
  item.relevance_s = relevance_score(attr_embedding, w.backend->embed(msg.content));
  item.authenticity_s = w.cfg.authenticity.get(SourceRelation::SelfPost);
  agent.memory.insert(std::move(item), w.cfg.weights);
  w.message_store[msg.id] = msg;
}

inline void deliver_to_followers(World& w, const Message& msg) {
  const int author_idx = w.graph.node_index(msg.author);
  for (int f : w.graph.followers_of(author_idx)) {
    const std::string& to = w.graph.node_id(f);
    const SourceRelation source = w.graph.relation(author_idx, f);
    w.mailboxes[to].push_back({msg, source});
    if (w.log) w.log->write(DeliveryRecord{msg.step + 1, msg.id, to, source});
  }
}

// Applies one seed post at `step`: author becomes aware, the post enters the
// author's history and memory, and followers get it next step.
inline void apply_seed_post(World& w, const SeedPost& post, int step,
                            std::map<std::string, int>& production_counter) {
  auto it = w.agents.find(post.author);
  if (it == w.agents.end() || !w.graph.has_node(post.author)) {
    throw std::invalid_argument("seed author not in graph: " + post.author);
  }
  AgentState& author = it->second;

  Message msg;
  msg.id = make_message_id(w.event.event_id, step, post.author,
                           production_counter[post.author]++);
  msg.author = post.author;
  msg.step = step;
  msg.content = post.text;
  msg.event_id = w.event.event_id;
  msg.stance = post.stance;

  if (!author.aware(w.event.event_id)) {
    author.mark_aware(w.event.event_id);
    if (w.log) w.log->write(TransitionRecord{step, post.author, "aware", "false", "true"});
  }
  if (w.log) w.log->write(MessageRecord{msg});
  register_own_message(w, author, msg,
                       w.backend->embed(attribute_text(author.demographics, author.description)));
  deliver_to_followers(w, msg);
  ++w.last_step_messages;
}

struct CognitionResult {
  EmotionLevel emotion = EmotionLevel::Calm;
  std::optional<Attitude> attitude;
  std::vector<double> relevances;
  std::vector<ActionDecision> decisions;
  std::optional<std::string> new_post_text;
  std::vector<double> attr_embedding;
};

// Pure function of the agent's pre-step snapshot and its inbox; safe to run
// on any worker thread.
inline CognitionResult compute_cognition(const World& w, const AgentState& agent,
                                         const std::vector<Delivery>& inbox) {
  CognitionResult result;
  CognitionBackend& backend = *w.backend;

  std::vector<Message> received;
  received.reserve(inbox.size());
  for (const auto& d : inbox) received.push_back(d.message);

  AgentContext ctx = context_of(agent);
  result.attr_embedding = backend.embed(attribute_text(agent.demographics, agent.description));
  const auto& memory_context = agent.memory.items();

  result.emotion = backend.next_emotion(ctx, received, memory_context);
  result.attitude = agent.attitude ? backend.next_attitude(ctx, received)
                                   : backend.initial_attitude(ctx);

  // Decisions see the updated state summary.
  AgentContext updated = ctx;
  updated.emotion = result.emotion;
  updated.attitude = result.attitude;

  result.relevances.reserve(inbox.size());
  result.decisions.reserve(inbox.size());
  bool wants_new_post = false;
  for (const auto& d : inbox) {
    const double rel =
        relevance_score(result.attr_embedding, backend.embed(d.message.content));
    result.relevances.push_back(rel);
    const ActionDecision decision = backend.decide_action(updated, d.message, rel);
    result.decisions.push_back(decision);
    wants_new_post |= decision.action == Action::PostNew;
  }
  if (wants_new_post) {
    result.new_post_text =
        backend.generate_post(updated, w.event.description, memory_context);
  }
  return result;
}

}  // namespace engine_detail

// Places seed posts: step-0 posts are applied immediately (authors aware,
// followers' mailboxes filled for step 1); later posts are scheduled.
inline void inject_event(World& w, EventConfig event) {
  if (w.injected || w.clock != 0) {
    throw std::logic_error("inject_event requires a fresh world at clock 0");
  }
  for (const auto& p : event.seed_posts) {
    if (!w.graph.has_node(p.author)) {
      throw std::invalid_argument("seed author not in graph: " + p.author);
    }
  }
  w.event = std::move(event);
  w.injected = true;
  w.last_step_messages = 0;
  std::map<std::string, int> counter;
  for (const auto& p : w.event.seed_posts) {
    if (p.step < 0) throw std::invalid_argument("seed post step must be >= 0");
    if (p.step == 0) {
      engine_detail::apply_seed_post(w, p, 0, counter);
    } else {
      w.scheduled.push_back(p);
    }
  }
  std::stable_sort(w.scheduled.begin(), w.scheduled.end(),
                   [](const SeedPost& a, const SeedPost& b) { return a.step < b.step; });
}

// Nothing left that could change an observable: no pending deliveries, no
// scheduled posts, every emotion already at the floor.
inline bool quiescent(const World& w) {
  if (!w.mailboxes.empty() || !w.scheduled.empty()) return false;
  for (const auto& [id, agent] : w.agents) {
    if (agent.emotion != EmotionLevel::Calm) return false;
  }
  return true;
}

// One synchronous round. Messages produced here are delivered next step.
inline void step(World& w) {
  if (!w.injected) throw std::logic_error("step before inject_event");
  if (w.clock >= w.event.max_steps) throw std::logic_error("step past max_steps");
  const int s = w.clock + 1;
  w.last_step_messages = 0;

  const std::map<std::string, std::vector<Delivery>> inboxes = std::move(w.mailboxes);
  w.mailboxes.clear();

  // Effective inbox drops messages the agent has already seen or produced.
  std::vector<std::pair<AgentState*, std::vector<Delivery>>> busy;
  for (const auto& [user, deliveries] : inboxes) {
    auto it = w.agents.find(user);
    if (it == w.agents.end()) continue;
    std::vector<Delivery> fresh;
    std::set<std::string> batch_seen;
    for (const auto& d : deliveries) {
      if (it->second.seen_messages.count(d.message.id)) continue;
      if (!batch_seen.insert(d.message.id).second) continue;
      fresh.push_back(d);
    }
    if (!fresh.empty()) busy.emplace_back(&it->second, std::move(fresh));
  }

  // Cognition on pre-step snapshots, optionally in parallel.
  std::vector<engine_detail::CognitionResult> results(busy.size());
  const int threads = std::max(1, w.cfg.threads);
  if (threads == 1 || busy.size() <= 1) {
    for (size_t i = 0; i < busy.size(); ++i) {
      results[i] = engine_detail::compute_cognition(w, *busy[i].first, busy[i].second);
    }
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (size_t i = static_cast<size_t>(t); i < busy.size(); i += static_cast<size_t>(threads)) {
          results[i] = engine_detail::compute_cognition(w, *busy[i].first, busy[i].second);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  // Commit in ascending user_id order (busy is sorted: map iteration order).
  std::vector<Message> produced;
  std::map<std::string, int> production_counter;
  for (size_t i = 0; i < busy.size(); ++i) {
    AgentState& agent = *busy[i].first;
    const auto& inbox = busy[i].second;
    const auto& r = results[i];

    if (!agent.aware(w.event.event_id)) {
      agent.mark_aware(w.event.event_id);
      if (w.log) w.log->write(TransitionRecord{s, agent.user_id, "aware", "false", "true"});
    }
    agent.memory.rescore(s, w.cfg.lambda, w.cfg.weights);
    for (size_t k = 0; k < inbox.size(); ++k) {
      MemoryItem item;
      item.message = inbox[k].message;
      item.received_step = s;
      item.source = inbox[k].source;
      item.time_s = 1.0;
      item.relevance_s = r.relevances[k];
      item.authenticity_s = w.cfg.authenticity.get(inbox[k].source);
      agent.memory.insert(std::move(item), w.cfg.weights);
      agent.seen_messages.insert(inbox[k].message.id);
    }

    if (agent.emotion != r.emotion) {
      if (w.log) {
        w.log->write(TransitionRecord{s, agent.user_id, "emotion",
                                      std::string(to_string(agent.emotion)),
                                      std::string(to_string(r.emotion))});
      }
      agent.emotion = r.emotion;
    }
    if (r.attitude && agent.attitude != r.attitude) {
      if (w.log) {
        w.log->write(TransitionRecord{
            s, agent.user_id, "attitude",
            agent.attitude ? std::string(to_string(*agent.attitude)) : std::string("none"),
            std::string(to_string(*r.attitude))});
      }
      agent.attitude = r.attitude;
    }
    agent.steps_since_stimulus = 0;

    bool posted_new = false;
    for (size_t k = 0; k < inbox.size(); ++k) {
      const Message& msg = inbox[k].message;
      const ActionDecision& decision = r.decisions[k];
      if (w.log) {
        w.log->write(ActionRecord{s, agent.user_id, msg.id, decision.action, decision.score});
      }
      if (decision.action == Action::Forward) {
        Message fwd;
        fwd.id = engine_detail::make_message_id(w.event.event_id, s, agent.user_id,
                                                production_counter[agent.user_id]++);
        fwd.author = agent.user_id;
        fwd.step = s;
        fwd.content = msg.content;
        fwd.forward_of = msg.id;
        fwd.event_id = w.event.event_id;
        fwd.stance = msg.stance;
        ++w.forward_counts[msg.id];
        if (w.log) w.log->write(MessageRecord{fwd});
        engine_detail::register_own_message(w, agent, fwd, r.attr_embedding);
        produced.push_back(std::move(fwd));
      } else if (decision.action == Action::PostNew && !posted_new && r.new_post_text) {
        posted_new = true;
        Message post;
        post.id = engine_detail::make_message_id(w.event.event_id, s, agent.user_id,
                                                 production_counter[agent.user_id]++);
        post.author = agent.user_id;
        post.step = s;
        post.content = *r.new_post_text;
        post.event_id = w.event.event_id;
        post.stance = r.attitude;
        if (w.log) w.log->write(MessageRecord{post});
        engine_detail::register_own_message(w, agent, post, r.attr_embedding);
        produced.push_back(std::move(post));
      }
    }
  }
  w.last_step_messages += static_cast<long>(produced.size());

  // Idle agents only decay and rescore.
  std::set<const AgentState*> busy_set;
  for (const auto& [agent, _] : busy) busy_set.insert(agent);
  for (auto& [id, agent] : w.agents) {
    if (busy_set.count(&agent)) continue;
    agent.memory.rescore(s, w.cfg.lambda, w.cfg.weights);
    ++agent.steps_since_stimulus;
    const EmotionLevel before = agent.emotion;
    if (decay_emotion(agent, agent.steps_since_stimulus, w.cfg.decay_threshold)) {
      agent.steps_since_stimulus = 0;
      if (w.log) {
        w.log->write(TransitionRecord{s, agent.user_id, "emotion",
                                      std::string(to_string(before)),
                                      std::string(to_string(agent.emotion))});
      }
    }
  }

  for (const auto& msg : produced) {
    engine_detail::deliver_to_followers(w, msg);
  }

  // Platform recommendation channel.
  const auto& rec = w.cfg.recommendation;
  if (rec.enabled && !w.forward_counts.empty()) {
    std::vector<std::pair<long, std::string>> ranked;
    ranked.reserve(w.forward_counts.size());
    for (const auto& [id, count] : w.forward_counts) ranked.emplace_back(count, id);
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    if (ranked.size() > static_cast<size_t>(std::max(0, rec.top_k))) {
      ranked.resize(static_cast<size_t>(std::max(0, rec.top_k)));
    }

    std::vector<AgentState*> unaware;
    for (auto& [id, agent] : w.agents) {
      if (!agent.aware(w.event.event_id)) unaware.push_back(&agent);
    }
    const size_t want = std::min(unaware.size(), static_cast<size_t>(std::max(0, rec.sample_size)));
    for (size_t i = 0; i < want; ++i) {
      const size_t j = i + static_cast<size_t>(w.rng() % (unaware.size() - i));
      std::swap(unaware[i], unaware[j]);
    }
    for (size_t i = 0; i < want; ++i) {
      for (const auto& [count, msg_id] : ranked) {
        const Message& msg = w.message_store.at(msg_id);
        if (msg.author == unaware[i]->user_id) continue;
        if (unaware[i]->seen_messages.count(msg_id)) continue;
        w.mailboxes[unaware[i]->user_id].push_back({msg, SourceRelation::PlatformRecommendation});
        if (w.log) {
          w.log->write(DeliveryRecord{s + 1, msg_id, unaware[i]->user_id,
                                      SourceRelation::PlatformRecommendation});
        }
      }
    }
  }

  // Seed posts scheduled for this step enter the world now.
  while (!w.scheduled.empty() && w.scheduled.front().step == s) {
    engine_detail::apply_seed_post(w, w.scheduled.front(), s, production_counter);
    w.scheduled.erase(w.scheduled.begin());
  }

  w.clock = s;
}

inline std::vector<AgentSnapshot> snapshot_agents(const World& w) {
  std::vector<AgentSnapshot> snaps;
  snaps.reserve(w.agents.size());
  for (const auto& [id, agent] : w.agents) snaps.push_back(agent.snapshot(w.event.event_id));
  return snaps;
}

inline MetricsRow observe(const World& w) {
  const auto snaps = snapshot_agents(w);
  MetricsRow row;
  row.step = w.clock;
  row.aware = static_cast<long>(
      std::count_if(snaps.begin(), snaps.end(), [](const AgentSnapshot& a) { return a.aware; }));
  row.emotion_density = emotion_density(snaps);
  row.positive_fraction = positive_fraction(snaps);
  row.messages = w.last_step_messages;
  return row;
}

using Observer = std::function<void(const World&, const MetricsRow&)>;

// Runs until max_steps or quiescence; the observer fires after every
// observation, including the initial one.
inline MetricsSeries run(World& w, const Observer& observer = {}) {
  if (!w.injected) throw std::logic_error("run before inject_event");
  MetricsSeries series;
  series.push_back(observe(w));
  if (observer) observer(w, series.back());
  while (w.clock < w.event.max_steps && !quiescent(w)) {
    step(w);
    series.push_back(observe(w));
    if (observer) observer(w, series.back());
  }
  return series;
}

}  // namespace s3
