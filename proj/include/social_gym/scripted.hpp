#pragma once

#include <atomic>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "social_gym/ontology.hpp"
#include "social_gym/pedagogy.hpp"
#include "social_gym/strategy.hpp"
#include "social_gym/transport.hpp"

namespace social_gym {

// A fact stated in prose as "<Species>'s <Feature> is <Value>."
struct StatedFact {
  std::string species;
  std::string feature;
  std::string value;

  bool operator==(const StatedFact&) const = default;
};

std::vector<StatedFact> extract_facts(std::string_view text);

// Deterministic, rule-based chat backend. It plays every role the harness
// asks a model to play (ontology author, teacher, training learner, test
// learner) by reading the shipped prompt templates, and its replies depend
// only on the request. It is the offline fallback used to record the demo
// cassettes; it is not a language model and its scores say nothing about
// one.
class ScriptedChatModel final : public ChatTransport {
 public:
  struct Options {
    // Probability that a first-attempt test move is phrased loosely or is
    // unusable, to exercise lenient parsing and reprompting.
    double loose_phrasing_rate = 0.12;
    double unusable_reply_rate = 0.05;
  };

  ScriptedChatModel() = default;
  explicit ScriptedChatModel(Options options) : options_(options) {}

  ChatResponse complete(const ChatRequest& request) override;
  int calls() const noexcept { return calls_.load(); }

 private:
  Options options_;
  std::atomic<int> calls_{0};
};

// Teacher and learner session agents backed by one scripted model.
struct ScriptedSession {
  std::shared_ptr<ScriptedChatModel> model;
  std::unique_ptr<LlmSessionAgent> teacher;
  std::unique_ptr<LlmSessionAgent> learner;
};

ScriptedSession make_scripted_session(StrategyId strategy, const Ontology& ontology, const SessionConfig& config = {});

}  // namespace social_gym
