#include "social_gym/agents.hpp"

#include <algorithm>
#include <cassert>

#include <fmt/format.h>

#include "social_gym/error.hpp"

namespace social_gym {
namespace {

std::size_t yes_count(std::span<const std::string> names, const Ontology& ontology, const FeatureDimension& dim,
                      const std::string& value) {
  std::size_t yes = 0;
  for (const auto& name : names) {
    if (feature_value(ontology, name, dim.name) == value) ++yes;
  }
  return yes;
}

TrialRecord finish_or_exhaust(TrialState& trial, const std::vector<std::string>& consistent) {
  return trial.submit_guess(*std::min_element(consistent.begin(), consistent.end()));
}

template <typename Chooser>
TrialRecord run_filtering_learner(TrialState& trial, Chooser choose) {
  const auto& ontology = trial.ontology();
  for (;;) {
    // Learner-side bookkeeping: the learner has the ontology and the public
    // log, which is all it needs to track the consistent set itself.
    const auto consistent = filter_consistent(ontology, trial.candidates(), trial.log());
    assert(!consistent.empty());
    if (consistent.size() == 1) return trial.submit_guess(consistent.front());
    if (trial.phase() == Phase::Exhausted) return finish_or_exhaust(trial, consistent);
    trial.ask(Question{choose(consistent)});
  }
}

std::string format_history(const std::vector<LogEntry>& history) {
  if (history.empty()) return "(none)";
  std::string out;
  for (std::size_t i = 0; i < history.size(); ++i) {
    if (i > 0) out += '\n';
    out += fmt::format("{}. {} = {}? -> {}", i + 1, history[i].predicate.dimension, history[i].predicate.value,
                       to_string(history[i].answer));
  }
  return out;
}

}  // namespace

void check_descriptor(const AgentDescriptor& descriptor) {
  if (descriptor.kind == AgentKind::Llm && (!descriptor.model_name || descriptor.model_name->empty())) {
    throw Error(ErrorCode::InvalidConfig, "LLM agents require a model name");
  }
  if (descriptor.role == AgentRole::Oracle && descriptor.kind == AgentKind::Llm) {
    throw Error(ErrorCode::InvalidConfig, "the oracle is always deterministic");
  }
}

LearnerView make_learner_view(const TrialState& state, std::string knowledge_context, bool disclose_candidates) {
  LearnerView view;
  view.candidate_names = state.candidates();
  view.candidates_disclosed = disclose_candidates;
  view.history = state.log();
  view.budget_remaining = state.budget_remaining();
  view.knowledge_context = std::move(knowledge_context);
  return view;
}

std::vector<Predicate> informative_predicates(std::span<const std::string> consistent, const Ontology& ontology) {
  std::vector<Predicate> out;
  for (const auto& dim : ontology.dimensions) {
    for (const auto& value : dim.values) {
      const auto yes = yes_count(consistent, ontology, dim, value);
      if (yes > 0 && yes < consistent.size()) out.push_back({dim.name, value});
    }
  }
  return out;
}

Predicate halving_choose(std::span<const std::string> consistent, const Ontology& ontology) {
  std::optional<Predicate> best;
  std::size_t best_worst = consistent.size();
  for (const auto& dim : ontology.dimensions) {
    for (const auto& value : dim.values) {
      const auto yes = yes_count(consistent, ontology, dim, value);
      if (yes == 0 || yes == consistent.size()) continue;
      const auto worst = std::max(yes, consistent.size() - yes);
      if (worst < best_worst) {
        best_worst = worst;
        best = Predicate{dim.name, value};
      }
    }
  }
  if (!best) {
    throw Error(ErrorCode::NoInformativePredicate,
                fmt::format("no predicate separates the {} remaining candidates", consistent.size()));
  }
  return *best;
}

TrialRecord run_halving_learner(TrialState& trial) {
  return run_filtering_learner(trial, [&](const std::vector<std::string>& consistent) {
    return halving_choose(consistent, trial.ontology());
  });
}

TrialRecord run_random_learner(TrialState& trial, std::uint64_t seed) {
  Rng rng(seed);
  return run_filtering_learner(trial, [&](const std::vector<std::string>& consistent) {
    const auto options = informative_predicates(consistent, trial.ontology());
    if (options.empty()) {
      throw Error(ErrorCode::NoInformativePredicate,
                  fmt::format("no predicate separates the {} remaining candidates", consistent.size()));
    }
    return options[rng.index(options.size())];
  });
}

std::string_view to_string(LearnerEventKind kind) noexcept {
  switch (kind) {
    case LearnerEventKind::Reprompt: return "REPROMPT";
    case LearnerEventKind::ForcedQuestion: return "FORCED_QUESTION";
    case LearnerEventKind::ForcedGuess: return "FORCED_GUESS";
  }
  return "REPROMPT";
}

nlohmann::ordered_json to_json(const LearnerEvent& event) {
  nlohmann::ordered_json doc;
  doc["event"] = std::string(to_string(event.kind));
  doc["trial_index"] = event.trial_index;
  doc["question_number"] = event.question_number;
  doc["detail"] = event.detail;
  return doc;
}

std::string expert_knowledge_context(const Ontology& ontology, const PromptLibrary& prompts) {
  return prompts.render("learner_knowledge_expert", {{"ontology", strip_trailing_newlines(serialize(ontology))}});
}

ChatRequest build_learner_turn_request(const LearnerView& view, const LlmLearnerConfig& config,
                                       const PromptLibrary& prompts) {
  ChatRequest request;
  request.model_name = config.model_name;
  request.temperature = config.temperature;
  request.max_tokens = config.max_tokens;
  request.messages.push_back({Role::System, prompts.render("learner_test_system", {{"knowledge", view.knowledge_context}})});
  const std::string candidates =
      view.candidates_disclosed ? fmt::format("{}", fmt::join(view.candidate_names, ", ")) : "(not disclosed)";
  const std::string directive =
      prompts.get(view.budget_remaining > 0 ? "learner_test_directive_ask" : "learner_test_directive_guess");
  request.messages.push_back({Role::User, prompts.render("learner_test_turn", {{"candidates", candidates},
                                                                               {"history", format_history(view.history)},
                                                                               {"remaining", std::to_string(view.budget_remaining)},
                                                                               {"directive", directive}})});
  return request;
}

LearnerTurn llm_learner_turn(const LearnerView& view, ChatTransport& transport, const Ontology& ontology,
                             const LlmLearnerConfig& config, const TurnFallback& fallback,
                             const PromptLibrary& prompts) {
  LearnerTurn turn{Guess{}, {}};
  const int asked = static_cast<int>(view.history.size());
  ChatRequest request = build_learner_turn_request(view, config, prompts);

  for (int attempt = 1; attempt <= std::max(1, config.max_attempts); ++attempt) {
    const std::string reply = transport.complete(request).text;
    auto parsed = parse_learner_utterance(reply, ontology);
    std::string problem;
    if (auto* question = std::get_if<Question>(&parsed)) {
      if (view.budget_remaining > 0) {
        turn.move = std::move(*question);
        return turn;
      }
      problem = "no questions remain, a GUESS is required";
    } else if (auto* guess = std::get_if<Guess>(&parsed)) {
      if (std::find(view.candidate_names.begin(), view.candidate_names.end(), guess->species) !=
          view.candidate_names.end()) {
        turn.move = std::move(*guess);
        return turn;
      }
      problem = fmt::format("{} is not one of the candidates", guess->species);
    } else {
      const auto& failure = std::get<ParseFailure>(parsed);
      problem = fmt::format("{} ({})", to_string(failure.reason), failure.detail);
    }
    if (attempt < config.max_attempts) {
      turn.events.push_back({LearnerEventKind::Reprompt, 0, asked, problem});
      request.messages.push_back({Role::Assistant, reply});
      request.messages.push_back({Role::User, prompts.render("learner_format_reminder", {{"reason", problem}})});
    }
  }

  if (view.budget_remaining > 0 && !fallback.informative.empty()) {
    const std::size_t pick = fallback.rng != nullptr ? fallback.rng->index(fallback.informative.size()) : 0;
    const Predicate predicate = fallback.informative[pick];
    turn.events.push_back({LearnerEventKind::ForcedQuestion, 0, asked,
                           fmt::format("{} unusable replies; substituted {}", config.max_attempts, to_string(predicate))});
    turn.move = Question{predicate};
    return turn;
  }
  const auto& pool = fallback.consistent.empty() ? view.candidate_names : fallback.consistent;
  const std::string choice = *std::min_element(pool.begin(), pool.end());
  turn.events.push_back({LearnerEventKind::ForcedGuess, 0, asked,
                         fmt::format("{} unusable replies; guessed {}", config.max_attempts, choice)});
  turn.move = Guess{choice};
  return turn;
}

LlmTrialResult run_llm_learner(TrialState& trial, ChatTransport& transport, const std::string& knowledge_context,
                               const LlmLearnerConfig& config, bool disclose_candidates, const PromptLibrary& prompts) {
  Rng rng(trial.meta().rng_seed);
  LlmTrialResult result;
  for (;;) {
    const auto view = make_learner_view(trial, knowledge_context, disclose_candidates);
    TurnFallback fallback{informative_predicates(trial.consistent_set(), trial.ontology()), trial.consistent_set(), &rng};
    auto turn = llm_learner_turn(view, transport, trial.ontology(), config, fallback, prompts);
    for (auto& event : turn.events) {
      event.trial_index = trial.meta().trial_index;
      result.events.push_back(std::move(event));
    }
    if (const auto* guess = std::get_if<Guess>(&turn.move)) {
      result.record = trial.submit_guess(guess->species);
      return result;
    }
    trial.ask(std::get<Question>(turn.move));
  }
}

}  // namespace social_gym
