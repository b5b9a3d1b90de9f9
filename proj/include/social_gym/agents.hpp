#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "social_gym/game.hpp"
#include "social_gym/ontology.hpp"
#include "social_gym/prompts.hpp"
#include "social_gym/random.hpp"
#include "social_gym/transport.hpp"

namespace social_gym {

enum class AgentRole { Teacher, Learner, Oracle };
enum class AgentKind { DeterministicHalving, DeterministicRandom, Llm };

struct AgentDescriptor {
  AgentRole role = AgentRole::Learner;
  AgentKind kind = AgentKind::DeterministicHalving;
  std::optional<std::string> model_name;
  std::string system_prompt;
};

// LLM agents need a model name; the oracle is never an LLM here.
// Throws Error(InvalidConfig).
void check_descriptor(const AgentDescriptor& descriptor);

// Everything a test-phase learner may see. Never the hidden target; never
// the raw ontology except for the expert baseline, whose knowledge_context
// is the ontology itself.
struct LearnerView {
  std::vector<std::string> candidate_names;
  bool candidates_disclosed = true;
  std::vector<LogEntry> history;
  int budget_remaining = 0;
  std::string knowledge_context;
};

LearnerView make_learner_view(const TrialState& state, std::string knowledge_context, bool disclose_candidates = true);

// Predicates that split `consistent` into two non-empty sides, in ontology
// (dimension, then value) order.
std::vector<Predicate> informative_predicates(std::span<const std::string> consistent, const Ontology& ontology);

// Minimises the larger side of the split; ties go to the earliest dimension,
// then the earliest value. Throws Error(NoInformativePredicate).
Predicate halving_choose(std::span<const std::string> consistent, const Ontology& ontology);

// Full-knowledge learners. Both guess as soon as one candidate remains and
// fall back to the lexicographically first consistent candidate when the
// budget runs out.
TrialRecord run_halving_learner(TrialState& trial);
TrialRecord run_random_learner(TrialState& trial, std::uint64_t seed);

// --- free-text utterances ---------------------------------------------------

struct Guess {
  std::string species;

  bool operator==(const Guess&) const = default;
};

enum class ParseFailureReason {
  Empty,
  NotYesNo,
  NoFeatureMention,
  Ambiguous,
  Compound,
  UnknownDimension,
  ValueOutOfDomain,
  UnknownSpecies,
};

std::string_view to_string(ParseFailureReason reason) noexcept;

struct ParseFailure {
  ParseFailureReason reason;
  std::string detail;
};

using ParsedUtterance = std::variant<Question, Guess, ParseFailure>;

// Strict grammar, one directive per reply:
//   QUESTION: <dimension> = <value>?
//   GUESS: <species>
// Strict questions come back as a Predicate. Otherwise a lenient pass looks
// for a yes/no-shaped sentence mentioning exactly one value label
// (case-insensitive, whole words) and returns a FreeTextQuestion carrying the
// extracted predicate. Every predicate returned is valid for the ontology.
ParsedUtterance parse_learner_utterance(std::string_view text, const Ontology& ontology);

// --- LLM learner ----------------------------------------------------------

struct LlmLearnerConfig {
  std::string model_name = "gpt-4o";
  double temperature = kDefaultTemperature;
  int max_tokens = kDefaultMaxTokens;
  // Replies per turn before a forced move is substituted.
  int max_attempts = 3;
};

enum class LearnerEventKind { Reprompt, ForcedQuestion, ForcedGuess };

std::string_view to_string(LearnerEventKind kind) noexcept;

struct LearnerEvent {
  LearnerEventKind kind;
  int trial_index = 0;
  int question_number = 0;  // questions already asked when the event fired
  std::string detail;

  bool operator==(const LearnerEvent&) const = default;
};

nlohmann::ordered_json to_json(const LearnerEvent& event);

using LearnerMove = std::variant<Question, Guess>;

struct LearnerTurn {
  LearnerMove move;
  std::vector<LearnerEvent> events;
};

// Harness-side material for forced moves; the learner never sees it.
struct TurnFallback {
  std::vector<Predicate> informative;
  std::vector<std::string> consistent;
  Rng* rng = nullptr;
};

ChatRequest build_learner_turn_request(const LearnerView& view, const LlmLearnerConfig& config,
                                       const PromptLibrary& prompts = PromptLibrary::builtin());

// One test-phase move. Malformed replies are reprompted with a format
// reminder; after max_attempts failures a random informative predicate (or,
// with no budget left, the first consistent candidate) is substituted and a
// FORCED_* event is reported. Transport errors propagate.
LearnerTurn llm_learner_turn(const LearnerView& view, ChatTransport& transport, const Ontology& ontology,
                             const LlmLearnerConfig& config, const TurnFallback& fallback,
                             const PromptLibrary& prompts = PromptLibrary::builtin());

struct LlmTrialResult {
  TrialRecord record;
  std::vector<LearnerEvent> events;
};

LlmTrialResult run_llm_learner(TrialState& trial, ChatTransport& transport, const std::string& knowledge_context,
                               const LlmLearnerConfig& config, bool disclose_candidates = true,
                               const PromptLibrary& prompts = PromptLibrary::builtin());

// Knowledge block for the expert baseline: the ontology verbatim.
std::string expert_knowledge_context(const Ontology& ontology, const PromptLibrary& prompts = PromptLibrary::builtin());

}  // namespace social_gym
